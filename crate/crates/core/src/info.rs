//! Finite-alphabet probability primitives.
//!
//! Everything here is reported in bits. Terms with zero probability are
//! skipped rather than evaluated, so `0 log 0 = 0` holds structurally.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Side};

/// Tolerance on `|sum - 1|` accepted at construction time.
pub const SUM_TOL: f64 = 1e-12;

const LN_2: f64 = std::f64::consts::LN_2;

/// A probability vector over an indexed finite alphabet.
///
/// Entries are validated (non-negative, finite, summing to one within
/// [`SUM_TOL`]) and then renormalized by their sum.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteDistribution {
    probs: Vec<f64>,
}

impl FiniteDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        let total = validated_total(&probs)?;
        if (total - 1.0).abs() > SUM_TOL {
            return Err(Error::InvalidDistribution(format!(
                "entries sum to {total}, not 1"
            )));
        }
        Ok(Self::renormalized(probs, total))
    }

    /// Normalizes arbitrary non-negative weights with a positive total.
    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        let total = validated_total(&weights)?;
        if total <= 0.0 {
            return Err(Error::InvalidDistribution("weights sum to zero".into()));
        }
        Ok(Self::renormalized(weights, total))
    }

    fn renormalized(mut probs: Vec<f64>, total: f64) -> Self {
        if total != 1.0 {
            for p in &mut probs {
                *p /= total;
            }
        }
        FiniteDistribution { probs }
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDistribution("empty alphabet".into()));
        }
        Ok(FiniteDistribution {
            probs: vec![1.0 / n as f64; n],
        })
    }

    pub fn point_mass(n: usize, at: usize) -> Result<Self> {
        if at >= n {
            return Err(Error::Dimension {
                what: "point mass index",
                expected: n,
                got: at,
            });
        }
        let mut probs = vec![0.0; n];
        probs[at] = 1.0;
        Ok(FiniteDistribution { probs })
    }

    /// `(1 - q, q)` over `{0, 1}`.
    pub fn bernoulli(q: f64) -> Result<Self> {
        crate::error::check_range("q", q, 0.0, 1.0, "[0, 1]")?;
        Ok(FiniteDistribution {
            probs: vec![1.0 - q, q],
        })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn get(&self, i: usize) -> f64 {
        self.probs[i]
    }

    pub fn entropy(&self) -> f64 {
        entropy(self)
    }
}

fn validated_total(probs: &[f64]) -> Result<f64> {
    if probs.is_empty() {
        return Err(Error::InvalidDistribution("empty alphabet".into()));
    }
    let mut total = 0.0;
    for (i, &p) in probs.iter().enumerate() {
        if !p.is_finite() || p < 0.0 {
            return Err(Error::InvalidDistribution(format!(
                "entry {i} is {p}"
            )));
        }
        total += p;
    }
    Ok(total)
}

/// Shannon entropy in bits.
pub fn entropy(d: &FiniteDistribution) -> f64 {
    entropy_of(d.probs())
}

/// Shannon entropy in bits of a probability slice; zero entries are skipped.
pub fn entropy_of(probs: &[f64]) -> f64 {
    let h: f64 = probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum();
    h.max(0.0)
}

/// Binary entropy `h(p)` in bits.
pub fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
}

/// Binary relative entropy `D(p || q)` in bits.
///
/// Returns `+inf` when `p > 0 = q` or `p < 1 = q`.
pub fn binary_divergence(p: f64, q: f64) -> f64 {
    let mut d = 0.0;
    if p > 0.0 {
        if q <= 0.0 {
            return f64::INFINITY;
        }
        d += p * (p / q).log2();
    }
    if p < 1.0 {
        if q >= 1.0 {
            return f64::INFINITY;
        }
        d += (1.0 - p) * ((1.0 - p) / (1.0 - q)).log2();
    }
    d.max(0.0)
}

/// Relative entropy `D(P || Q)` in bits; `+inf` when `Q` misses mass of `P`.
pub fn relative_entropy(p: &FiniteDistribution, q: &FiniteDistribution) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::Dimension {
            what: "relative entropy arguments",
            expected: p.len(),
            got: q.len(),
        });
    }
    let mut d = 0.0;
    for (&pi, &qi) in p.probs().iter().zip(q.probs()) {
        if pi > 0.0 {
            if qi <= 0.0 {
                return Ok(f64::INFINITY);
            }
            d += pi * (pi / qi).log2();
        }
    }
    Ok(d.max(0.0))
}

/// A joint distribution `P_XY` on a finite product alphabet.
///
/// Stored sparsely: only strictly positive entries are kept, row by row in
/// ascending column order. The JSON form is the dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    n_y: usize,
    rows: Vec<Vec<(usize, f64)>>,
    px: FiniteDistribution,
    py: FiniteDistribution,
}

impl JointDistribution {
    /// Builds a joint from a dense row-major matrix.
    pub fn new(matrix: Vec<Vec<f64>>) -> Result<Self> {
        let n_y = matrix.first().map_or(0, Vec::len);
        let mut rows = Vec::with_capacity(matrix.len());
        for (x, row) in matrix.iter().enumerate() {
            if row.len() != n_y {
                return Err(Error::Dimension {
                    what: "joint matrix row",
                    expected: n_y,
                    got: row.len(),
                });
            }
            let _ = x;
            rows.push(
                row.iter()
                    .enumerate()
                    .filter(|(_, &p)| p != 0.0)
                    .map(|(y, &p)| (y, p))
                    .collect(),
            );
        }
        Self::from_sparse(n_y, rows)
    }

    /// Builds a joint from per-row lists of `(y, probability)` entries.
    ///
    /// Entries must have distinct, in-range column indices; zero entries
    /// are dropped.
    pub fn from_sparse(n_y: usize, rows: Vec<Vec<(usize, f64)>>) -> Result<Self> {
        if rows.is_empty() || n_y == 0 {
            return Err(Error::InvalidDistribution("empty joint alphabet".into()));
        }
        let mut total = 0.0;
        let mut cleaned = Vec::with_capacity(rows.len());
        for mut row in rows {
            row.retain(|&(_, p)| p != 0.0);
            row.sort_by_key(|&(y, _)| y);
            for w in row.windows(2) {
                if w[0].0 == w[1].0 {
                    return Err(Error::InvalidDistribution(format!(
                        "duplicate column {} in a row",
                        w[0].0
                    )));
                }
            }
            for &(y, p) in &row {
                if y >= n_y {
                    return Err(Error::Dimension {
                        what: "joint column index",
                        expected: n_y,
                        got: y,
                    });
                }
                if !p.is_finite() || p < 0.0 {
                    return Err(Error::InvalidDistribution(format!("joint entry is {p}")));
                }
                total += p;
            }
            cleaned.push(row);
        }
        if (total - 1.0).abs() > SUM_TOL {
            return Err(Error::InvalidDistribution(format!(
                "joint entries sum to {total}, not 1"
            )));
        }
        if total != 1.0 {
            for row in &mut cleaned {
                for e in row.iter_mut() {
                    e.1 /= total;
                }
            }
        }
        let mut px = vec![0.0; cleaned.len()];
        let mut py = vec![0.0; n_y];
        for (x, row) in cleaned.iter().enumerate() {
            for &(y, p) in row {
                px[x] += p;
                py[y] += p;
            }
        }
        Ok(JointDistribution {
            n_y,
            rows: cleaned,
            px: FiniteDistribution::from_weights(px)?,
            py: FiniteDistribution::from_weights(py)?,
        })
    }

    /// `P(x, y) = P_X(x) P_Y(y)`.
    pub fn product(px: &FiniteDistribution, py: &FiniteDistribution) -> Result<Self> {
        let rows = px
            .probs()
            .iter()
            .map(|&a| {
                py.probs()
                    .iter()
                    .enumerate()
                    .map(|(y, &b)| (y, a * b))
                    .collect()
            })
            .collect();
        Self::from_sparse(py.len(), rows)
    }

    pub fn n_x(&self) -> usize {
        self.rows.len()
    }

    pub fn n_y(&self) -> usize {
        self.n_y
    }

    pub fn px(&self) -> &FiniteDistribution {
        &self.px
    }

    pub fn py(&self) -> &FiniteDistribution {
        &self.py
    }

    /// Positive entries of row `x`, ascending in `y`.
    pub fn row(&self, x: usize) -> &[(usize, f64)] {
        &self.rows[x]
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.rows[x]
            .binary_search_by_key(&y, |&(c, _)| c)
            .map_or(0.0, |i| self.rows[x][i].1)
    }

    /// All positive entries as `(x, y, p)`, row-major.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(x, row)| row.iter().map(move |&(y, p)| (x, y, p)))
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        self.rows
            .iter()
            .map(|row| {
                let mut dense = vec![0.0; self.n_y];
                for &(y, p) in row {
                    dense[y] = p;
                }
                dense
            })
            .collect()
    }

    pub fn entropy(&self) -> f64 {
        let h: f64 = self.entries().map(|(_, _, p)| -p * p.log2()).sum();
        h.max(0.0)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: JointFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::new(file.matrix)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&JointFile {
            matrix: self.to_dense(),
        })
        .expect("dense matrix serializes")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JointFile {
    matrix: Vec<Vec<f64>>,
}

/// Exact mutual information `I(X;Y)` in bits.
pub fn mutual_information(j: &JointDistribution) -> f64 {
    let px = j.px().probs();
    let py = j.py().probs();
    let nats: f64 = j
        .entries()
        .map(|(x, y, p)| p * (p.ln() - px[x].ln() - py[y].ln()))
        .sum();
    (nats / LN_2).max(0.0)
}

/// The support of a joint together with its marginals.
///
/// `x ~ y` is stored as adjacency lists in both directions. Construction
/// rejects supports where a symbol with positive mass has no adjacent
/// partner of positive mass, since no joint can then match the marginals.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjacencyProblem {
    px: FiniteDistribution,
    py: FiniteDistribution,
    row_adj: Vec<Vec<usize>>,
    col_adj: Vec<Vec<usize>>,
}

impl AdjacencyProblem {
    /// Builds a problem from a dense `|X| x |Y|` mask.
    pub fn new(
        px: FiniteDistribution,
        py: FiniteDistribution,
        support: &[Vec<bool>],
    ) -> Result<Self> {
        if support.len() != px.len() {
            return Err(Error::Dimension {
                what: "support rows",
                expected: px.len(),
                got: support.len(),
            });
        }
        let mut row_adj = Vec::with_capacity(support.len());
        for row in support {
            if row.len() != py.len() {
                return Err(Error::Dimension {
                    what: "support columns",
                    expected: py.len(),
                    got: row.len(),
                });
            }
            row_adj.push(
                row.iter()
                    .enumerate()
                    .filter(|(_, &a)| a)
                    .map(|(y, _)| y)
                    .collect(),
            );
        }
        Self::from_lists(px, py, row_adj)
    }

    /// Builds a problem from the list of adjacent outputs of every input.
    pub fn from_lists(
        px: FiniteDistribution,
        py: FiniteDistribution,
        mut row_adj: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if row_adj.len() != px.len() {
            return Err(Error::Dimension {
                what: "support rows",
                expected: px.len(),
                got: row_adj.len(),
            });
        }
        let mut col_adj = vec![Vec::new(); py.len()];
        for (x, ys) in row_adj.iter_mut().enumerate() {
            ys.sort_unstable();
            ys.dedup();
            for &y in ys.iter() {
                if y >= py.len() {
                    return Err(Error::Dimension {
                        what: "support column index",
                        expected: py.len(),
                        got: y,
                    });
                }
                col_adj[y].push(x);
            }
        }
        for (x, ys) in row_adj.iter().enumerate() {
            if px.get(x) > 0.0 && !ys.iter().any(|&y| py.get(y) > 0.0) {
                return Err(Error::InfeasibleSupport {
                    side: Side::Row,
                    index: x,
                });
            }
        }
        for (y, xs) in col_adj.iter().enumerate() {
            if py.get(y) > 0.0 && !xs.iter().any(|&x| px.get(x) > 0.0) {
                return Err(Error::InfeasibleSupport {
                    side: Side::Column,
                    index: y,
                });
            }
        }
        Ok(AdjacencyProblem {
            px,
            py,
            row_adj,
            col_adj,
        })
    }

    pub fn px(&self) -> &FiniteDistribution {
        &self.px
    }

    pub fn py(&self) -> &FiniteDistribution {
        &self.py
    }

    pub fn n_x(&self) -> usize {
        self.px.len()
    }

    pub fn n_y(&self) -> usize {
        self.py.len()
    }

    /// Outputs adjacent to input `x`, ascending.
    pub fn adjacent_outputs(&self, x: usize) -> &[usize] {
        &self.row_adj[x]
    }

    /// Inputs adjacent to output `y`, ascending.
    pub fn adjacent_inputs(&self, y: usize) -> &[usize] {
        &self.col_adj[y]
    }

    pub fn is_adjacent(&self, x: usize, y: usize) -> bool {
        self.row_adj[x].binary_search(&y).is_ok()
    }

    pub fn support_mask(&self) -> Vec<Vec<bool>> {
        self.row_adj
            .iter()
            .map(|ys| {
                let mut row = vec![false; self.py.len()];
                for &y in ys {
                    row[y] = true;
                }
                row
            })
            .collect()
    }

    /// `E_X 1(X ~ y)` for every output `y`.
    pub fn column_mass(&self) -> Vec<f64> {
        self.col_adj
            .iter()
            .map(|xs| xs.iter().map(|&x| self.px.get(x)).sum())
            .collect()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ProblemFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let mut support = Vec::with_capacity(file.support.len());
        for row in &file.support {
            let mut mask = Vec::with_capacity(row.len());
            for &v in row {
                match v {
                    0 => mask.push(false),
                    1 => mask.push(true),
                    other => {
                        return Err(Error::Parse(format!(
                            "support entries must be 0 or 1, found {other}"
                        )))
                    }
                }
            }
            support.push(mask);
        }
        Self::new(
            FiniteDistribution::new(file.px)?,
            FiniteDistribution::new(file.py)?,
            &support,
        )
    }

    pub fn to_json(&self) -> String {
        let support = self
            .support_mask()
            .into_iter()
            .map(|row| row.into_iter().map(u8::from).collect())
            .collect();
        serde_json::to_string(&ProblemFile {
            px: self.px.probs().to_vec(),
            py: self.py.probs().to_vec(),
            support,
        })
        .expect("problem serializes")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemFile {
    px: Vec<f64>,
    py: Vec<f64>,
    support: Vec<Vec<u8>>,
}

/// Extracts `(P_X, P_Y, 1(x~y))` from a joint, with `x ~ y` iff `P(x,y) > zero_tol`.
pub fn adjacency_of(j: &JointDistribution, zero_tol: f64) -> Result<AdjacencyProblem> {
    if !(zero_tol >= 0.0) {
        return Err(Error::ParameterRange {
            name: "zero_tol",
            value: zero_tol,
            range: "[0, inf)",
        });
    }
    let row_adj = (0..j.n_x())
        .map(|x| {
            j.row(x)
                .iter()
                .filter(|&&(_, p)| p > zero_tol)
                .map(|&(y, _)| y)
                .collect()
        })
        .collect();
    AdjacencyProblem::from_lists(j.px().clone(), j.py().clone(), row_adj)
}

/// Result of [`dv_identity_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct DvCheck {
    /// `E_P log2 f`.
    pub lhs: f64,
    /// `log2 E_{Q*} f + D(P || Q*)`.
    pub rhs_at_qstar: f64,
    pub qstar: FiniteDistribution,
}

fn check_dv_function(p: &FiniteDistribution, f: &[f64]) -> Result<()> {
    if f.len() != p.len() {
        return Err(Error::Dimension {
            what: "variational function",
            expected: p.len(),
            got: f.len(),
        });
    }
    for (i, (&pi, &fi)) in p.probs().iter().zip(f).enumerate() {
        if !fi.is_finite() || fi < 0.0 || (pi > 0.0 && fi == 0.0) {
            return Err(Error::Domain(format!(
                "f({i}) = {fi} must be positive on the support of P"
            )));
        }
    }
    Ok(())
}

/// The variational objective `log2 E_Q f + D(P || Q)` in bits.
pub fn dv_objective(p: &FiniteDistribution, f: &[f64], q: &FiniteDistribution) -> Result<f64> {
    check_dv_function(p, f)?;
    let mean: f64 = q.probs().iter().zip(f).map(|(&qi, &fi)| qi * fi).sum();
    Ok(mean.log2() + relative_entropy(p, q)?)
}

/// Evaluates both sides of the Donsker-Varadhan identity
/// `E_P log f = min_Q log E_Q f + D(P || Q)` at the minimizer
/// `Q*(x) = (P(x)/f(x)) / E_P(1/f)`.
pub fn dv_identity_check(p: &FiniteDistribution, f: &[f64]) -> Result<DvCheck> {
    check_dv_function(p, f)?;
    let lhs: f64 = p
        .probs()
        .iter()
        .zip(f)
        .filter(|(&pi, _)| pi > 0.0)
        .map(|(&pi, &fi)| pi * fi.log2())
        .sum();
    let weights = p
        .probs()
        .iter()
        .zip(f)
        .map(|(&pi, &fi)| if pi > 0.0 { pi / fi } else { 0.0 })
        .collect();
    let qstar = FiniteDistribution::from_weights(weights)?;
    let rhs_at_qstar = dv_objective(p, f, &qstar)?;
    Ok(DvCheck {
        lhs,
        rhs_at_qstar,
        qstar,
    })
}
