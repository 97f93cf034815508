//! Lower and upper bounds on mutual information.
//!
//! Lower bounds see only `(P_X, P_Y, support)`; the action bounds see an
//! explicit [`ActionModel`]. All values are in bits.

use crate::actions::{ActionModel, ActionSetIndex};
use crate::channels::{channel_of, joint_of};
use crate::error::{Error, Result};
use crate::info::{mutual_information, AdjacencyProblem, FiniteDistribution, JointDistribution};
use crate::report::{BoundReport, Method};

const LN_2: f64 = std::f64::consts::LN_2;

pub const DEFAULT_REL_TOL: f64 = 1e-10;
pub const DEFAULT_K_MAX: usize = 10_000;
pub const DEFAULT_MARG_TOL: f64 = 1e-12;
pub const DEFAULT_IPF_ITERS: usize = 100_000;
/// Multipliers beyond this magnitude are flagged as unbounded.
pub const MULTIPLIER_FLAG: f64 = 100.0;
/// Default cap on actions enumerated by [`action_upper_generic`].
pub const DEFAULT_STREAM_CAP: u64 = 1 << 26;

/// `-E_Y log E_X 1(X~Y)`.
pub fn baseline_lower(adj: &AdjacencyProblem) -> BoundReport {
    BoundReport::new(Method::Baseline, baseline_term(adj, &adj.column_mass()))
}

fn baseline_term(adj: &AdjacencyProblem, colmass: &[f64]) -> f64 {
    let v: f64 = adj
        .py()
        .probs()
        .iter()
        .zip(colmass)
        .filter(|(&py, _)| py > 0.0)
        .map(|(&py, &c)| -py * c.log2())
        .sum();
    v.max(0.0)
}

/// The baseline plus `-E_X log E_Y [1(X~Y) / E_X 1(X~Y)]`.
pub fn adjacency_lower(adj: &AdjacencyProblem) -> BoundReport {
    let colmass = adj.column_mass();
    let first = baseline_term(adj, &colmass);
    let py = adj.py().probs();
    let mut second = 0.0;
    for (x, &px) in adj.px().probs().iter().enumerate() {
        if px == 0.0 {
            continue;
        }
        let inner: f64 = adj
            .adjacent_outputs(x)
            .iter()
            .filter(|&&y| py[y] > 0.0)
            .map(|&y| py[y] / colmass[y])
            .sum();
        second -= px * inner.log2();
    }
    let second = second.max(0.0);
    BoundReport::new(Method::Adjacency, first + second)
        .with_diag("baseline_term", first)
        .with_diag("correction_term", second)
}

fn check_inputs(px: &FiniteDistribution, m: &ActionModel) -> Result<()> {
    if px.len() != m.n_inputs() {
        return Err(Error::Dimension {
            what: "input distribution",
            expected: m.n_inputs(),
            got: px.len(),
        });
    }
    Ok(())
}

/// Lower bound through an explicit action model:
/// `-H(A) - E_Y log E_{X,A} P(A|X,Y) - E_{X,A} log E_Y [P(A|X,Y) / E_{X,A} P(A|X,Y)]`,
/// where `E_{X,A}` is under the product `P(x) P(a)`.
pub fn action_lower(px: &FiniteDistribution, m: &ActionModel) -> Result<BoundReport> {
    check_inputs(px, m)?;
    let pa = m.probs().probs();
    let n_y = m.n_outputs();
    let mut channel = vec![vec![0.0; n_y]; m.n_inputs()];
    for (map, &p) in m.maps().iter().zip(pa) {
        for (x, &y) in map.iter().enumerate() {
            channel[x][y] += p;
        }
    }
    let mut py = vec![0.0; n_y];
    for (x, row) in channel.iter().enumerate() {
        for (y, &c) in row.iter().enumerate() {
            py[y] += px.get(x) * c;
        }
    }

    // m(y) = sum_x P(x) sum_{a(x)=y} P(a)^2 / P(y|x)
    let mut mean_post = vec![0.0; n_y];
    for (map, &p) in m.maps().iter().zip(pa) {
        if p == 0.0 {
            continue;
        }
        for (x, &y) in map.iter().enumerate() {
            if px.get(x) > 0.0 {
                mean_post[y] += px.get(x) * p * p / channel[x][y];
            }
        }
    }

    let h_a = m.entropy();
    let second: f64 = py
        .iter()
        .zip(&mean_post)
        .filter(|(&q, _)| q > 0.0)
        .map(|(&q, &mp)| -q * mp.log2())
        .sum();
    let mut third = 0.0;
    for (map, &p) in m.maps().iter().zip(pa) {
        if p == 0.0 {
            continue;
        }
        for (x, &y) in map.iter().enumerate() {
            let pxv = px.get(x);
            if pxv == 0.0 {
                continue;
            }
            let posterior = p / channel[x][y];
            third -= pxv * p * (py[y] * posterior / mean_post[y]).log2();
        }
    }
    Ok(BoundReport::new(Method::ActionLower, -h_a + second + third)
        .with_diag("action_entropy", h_a)
        .with_diag("output_term", second)
        .with_diag("correction_term", third))
}

/// Upper bound through an explicit action model:
/// `H(Y) + E_A log c(A) + E_{X,Y} log E_A [1(A(X)=Y) / c(A)]`,
/// with `c(a) = sum_x P(x, a(x))`.
pub fn action_upper(px: &FiniteDistribution, m: &ActionModel) -> Result<BoundReport> {
    check_inputs(px, m)?;
    let index = ActionSetIndex::new(m);
    let pa = m.probs().probs();
    let j = crate::actions::induced_joint(px, m)?;
    let cover: Vec<f64> = m
        .maps()
        .iter()
        .map(|map| map.iter().enumerate().map(|(x, &y)| j.get(x, y)).sum())
        .collect();
    let h_y = j.py().entropy();
    let second: f64 = pa
        .iter()
        .zip(&cover)
        .filter(|(&p, _)| p > 0.0)
        .map(|(&p, &c)| p * c.log2())
        .sum();
    let mut third = 0.0;
    for (x, y, p) in j.entries() {
        let inner: f64 = index
            .actions(x, y)
            .iter()
            .filter(|&&a| pa[a] > 0.0)
            .map(|&a| pa[a] / cover[a])
            .sum();
        third += p * inner.log2();
    }
    Ok(BoundReport::new(Method::ActionUpper, h_y + second + third)
        .with_diag("output_entropy", h_y)
        .with_diag("cover_term", second)
        .with_diag("correction_term", third)
        .with_iterations(m.n_actions()))
}

/// [`action_upper`] for the generic action set of a joint's own channel,
/// streamed rather than materialized. Inputs of zero mass do not affect
/// the bound and are marginalized out, so only maps on the supports of
/// positive-mass rows are enumerated, at most `cap` of them.
pub fn action_upper_generic(j: &JointDistribution, cap: u64) -> Result<BoundReport> {
    let c = channel_of(j);
    let px = j.px().probs();
    let live: Vec<usize> = (0..j.n_x()).filter(|&x| px[x] > 0.0).collect();
    let supports: Vec<Vec<(usize, f64, f64)>> = live
        .iter()
        .map(|&x| j.row(x).iter().map(|&(y, p)| (y, c.prob(x, y), p)).collect())
        .collect();
    let count = supports
        .iter()
        .try_fold(1u64, |acc, s| acc.checked_mul(s.len() as u64))
        .filter(|&n| n <= cap)
        .ok_or_else(|| Error::SizeCap {
            what: "streamed generic action set",
            size: supports
                .iter()
                .map(|s| num_bigint::BigUint::from(s.len()))
                .product::<num_bigint::BigUint>()
                .to_string(),
            cap,
        })?;

    let mut acc: Vec<Vec<f64>> = supports.iter().map(|s| vec![0.0; s.len()]).collect();
    let mut second = 0.0;
    let mut choice = vec![0usize; live.len()];
    walk(&supports, 0, 1.0, 0.0, &mut choice, &mut |prob, cover, choice| {
        second += prob * cover.log2();
        let w = prob / cover;
        for (row, &i) in acc.iter_mut().zip(choice) {
            row[i] += w;
        }
    });

    let mut third = 0.0;
    for (s, row) in supports.iter().zip(&acc) {
        for (&(_, _, p), &inner) in s.iter().zip(row) {
            third += p * inner.log2();
        }
    }
    let h_y = j.py().entropy();
    Ok(BoundReport::new(Method::ActionUpper, h_y + second + third)
        .with_diag("output_entropy", h_y)
        .with_diag("cover_term", second)
        .with_diag("correction_term", third)
        .with_iterations(count as usize))
}

/// Depth-first walk over maps restricted to row supports, carrying the
/// prefix probability and prefix cover.
fn walk<F: FnMut(f64, f64, &[usize])>(
    supports: &[Vec<(usize, f64, f64)>],
    depth: usize,
    prob: f64,
    cover: f64,
    choice: &mut Vec<usize>,
    leaf: &mut F,
) {
    if depth == supports.len() {
        leaf(prob, cover, choice);
        return;
    }
    for (i, &(_, cond, joint)) in supports[depth].iter().enumerate() {
        choice[depth] = i;
        walk(supports, depth + 1, prob * cond, cover + joint, choice, leaf);
    }
}

/// State of the alternating dual maximization.
#[derive(Debug, Clone, PartialEq)]
pub struct IterativeState {
    /// Input multipliers, natural-log scale.
    pub lambda: Vec<f64>,
    /// Output multipliers, natural-log scale.
    pub mu: Vec<f64>,
    /// Completed full rounds.
    pub k: usize,
    /// Dual objective in bits after every half-step, starting from
    /// `G(0, mu^(0))`.
    pub g_values: Vec<f64>,
}

fn log_sum_exp(terms: impl Iterator<Item = f64>) -> f64 {
    let terms: Vec<f64> = terms.collect();
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + terms.iter().map(|&t| (t - max).exp()).sum::<f64>().ln()
}

struct Dual<'a> {
    adj: &'a AdjacencyProblem,
    ln_px: Vec<f64>,
    ln_py: Vec<f64>,
}

impl Dual<'_> {
    fn update_mu(&self, lambda: &[f64], mu: &mut [f64]) {
        for (y, m) in mu.iter_mut().enumerate() {
            if self.ln_py[y] == f64::NEG_INFINITY {
                continue;
            }
            *m = -log_sum_exp(
                self.adj
                    .adjacent_inputs(y)
                    .iter()
                    .map(|&x| self.ln_px[x] + lambda[x]),
            );
        }
    }

    fn update_lambda(&self, lambda: &mut [f64], mu: &[f64]) {
        for (x, l) in lambda.iter_mut().enumerate() {
            if self.ln_px[x] == f64::NEG_INFINITY {
                continue;
            }
            *l = -log_sum_exp(
                self.adj
                    .adjacent_outputs(x)
                    .iter()
                    .map(|&y| self.ln_py[y] + mu[y]),
            );
        }
    }

    /// `G = sum P_X lambda + sum P_Y mu - sum_{x~y} P_X P_Y e^{lambda+mu} + 1`, in bits.
    fn objective(&self, lambda: &[f64], mu: &[f64]) -> f64 {
        let px = self.adj.px().probs();
        let py = self.adj.py().probs();
        let mut linear = 0.0;
        let mut mass = 0.0;
        for x in 0..px.len() {
            if px[x] == 0.0 {
                continue;
            }
            linear += px[x] * lambda[x];
            for &y in self.adj.adjacent_outputs(x) {
                if py[y] > 0.0 {
                    mass += (self.ln_px[x] + self.ln_py[y] + lambda[x] + mu[y]).exp();
                }
            }
        }
        for y in 0..py.len() {
            if py[y] > 0.0 {
                linear += py[y] * mu[y];
            }
        }
        (linear - mass + 1.0) / LN_2
    }

    /// `sum_x |P_X(x) - sum_y P(x, y)|` for the current multipliers.
    fn row_residual(&self, lambda: &[f64], mu: &[f64]) -> f64 {
        let px = self.adj.px().probs();
        let py = self.adj.py().probs();
        (0..px.len())
            .filter(|&x| px[x] > 0.0)
            .map(|x| {
                let row: f64 = self
                    .adj
                    .adjacent_outputs(x)
                    .iter()
                    .filter(|&&y| py[y] > 0.0)
                    .map(|&y| (self.ln_px[x] + self.ln_py[y] + lambda[x] + mu[y]).exp())
                    .sum();
                (px[x] - row).abs()
            })
            .sum()
    }
}

/// Alternating maximization of the dual objective, from `lambda = 0`.
///
/// After `k` full rounds the value is `G(lambda^(k), mu^(k))`; `k = 0` is
/// the baseline and the first half-step is the adjacency bound. Stops after
/// `k_max` rounds or once a round changes `G` by at most `rel_tol |G|`.
pub fn iterative_lower(
    adj: &AdjacencyProblem,
    k_max: usize,
    rel_tol: f64,
) -> Result<(BoundReport, IterativeState)> {
    if !(rel_tol >= 0.0) {
        return Err(Error::ParameterRange {
            name: "rel_tol",
            value: rel_tol,
            range: "[0, inf)",
        });
    }
    let dual = Dual {
        adj,
        ln_px: adj.px().probs().iter().map(|p| p.ln()).collect(),
        ln_py: adj.py().probs().iter().map(|p| p.ln()).collect(),
    };
    let mut lambda = vec![0.0; adj.n_x()];
    let mut mu = vec![0.0; adj.n_y()];
    dual.update_mu(&lambda, &mut mu);
    let mut g = dual.objective(&lambda, &mu);
    let mut g_values = vec![g];
    let mut k = 0;
    while k < k_max {
        dual.update_lambda(&mut lambda, &mu);
        g_values.push(dual.objective(&lambda, &mu));
        dual.update_mu(&lambda, &mut mu);
        let next = dual.objective(&lambda, &mu);
        g_values.push(next);
        k += 1;
        let done = (next - g).abs() <= rel_tol * next.abs();
        g = next;
        if done {
            break;
        }
    }
    let max_abs = lambda
        .iter()
        .chain(&mu)
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let report = BoundReport::new(Method::Iterative, g.max(0.0))
        .with_iterations(k)
        .with_diag("max_abs_multiplier", max_abs)
        .with_diag("unbounded_multipliers", f64::from(u8::from(max_abs > MULTIPLIER_FLAG)))
        .with_diag("row_residual", dual.row_residual(&lambda, &mu));
    Ok((
        report,
        IterativeState {
            lambda,
            mu,
            k,
            g_values,
        },
    ))
}

/// Minimum mutual information over joints with the given marginals and
/// support, found by iterative proportional fitting of
/// `K(x, y) = P_X(x) P_Y(y) 1(x~y)`.
pub fn min_mi_ipf_oracle(
    adj: &AdjacencyProblem,
    max_iters: usize,
    marg_tol: f64,
) -> Result<(f64, JointDistribution)> {
    let px = adj.px().probs();
    let py = adj.py().probs();
    let kernel: Vec<Vec<(usize, f64)>> = (0..adj.n_x())
        .map(|x| {
            adj.adjacent_outputs(x)
                .iter()
                .filter(|&&y| px[x] > 0.0 && py[y] > 0.0)
                .map(|&y| (y, px[x] * py[y]))
                .collect()
        })
        .collect();
    let mut r = vec![1.0; adj.n_x()];
    let mut c = vec![1.0; adj.n_y()];
    let mut col = vec![0.0; adj.n_y()];
    let mut row_residual = f64::INFINITY;
    let mut col_residual = f64::INFINITY;
    for _ in 0..max_iters {
        for (x, row) in kernel.iter().enumerate() {
            if px[x] > 0.0 {
                let s: f64 = row.iter().map(|&(y, k)| k * c[y]).sum();
                r[x] = px[x] / s;
            }
        }
        col.iter_mut().for_each(|v| *v = 0.0);
        for (x, row) in kernel.iter().enumerate() {
            for &(y, k) in row {
                col[y] += k * r[x];
            }
        }
        for y in 0..c.len() {
            if py[y] > 0.0 {
                c[y] = py[y] / col[y];
            }
        }
        // Columns are exact right after their update; rows drift.
        row_residual = kernel
            .iter()
            .enumerate()
            .map(|(x, row)| (px[x] - r[x] * row.iter().map(|&(y, k)| k * c[y]).sum::<f64>()).abs())
            .fold(0.0, f64::max);
        col_residual = (0..c.len())
            .filter(|&y| py[y] > 0.0)
            .map(|y| (py[y] - col[y] * c[y]).abs())
            .fold(0.0, f64::max);
        if row_residual <= marg_tol && col_residual <= marg_tol {
            let rows = kernel
                .iter()
                .enumerate()
                .map(|(x, row)| row.iter().map(|&(y, k)| (y, k * r[x] * c[y])).collect())
                .collect();
            let joint = JointDistribution::from_sparse(adj.n_y(), rows)?;
            return Ok((mutual_information(&joint), joint));
        }
    }
    Err(Error::NonConvergence {
        iterations: max_iters,
        row_residual,
        col_residual,
    })
}

/// The value every bound in this module approximates from one side, for a
/// joint built from an input distribution and channel.
pub fn exact_mi(px: &FiniteDistribution, channel: &crate::channels::ChannelSpec) -> Result<f64> {
    Ok(mutual_information(&joint_of(px, channel)?))
}
