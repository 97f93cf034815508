//! Channels as random deterministic maps.
//!
//! An [`ActionModel`] is a list of maps `a: X -> Y` with a probability
//! vector; the channel it realizes is `Y = A(X)` with `A` drawn
//! independently of the input.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::channels::ChannelSpec;
use crate::error::{Error, Result};
use crate::info::{entropy_of, mutual_information, FiniteDistribution, JointDistribution};

/// Default cap on the number of actions a constructor may materialize.
pub const DEFAULT_ACTION_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct ActionModel {
    n_outputs: usize,
    maps: Vec<Vec<usize>>,
    probs: FiniteDistribution,
}

impl ActionModel {
    pub fn new(n_outputs: usize, maps: Vec<Vec<usize>>, probs: FiniteDistribution) -> Result<Self> {
        if maps.len() != probs.len() {
            return Err(Error::Dimension {
                what: "action probabilities",
                expected: maps.len(),
                got: probs.len(),
            });
        }
        let n_x = maps[0].len();
        if n_x == 0 {
            return Err(Error::InvalidDistribution("actions over an empty input alphabet".into()));
        }
        for map in &maps {
            if map.len() != n_x {
                return Err(Error::Dimension {
                    what: "action table",
                    expected: n_x,
                    got: map.len(),
                });
            }
            if let Some(&y) = map.iter().find(|&&y| y >= n_outputs) {
                return Err(Error::Dimension {
                    what: "action output index",
                    expected: n_outputs,
                    got: y,
                });
            }
        }
        Ok(ActionModel {
            n_outputs,
            maps,
            probs,
        })
    }

    pub fn n_inputs(&self) -> usize {
        self.maps[0].len()
    }

    pub fn n_outputs(&self) -> usize {
        self.n_outputs
    }

    pub fn n_actions(&self) -> usize {
        self.maps.len()
    }

    pub fn maps(&self) -> &[Vec<usize>] {
        &self.maps
    }

    pub fn probs(&self) -> &FiniteDistribution {
        &self.probs
    }

    /// `H(A)` in bits.
    pub fn entropy(&self) -> f64 {
        self.probs.entropy()
    }

    /// Parses `{"maps": [[..]], "probs": [..]}`. The output alphabet size is
    /// taken from the optional `"n_outputs"` field, else from the largest index.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: ActionFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if file.maps.is_empty() {
            return Err(Error::Parse("no actions".into()));
        }
        let largest = file.maps.iter().flatten().copied().max().unwrap_or(0);
        let n_outputs = file.n_outputs.unwrap_or(largest + 1);
        Self::new(n_outputs, file.maps, FiniteDistribution::new(file.probs)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&ActionFile {
            maps: self.maps.clone(),
            probs: self.probs.probs().to_vec(),
            n_outputs: Some(self.n_outputs),
        })
        .expect("action model serializes")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ActionFile {
    maps: Vec<Vec<usize>>,
    probs: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n_outputs: Option<usize>,
}

/// For every `(x, y)`, the actions mapping `x` to `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct ActionSetIndex {
    sets: Vec<Vec<Vec<usize>>>,
}

impl ActionSetIndex {
    pub fn new(m: &ActionModel) -> Self {
        let mut sets = vec![vec![Vec::new(); m.n_outputs()]; m.n_inputs()];
        for (a, map) in m.maps().iter().enumerate() {
            for (x, &y) in map.iter().enumerate() {
                sets[x][y].push(a);
            }
        }
        ActionSetIndex { sets }
    }

    pub fn actions(&self, x: usize, y: usize) -> &[usize] {
        &self.sets[x][y]
    }

    pub fn count(&self, x: usize, y: usize) -> usize {
        self.sets[x][y].len()
    }
}

/// `P(y|x) = sum of P(a) over actions with a(x) = y`.
pub fn induced_channel(m: &ActionModel) -> ChannelSpec {
    let mut matrix = vec![vec![0.0; m.n_outputs()]; m.n_inputs()];
    for (map, &p) in m.maps().iter().zip(m.probs().probs()) {
        for (x, &y) in map.iter().enumerate() {
            matrix[x][y] += p;
        }
    }
    for p in matrix.iter_mut().flatten() {
        *p = p.min(1.0);
    }
    ChannelSpec::new(matrix).expect("a valid action model induces a valid channel")
}

/// Joint of `px` and the channel induced by `m`.
pub fn induced_joint(px: &FiniteDistribution, m: &ActionModel) -> Result<JointDistribution> {
    crate::channels::joint_of(px, &induced_channel(m))
}

/// Number of maps `X -> Y`, or a cap error.
fn function_count(n_x: usize, n_y: usize, cap: u64) -> Result<usize> {
    let size = BigUint::from(n_y).pow(n_x as u32);
    if size > BigUint::from(cap) {
        return Err(Error::SizeCap {
            what: "generic action set",
            size: size.to_string(),
            cap,
        });
    }
    Ok(size.to_usize().expect("below cap"))
}

/// All `|Y|^|X|` maps with product probabilities `P(a) = prod_x P(a(x)|x)`.
pub fn generic_action_set(channel: &ChannelSpec, cap: u64) -> Result<ActionModel> {
    let n_x = channel.n_inputs();
    let n_y = channel.n_outputs();
    let count = function_count(n_x, n_y, cap)?;
    let mut maps = Vec::with_capacity(count);
    let mut probs = Vec::with_capacity(count);
    let mut digits = vec![0usize; n_x];
    for _ in 0..count {
        probs.push(
            digits
                .iter()
                .enumerate()
                .map(|(x, &y)| channel.prob(x, y))
                .product(),
        );
        maps.push(digits.clone());
        for d in digits.iter_mut() {
            *d += 1;
            if *d < n_y {
                break;
            }
            *d = 0;
        }
    }
    ActionModel::new(n_y, maps, FiniteDistribution::from_weights(probs)?)
}

/// Parses an exact rational: an integer, `p/q`, or a finite decimal.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let s = text.trim();
    let bad = || Error::NonRational(text.to_string());
    let int = |t: &str| -> Result<BigInt> {
        let digits = t.strip_prefix(['+', '-']).unwrap_or(t);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        t.parse::<BigInt>().map_err(|_| bad())
    };
    if let Some((num, den)) = s.split_once('/') {
        let den = int(den)?;
        if den.is_zero() || den.is_negative() {
            return Err(bad());
        }
        return Ok(BigRational::new(int(num)?, den));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole = match whole.trim_start_matches(['+', '-']) {
            "" => BigInt::zero(),
            w => int(w)?,
        };
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let mut num = whole * &scale + frac.parse::<BigInt>().map_err(|_| bad())?;
        if negative {
            num = -num;
        }
        return Ok(BigRational::new(num, scale));
    }
    Ok(BigRational::from_integer(int(s)?))
}

fn check_rational_distribution(row: &[BigRational], what: &str) -> Result<()> {
    if row.iter().any(|p| p.is_negative()) {
        return Err(Error::InvalidDistribution(format!("{what} has a negative entry")));
    }
    let total: BigRational = row.iter().sum();
    if !total.is_one() {
        return Err(Error::InvalidDistribution(format!("{what} sums to {total}, not 1")));
    }
    Ok(())
}

/// Duplicates each action `n_i = P(a_i) D` times, `D` the common denominator,
/// so that every copy has probability `1/D`.
fn duplicate_to_uniform(
    n_outputs: usize,
    maps: Vec<Vec<usize>>,
    probs: Vec<BigRational>,
    cap: u64,
) -> Result<ActionModel> {
    let mut denom = BigInt::one();
    for p in &probs {
        denom = num_integer::Integer::lcm(&denom, p.denom());
    }
    if denom > BigInt::from(cap) {
        return Err(Error::SizeCap {
            what: "uniform action set",
            size: denom.to_string(),
            cap,
        });
    }
    let total = denom.to_usize().expect("below cap");
    let mut out = Vec::with_capacity(total);
    for (map, p) in maps.into_iter().zip(&probs) {
        let copies = (p * BigRational::from_integer(denom.clone()))
            .to_integer()
            .to_usize()
            .expect("at most the denominator");
        out.extend(std::iter::repeat_n(map, copies));
    }
    debug_assert_eq!(out.len(), total);
    ActionModel::new(n_outputs, out, FiniteDistribution::uniform(total)?)
}

/// Equiprobable action set realizing an exactly rational channel: the
/// generic action set with rational probabilities, each action duplicated
/// in proportion to its probability. Zero-probability maps are dropped.
pub fn uniform_action_from_rational(channel: &[Vec<BigRational>], cap: u64) -> Result<ActionModel> {
    let n_y = channel.first().map_or(0, Vec::len);
    if channel.is_empty() || n_y == 0 {
        return Err(Error::InvalidDistribution("empty channel matrix".into()));
    }
    let mut supports = Vec::with_capacity(channel.len());
    for (x, row) in channel.iter().enumerate() {
        if row.len() != n_y {
            return Err(Error::Dimension {
                what: "channel row",
                expected: n_y,
                got: row.len(),
            });
        }
        check_rational_distribution(row, &format!("channel row {x}"))?;
        supports.push((0..n_y).filter(|&y| !row[y].is_zero()).collect::<Vec<_>>());
    }
    // Every positive-probability map needs at least one copy.
    let positive: BigUint = supports.iter().map(|s| BigUint::from(s.len())).product();
    if positive > BigUint::from(cap) {
        return Err(Error::SizeCap {
            what: "uniform action set",
            size: positive.to_string(),
            cap,
        });
    }
    let mut maps = Vec::new();
    let mut probs = Vec::new();
    let mut idx = vec![0usize; channel.len()];
    'odometer: loop {
        let map: Vec<usize> = idx.iter().zip(&supports).map(|(&i, s)| s[i]).collect();
        let p: BigRational = map
            .iter()
            .enumerate()
            .map(|(x, &y)| channel[x][y].clone())
            .product();
        maps.push(map);
        probs.push(p);
        for (i, s) in idx.iter_mut().zip(&supports) {
            *i += 1;
            if *i < s.len() {
                continue 'odometer;
            }
            *i = 0;
        }
        break;
    }
    duplicate_to_uniform(n_y, maps, probs, cap)
}

/// Equiprobable version of an explicit action model with rational probabilities.
pub fn uniform_model_from_rational(
    n_outputs: usize,
    maps: Vec<Vec<usize>>,
    probs: &[BigRational],
    cap: u64,
) -> Result<ActionModel> {
    if maps.len() != probs.len() {
        return Err(Error::Dimension {
            what: "action probabilities",
            expected: maps.len(),
            got: probs.len(),
        });
    }
    check_rational_distribution(probs, "action distribution")?;
    duplicate_to_uniform(n_outputs, maps, probs.to_vec(), cap)
}

/// `P(a | x, y)`, zero off `A(x, y)`.
pub fn action_posterior(m: &ActionModel, x: usize, y: usize) -> Result<FiniteDistribution> {
    if x >= m.n_inputs() || y >= m.n_outputs() {
        return Err(Error::UnreachablePair { x, y });
    }
    let weights: Vec<f64> = m
        .maps()
        .iter()
        .zip(m.probs().probs())
        .map(|(map, &p)| if map[x] == y { p } else { 0.0 })
        .collect();
    if weights.iter().sum::<f64>() <= 0.0 {
        return Err(Error::UnreachablePair { x, y });
    }
    FiniteDistribution::from_weights(weights)
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

/// `H(A | X, Y)` in bits under `P(x, y, a) = P(x) P(a) 1(y = a(x))`.
pub fn intrinsic_uncertainty(px: &FiniteDistribution, m: &ActionModel) -> Result<f64> {
    check_inputs(px, m)?;
    let index = ActionSetIndex::new(m);
    let pa = m.probs().probs();
    let mut h = 0.0;
    for x in 0..m.n_inputs() {
        let p = px.get(x);
        if p == 0.0 {
            continue;
        }
        for y in 0..m.n_outputs() {
            let set: Vec<f64> = index.actions(x, y).iter().map(|&a| pa[a]).collect();
            let mass: f64 = set.iter().sum();
            if mass > 0.0 {
                let posterior: Vec<f64> = set.iter().map(|&q| q / mass).collect();
                h += p * mass * entropy_of(&posterior);
            }
        }
    }
    Ok(h)
}

/// `H(Y) - H(A) + H(A|X,Y)`.
pub fn mi_via_actions(px: &FiniteDistribution, m: &ActionModel) -> Result<f64> {
    let j = induced_joint(px, m)?;
    Ok(j.py().entropy() - m.entropy() + intrinsic_uncertainty(px, m)?)
}

/// Exact MI of the induced joint, for comparison with [`mi_via_actions`].
pub fn induced_mutual_information(px: &FiniteDistribution, m: &ActionModel) -> Result<f64> {
    Ok(mutual_information(&induced_joint(px, m)?))
}
