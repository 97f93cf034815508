//! Upper bounds on `I(Y; f(X))` for a boolean `f` of a uniform input seen
//! through a binary symmetric channel with crossover `alpha`.
//!
//! Functions are `+1/-1` valued (`0 -> +1`, `1 -> -1`) and indexed
//! little-endian: bit `i` of the index is `x_i`.

use crate::error::{check_range, Error, Result};
use crate::info::binary_entropy;
use crate::report::{BoundReport, Method};

/// Largest `n` for spectra and bounds.
pub const MAX_BOUND_N: usize = 24;
/// Largest `n` for [`exact_mi_boolean`].
pub const MAX_EXACT_N: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BooleanFunction {
    n: usize,
    table: Vec<i8>,
}

fn check_n(n: usize, cap: usize, what: &'static str) -> Result<()> {
    if n > cap {
        return Err(Error::SizeCap {
            what,
            size: format!("n = {n}"),
            cap: cap as u64,
        });
    }
    Ok(())
}

impl BooleanFunction {
    pub fn new(table: Vec<i8>) -> Result<Self> {
        let len = table.len();
        if !len.is_power_of_two() {
            return Err(Error::Dimension {
                what: "truth table length",
                expected: len.next_power_of_two(),
                got: len,
            });
        }
        if let Some(v) = table.iter().find(|&&v| v != 1 && v != -1) {
            return Err(Error::InvalidDistribution(format!(
                "truth table entry {v} is not +1 or -1"
            )));
        }
        let n = len.trailing_zeros() as usize;
        check_n(n, MAX_BOUND_N, "boolean function")?;
        Ok(BooleanFunction { n, table })
    }

    /// Parses one line of `2^n` characters from `{0, 1}`.
    pub fn from_truth_table(text: &str) -> Result<Self> {
        let line = text.trim();
        if line.is_empty() {
            return Err(Error::Parse("empty truth table".into()));
        }
        if !line.len().is_power_of_two() {
            return Err(Error::Parse(format!(
                "truth table has {} entries, not a power of two",
                line.len()
            )));
        }
        if line.len() > 1 << MAX_BOUND_N {
            return Err(Error::SizeCap {
                what: "boolean function",
                size: format!("n = {}", line.len().trailing_zeros()),
                cap: MAX_BOUND_N as u64,
            });
        }
        let table = line
            .bytes()
            .map(|b| match b {
                b'0' => Ok(1),
                b'1' => Ok(-1),
                _ => Err(Error::Parse(format!("{:?} is not a truth-table bit", b as char))),
            })
            .collect::<Result<Vec<i8>>>()?;
        Self::new(table)
    }

    pub fn to_truth_table(&self) -> String {
        self.table.iter().map(|&v| if v == 1 { '0' } else { '1' }).collect()
    }

    pub fn from_fn(n: usize, f: impl Fn(usize) -> bool) -> Result<Self> {
        check_n(n, MAX_BOUND_N, "boolean function")?;
        Self::new((0..1usize << n).map(|x| if f(x) { -1 } else { 1 }).collect())
    }

    /// `f(x) = x_i` in the `+1/-1` encoding.
    pub fn dictator(n: usize, i: usize) -> Result<Self> {
        if i >= n {
            return Err(Error::Dimension {
                what: "dictator coordinate",
                expected: n,
                got: i,
            });
        }
        Self::from_fn(n, |x| (x >> i) & 1 == 1)
    }

    pub fn constant(n: usize, value: i8) -> Result<Self> {
        check_n(n, MAX_BOUND_N, "boolean function")?;
        Self::new(vec![value; 1 << n])
    }

    pub fn majority(n: usize) -> Result<Self> {
        Self::from_fn(n, |x| 2 * x.count_ones() as usize > n)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &[i8] {
        &self.table
    }

    /// `H(f(X))` for uniform `X`.
    pub fn entropy(&self) -> f64 {
        let minus = self.table.iter().filter(|&&v| v == -1).count();
        binary_entropy(minus as f64 / self.table.len() as f64)
    }
}

/// Fourier-Walsh coefficients `f^(S) = E f(X) prod_{i in S} X_i`, indexed by
/// the subset mask `S`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSpectrum {
    pub n: usize,
    pub coeffs: Vec<f64>,
}

impl FourierSpectrum {
    pub fn get(&self, s: usize) -> f64 {
        self.coeffs[s]
    }

    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }
}

/// In-place unnormalized Walsh-Hadamard transform.
pub fn fwht(v: &mut [f64]) {
    let n = v.len();
    debug_assert!(n.is_power_of_two());
    let mut h = 1;
    while h < n {
        for block in v.chunks_mut(2 * h) {
            let (a, b) = block.split_at_mut(h);
            for (x, y) in a.iter_mut().zip(b.iter_mut()) {
                let (s, t) = (*x + *y, *x - *y);
                *x = s;
                *y = t;
            }
        }
        h *= 2;
    }
}

/// `T_alpha g(x) = E g(x xor Z)` for `Z` i.i.d. `Bern(alpha)`, one coordinate
/// at a time.
fn noise(v: &mut [f64], alpha: f64) {
    let n = v.len();
    let mut h = 1;
    while h < n {
        for block in v.chunks_mut(2 * h) {
            let (a, b) = block.split_at_mut(h);
            for (x, y) in a.iter_mut().zip(b.iter_mut()) {
                let (s, t) = ((1.0 - alpha) * *x + alpha * *y, alpha * *x + (1.0 - alpha) * *y);
                *x = s;
                *y = t;
            }
        }
        h *= 2;
    }
}

pub fn fourier_spectrum(f: &BooleanFunction) -> FourierSpectrum {
    let mut coeffs: Vec<f64> = f.table.iter().map(|&v| f64::from(v)).collect();
    fwht(&mut coeffs);
    let scale = (f.table.len() as f64).recip();
    coeffs.iter_mut().for_each(|c| *c *= scale);
    FourierSpectrum { n: f.n, coeffs }
}

fn check_alpha(alpha: f64, open: bool) -> Result<()> {
    if open && alpha <= 0.0 {
        return Err(Error::ParameterRange {
            name: "alpha",
            value: alpha,
            range: "(0, 1/2]",
        });
    }
    check_range("alpha", alpha, 0.0, 0.5, "[0, 1/2]")
}

/// Agreement probability `Pr(f(X xor w xor Z) = f(X))` for every shift `w`,
/// indexed by the mask of coordinates where `w` flips.
pub fn agreement_all(f: &BooleanFunction, alpha: f64) -> Result<Vec<f64>> {
    check_alpha(alpha, false)?;
    let spec = fourier_spectrum(f);
    let rho = 1.0 - 2.0 * alpha;
    let mut v: Vec<f64> = spec
        .coeffs
        .iter()
        .enumerate()
        .map(|(s, c)| c * c * rho.powi(s.count_ones() as i32))
        .collect();
    fwht(&mut v);
    Ok(v.into_iter().map(|c| ((1.0 + c) / 2.0).clamp(0.0, 1.0)).collect())
}

/// Agreement probability for one shift `w` in `{-1, 1}^n`.
pub fn agreement_prob(f: &BooleanFunction, alpha: f64, w: &[i8]) -> Result<f64> {
    if w.len() != f.n {
        return Err(Error::Dimension {
            what: "shift vector",
            expected: f.n,
            got: w.len(),
        });
    }
    let mask = w
        .iter()
        .enumerate()
        .filter(|(_, &wi)| wi == -1)
        .fold(0usize, |m, (i, _)| m | 1 << i);
    Ok(agreement_all(f, alpha)?[mask])
}

/// `ln P(W = w)` for `W` i.i.d. `Bern(alpha)`, by Hamming weight.
fn ln_shift_probs(n: usize, alpha: f64) -> Vec<f64> {
    (0..=n)
        .map(|k| k as f64 * alpha.ln() + (n - k) as f64 * (1.0 - alpha).ln())
        .collect()
}

/// `H(f) - 1 + E_W log2(1 + sum_S f^(S)^2 (1-2 alpha)^|S| prod_{i in S} W_i)`,
/// exact over all `2^n` shifts.
pub fn fourier_upper(f: &BooleanFunction, alpha: f64) -> Result<BoundReport> {
    check_alpha(alpha, true)?;
    let agree = agreement_all(f, alpha)?;
    let ln_p = ln_shift_probs(f.n, alpha);
    let h_f = f.entropy();
    let expect: f64 = agree
        .iter()
        .enumerate()
        .map(|(w, &a)| ln_p[w.count_ones() as usize].exp() * (2.0 * a).log2())
        .sum();
    // Rounding can leave -1e-16 for constant f; raising an upper bound is safe.
    Ok(BoundReport::new(Method::FourierUpper, (h_f - 1.0 + expect).max(0.0))
        .with_diag("output_entropy", h_f)
        .with_diag("n", f.n as f64)
        .with_diag("alpha", alpha))
}

/// The same bound computed from agreement probabilities directly: the
/// noisy image `T_alpha f` is formed coordinate by coordinate, correlated
/// with `f` at every shift, and averaged in `H(f) + E_W log2 Pr(agree)`.
pub fn agreement_upper(f: &BooleanFunction, alpha: f64) -> Result<BoundReport> {
    check_alpha(alpha, true)?;
    let size = f.table.len();
    let mut smooth: Vec<f64> = f.table.iter().map(|&v| f64::from(v)).collect();
    noise(&mut smooth, alpha);
    // corr(w) = 2^-n sum_x f(x) T f(x xor w), a dyadic cross-correlation.
    let mut a: Vec<f64> = f.table.iter().map(|&v| f64::from(v)).collect();
    fwht(&mut a);
    fwht(&mut smooth);
    let mut corr: Vec<f64> = a.iter().zip(&smooth).map(|(x, y)| x * y).collect();
    fwht(&mut corr);
    let scale = (size as f64).powi(2).recip();
    let ln_p = ln_shift_probs(f.n, alpha);
    let h_f = f.entropy();
    let expect: f64 = corr
        .iter()
        .enumerate()
        .map(|(w, &c)| {
            let agree = ((1.0 + c * scale) / 2.0).clamp(0.0, 1.0);
            ln_p[w.count_ones() as usize].exp() * agree.log2()
        })
        .sum();
    Ok(BoundReport::new(Method::AgreementUpper, (h_f + expect).max(0.0))
        .with_diag("output_entropy", h_f)
        .with_diag("n", f.n as f64)
        .with_diag("alpha", alpha))
}

/// Exact `I(Y; f(X))` for `Y = X xor Z`:
/// `H(f) - 2^-n sum_y h(Pr(f(X) = -1 | Y = y))`.
pub fn exact_mi_boolean(f: &BooleanFunction, alpha: f64) -> Result<f64> {
    check_alpha(alpha, false)?;
    check_n(f.n, MAX_EXACT_N, "exact boolean mutual information")?;
    let mut post: Vec<f64> = f
        .table
        .iter()
        .map(|&v| if v == -1 { 1.0 } else { 0.0 })
        .collect();
    noise(&mut post, alpha);
    let cond: f64 = post.iter().map(|&p| binary_entropy(p.clamp(0.0, 1.0))).sum::<f64>()
        / post.len() as f64;
    Ok((f.entropy() - cond).max(0.0))
}

/// Bound and exact value for every function of `n <= 4` variables,
/// indexed by the integer whose bit `x` is the table entry at `x`.
pub fn exhaustive_sweep(n: usize, alpha: f64) -> Result<Vec<(u64, f64, f64)>> {
    check_n(n, 4, "exhaustive boolean sweep")?;
    let size = 1usize << n;
    (0u64..1 << size)
        .map(|code| {
            let f = BooleanFunction::from_fn(n, |x| (code >> x) & 1 == 1)?;
            Ok((code, fourier_upper(&f, alpha)?.value_bits, exact_mi_boolean(&f, alpha)?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn chi(s: usize, x: usize) -> f64 {
        if (s & x).count_ones() % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    fn direct_spectrum(f: &BooleanFunction) -> Vec<f64> {
        let size = f.table().len();
        (0..size)
            .map(|s| {
                (0..size).map(|x| f64::from(f.table()[x]) * chi(s, x)).sum::<f64>() / size as f64
            })
            .collect()
    }

    /// `Pr(f(X xor w xor Z) = f(X))` by summing over every `x` and `z`.
    fn direct_agreement(f: &BooleanFunction, alpha: f64, w: usize) -> f64 {
        let size = f.table().len();
        let mut total = 0.0;
        for x in 0..size {
            for z in 0..size {
                let k = z.count_ones() as i32;
                let pz = alpha.powi(k) * (1.0 - alpha).powi(f.n() as i32 - k);
                if f.table()[x ^ w ^ z] == f.table()[x] {
                    total += pz / size as f64;
                }
            }
        }
        total
    }

    #[test]
    fn truth_table_format() {
        let f = BooleanFunction::from_truth_table("0101\n").unwrap();
        assert_eq!(f.table(), &[1, -1, 1, -1]);
        assert_eq!(f, BooleanFunction::dictator(2, 0).unwrap());
        assert_eq!(f.to_truth_table(), "0101");
        assert!(BooleanFunction::from_truth_table("010").is_err());
        assert!(BooleanFunction::from_truth_table("01a1").is_err());
        assert!(BooleanFunction::from_truth_table("").is_err());
    }

    #[test]
    fn spectra() {
        let d = fourier_spectrum(&BooleanFunction::dictator(3, 1).unwrap());
        for s in 0..8 {
            assert_eq!(d.get(s), if s == 2 { 1.0 } else { 0.0 });
        }
        let c = fourier_spectrum(&BooleanFunction::constant(3, 1).unwrap());
        assert_eq!(c.get(0), 1.0);
        for n in 1..=4 {
            for code in 0u64..1 << (1 << n) {
                let f = BooleanFunction::from_fn(n, |x| (code >> x) & 1 == 1).unwrap();
                let fast = fourier_spectrum(&f);
                for (a, b) in fast.coeffs.iter().zip(direct_spectrum(&f)) {
                    assert!((a - b).abs() < 1e-12);
                }
                assert!((fast.energy() - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn agreement() {
        let f = BooleanFunction::majority(3).unwrap();
        assert!((agreement_prob(&f, 0.0, &[1, 1, 1]).unwrap() - 1.0).abs() < 1e-15);
        let d = BooleanFunction::dictator(3, 2).unwrap();
        let a = 0.2;
        for (w, wi) in [([1, 1, 1], 1.0), ([1, -1, -1], -1.0)] {
            let want = (1.0 + (1.0 - 2.0 * a) * wi) / 2.0;
            assert!((agreement_prob(&d, a, &w).unwrap() - want).abs() < 1e-15);
        }
        for n in 1..=3 {
            for code in 0u64..1 << (1 << n) {
                let f = BooleanFunction::from_fn(n, |x| (code >> x) & 1 == 1).unwrap();
                let fast = agreement_all(&f, 0.15).unwrap();
                for (w, &v) in fast.iter().enumerate() {
                    assert!((v - direct_agreement(&f, 0.15, w)).abs() < 1e-12);
                    assert!((0.0..=1.0).contains(&v));
                }
            }
        }
    }

    #[test]
    fn dictator_is_tight() {
        for i in 1..=10 {
            let a = 0.05 * i as f64;
            let f = BooleanFunction::dictator(4, 1).unwrap();
            let want = 1.0 - binary_entropy(a);
            assert!((fourier_upper(&f, a).unwrap().value_bits - want).abs() < 1e-10);
            assert!((agreement_upper(&f, a).unwrap().value_bits - want).abs() < 1e-10);
            assert!((exact_mi_boolean(&f, a).unwrap() - want).abs() < 1e-10);
        }
    }

    #[test]
    fn constants_and_pure_noise() {
        let c = BooleanFunction::constant(3, -1).unwrap();
        assert!(fourier_upper(&c, 0.2).unwrap().value_bits.abs() < 1e-12);
        assert_eq!(exact_mi_boolean(&c, 0.2).unwrap(), 0.0);
        let m = BooleanFunction::majority(5).unwrap();
        assert!(exact_mi_boolean(&m, 0.5).unwrap().abs() < 1e-12);
    }

    #[test]
    fn majority_bound_holds() {
        let m = BooleanFunction::majority(3).unwrap();
        let up = agreement_upper(&m, 0.25).unwrap().value_bits;
        assert!(up >= exact_mi_boolean(&m, 0.25).unwrap() - 1e-12);
    }

    #[test]
    fn preconditions() {
        let f = BooleanFunction::dictator(2, 0).unwrap();
        assert!(fourier_upper(&f, 0.0).is_err());
        assert!(fourier_upper(&f, 0.6).is_err());
        let big = BooleanFunction::constant(13, 1).unwrap();
        assert!(matches!(exact_mi_boolean(&big, 0.1), Err(Error::SizeCap { .. })));
        assert!(exhaustive_sweep(5, 0.1).is_err());
        assert!(BooleanFunction::constant(25, 1).is_err());
    }

    #[test]
    fn sweep_covers_every_function() {
        let rows = exhaustive_sweep(2, 0.1).unwrap();
        assert_eq!(rows.len(), 16);
        assert!(rows.iter().all(|&(_, b, e)| b >= e - 1e-10));
    }

    proptest! {
        #[test]
        fn two_routes_agree_and_bound(n in 1usize..=6, seed in any::<u64>(), ai in 0usize..3) {
            let alpha = [0.1, 0.25, 0.4][ai];
            let f = BooleanFunction::from_fn(n, |x| {
                (seed.rotate_left(x as u32 * 7) ^ (x as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)) & 1 == 1
            })
            .unwrap();
            let a = fourier_upper(&f, alpha).unwrap().value_bits;
            let b = agreement_upper(&f, alpha).unwrap().value_bits;
            prop_assert!((a - b).abs() < 1e-10);
            prop_assert!(a >= exact_mi_boolean(&f, alpha).unwrap() - 1e-10);
        }
    }
}
