use std::collections::BTreeMap;

use crate::error::{check_range, Error, Result};
use crate::info::JointDistribution;

/// Largest block length accepted by [`finite_n_joint`].
pub const MAX_FINITE_N: usize = 14;

/// Row index of an input string: `sum_i x_i 2^i`.
pub fn finite_input_index(x: &[u8]) -> usize {
    x.iter()
        .enumerate()
        .map(|(i, &b)| usize::from(b) << i)
        .sum()
}

/// Column index of an output string of length `L` with little-endian value
/// `v`: `2^L - 1 + v`, so shorter outputs come first.
pub fn finite_output_index(y: &[u8]) -> usize {
    (1usize << y.len()) - 1 + finite_input_index(y)
}

/// Exact joint of `n` i.i.d. `Bern(q)` inputs and their images under
/// independent deletions with probability `d`.
///
/// Each row is built by a prefix recursion over the input bits, so only
/// outputs that are subsequences of the input are ever touched.
pub fn finite_n_joint(n: usize, d: f64, q: f64) -> Result<JointDistribution> {
    check_range("d", d, 0.0, 1.0, "[0, 1]")?;
    check_range("q", q, 0.0, 1.0, "[0, 1]")?;
    if n > MAX_FINITE_N {
        return Err(Error::SizeCap {
            what: "finite deletion block length",
            size: n.to_string(),
            cap: MAX_FINITE_N as u64,
        });
    }
    let n_y = (1usize << (n + 1)) - 1;
    let mut rows = Vec::with_capacity(1 << n);
    for xv in 0usize..1 << n {
        let ones = xv.count_ones() as i32;
        let px = q.powi(ones) * (1.0 - q).powi(n as i32 - ones);
        if px == 0.0 {
            rows.push(Vec::new());
            continue;
        }
        // (length, little-endian value) -> probability
        let mut states: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        states.insert((0, 0), 1.0);
        for i in 0..n {
            let b = (xv >> i) & 1;
            let mut next = BTreeMap::new();
            for (&(len, v), &p) in &states {
                if d > 0.0 {
                    *next.entry((len, v)).or_insert(0.0) += p * d;
                }
                if d < 1.0 {
                    *next.entry((len + 1, v | b << len)).or_insert(0.0) += p * (1.0 - d);
                }
            }
            states = next;
        }
        let mut row: Vec<(usize, f64)> = states
            .into_iter()
            .map(|((len, v), p)| ((1 << len) - 1 + v, px * p))
            .collect();
        row.sort_by_key(|&(y, _)| y);
        rows.push(row);
    }
    JointDistribution::from_sparse(n_y, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deletion::{embedding_count, parse_bits};
    use crate::info::{binary_entropy, mutual_information};
    use num_traits::ToPrimitive;

    #[test]
    fn indices() {
        assert_eq!(finite_output_index(&[]), 0);
        assert_eq!(finite_output_index(&[0]), 1);
        assert_eq!(finite_output_index(&[1]), 2);
        assert_eq!(finite_output_index(&[1, 0]), 4);
        assert_eq!(finite_input_index(&[1, 0, 1]), 5);
    }

    #[test]
    fn single_bit_is_an_erasure() {
        let j = finite_n_joint(1, 0.25, 0.5).unwrap();
        assert_eq!((j.n_x(), j.n_y()), (2, 3));
        assert_eq!(j.to_dense(), vec![vec![0.125, 0.375, 0.0], vec![0.125, 0.0, 0.375]]);
    }

    #[test]
    fn no_deletions_is_identity() {
        for (n, q) in [(3, 0.5), (5, 0.2)] {
            let j = finite_n_joint(n, 0.0, q).unwrap();
            assert!((mutual_information(&j) - n as f64 * binary_entropy(q)).abs() < 1e-12);
        }
    }

    #[test]
    fn rows_match_embedding_counts() {
        let (n, d) = (6, 0.3);
        let j = finite_n_joint(n, d, 0.5).unwrap();
        let x = parse_bits("011010").unwrap();
        let xi = finite_input_index(&x);
        for y in ["", "1", "01", "110", "0110", "011010", "111"] {
            let y = parse_bits(y).unwrap();
            let c = embedding_count(&x, &y).to_f64().unwrap();
            let want = c * d.powi((n - y.len()) as i32) * (1.0 - d).powi(y.len() as i32) / 64.0;
            assert!((j.get(xi, finite_output_index(&y)) - want).abs() < 1e-15);
        }
    }

    #[test]
    fn rows_are_conditionals() {
        for n in [4, 8, 12] {
            let j = finite_n_joint(n, 0.3, 0.4).unwrap();
            for x in 0..j.n_x() {
                let px = j.px().get(x);
                let row: f64 = j.row(x).iter().map(|&(_, p)| p).sum();
                assert!((row / px - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(finite_n_joint(15, 0.1, 0.5), Err(Error::SizeCap { .. })));
        assert!(finite_n_joint(3, 1.5, 0.5).is_err());
    }
}
