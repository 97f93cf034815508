use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Left-to-right greedy matching: each bit of `y` takes its first
/// occurrence in `x` after the previous match.
pub fn greedy_is_subsequence(y: &[u8], x: &[u8]) -> bool {
    let mut rest = x.iter();
    y.iter().all(|b| rest.any(|c| c == b))
}

/// Longest-common-subsequence test, independent of the greedy scan.
pub fn dp_is_subsequence(y: &[u8], x: &[u8]) -> bool {
    let mut prev = vec![0usize; y.len() + 1];
    for &c in x {
        let mut cur = vec![0usize; y.len() + 1];
        for (j, &b) in y.iter().enumerate() {
            cur[j + 1] = if b == c {
                prev[j] + 1
            } else {
                cur[j].max(prev[j + 1])
            };
        }
        prev = cur;
    }
    prev[y.len()] == y.len()
}

/// Number of binary strings of length `n` containing a fixed string of
/// length `m` as a subsequence: `sum_{j=m}^{n} C(n, j)`.
pub fn supersequence_count(m: usize, n: usize) -> BigUint {
    assert!(m <= n, "pattern longer than the supersequence");
    let mut binom = BigUint::one();
    let mut total = BigUint::zero();
    // C(n, j) for j = n, n-1, ..., m.
    for j in (m..=n).rev() {
        total += &binom;
        binom = binom * j / (n - j + 1);
    }
    total
}

/// Number of index sets realizing `y` as a subsequence of `x`.
pub fn embedding_count(x: &[u8], y: &[u8]) -> BigUint {
    let mut ways = vec![BigUint::zero(); y.len() + 1];
    ways[0] = BigUint::one();
    for &c in x {
        for j in (0..y.len()).rev() {
            if y[j] == c {
                let add = ways[j].clone();
                ways[j + 1] += add;
            }
        }
    }
    ways.pop().expect("non-empty")
}
