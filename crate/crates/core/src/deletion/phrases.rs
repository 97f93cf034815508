use std::collections::BTreeMap;

use crate::error::{Error, Result};

const LN_2: f64 = std::f64::consts::LN_2;

/// A block `b^(k1-1) !b^k2 b`: two bit flips, ending right after the second.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Phrase {
    pub b: u8,
    pub k1: usize,
    pub k2: usize,
}

impl Phrase {
    pub fn len(&self) -> usize {
        self.k1 + self.k2
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PhraseHistogram {
    pub phrases: Vec<Phrase>,
    /// Number of `{k1, k2}` phrases, keyed by `(k1, k2)`.
    pub counts: BTreeMap<(usize, usize), usize>,
    /// Bits after the last complete phrase.
    pub trailing_bits: usize,
    pub input_len: usize,
}

impl PhraseHistogram {
    pub fn count(&self, k1: usize, k2: usize) -> usize {
        self.counts.get(&(k1, k2)).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.phrases.len()
    }
}

/// Splits `x` into phrases; a trailing incomplete phrase is only counted.
pub fn parse_phrases(x: &[u8]) -> PhraseHistogram {
    let mut hist = PhraseHistogram {
        input_len: x.len(),
        ..Default::default()
    };
    let mut i = 0;
    while i < x.len() {
        let b = x[i];
        let Some(j) = (i + 1..x.len()).find(|&j| x[j] != b) else {
            break;
        };
        let Some(l) = (j + 1..x.len()).find(|&l| x[l] == b) else {
            break;
        };
        let phrase = Phrase {
            b,
            k1: j - i + 1,
            k2: l - j,
        };
        *hist.counts.entry((phrase.k1, phrase.k2)).or_insert(0) += 1;
        hist.phrases.push(phrase);
        i = l + 1;
    }
    hist.trailing_bits = x.len() - i;
    hist
}

/// Probability that a phrase of a uniform i.i.d. string has type `{k1, k2}`.
pub fn phrase_weight(k1: usize, k2: usize) -> f64 {
    (-((k1 + k2 - 1) as f64)).exp2()
}

/// `ln |e^a - 1|` for `a != 0`, stable for large `|a|`.
fn ln_abs_expm1(a: f64) -> f64 {
    if a > 30.0 {
        a + (-(-a).exp()).ln_1p()
    } else if a > 0.0 {
        a.exp_m1().ln()
    } else {
        (-a.exp_m1()).ln()
    }
}

/// `ln sum_{m=1}^{k} 2^{(t-1) m}`.
fn ln_geometric(k: usize, t: f64) -> f64 {
    let delta = (t - 1.0) * LN_2;
    if (t - 1.0).abs() < 1e-3 {
        (1..=k).map(|m| (m as f64 * delta).exp()).sum::<f64>().ln()
    } else {
        delta + ln_abs_expm1(k as f64 * delta) - ln_abs_expm1(delta)
    }
}

fn ln_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Natural log of [`phrase_mgf`]; finite for every real `t`.
pub fn ln_phrase_mgf(k1: usize, k2: usize, t: f64) -> f64 {
    debug_assert!(k1 >= 2 && k2 >= 1);
    let delta = (t - 1.0) * LN_2;
    let tail = ln_add_exp(ln_geometric(k2, t), k2 as f64 * delta - t * LN_2);
    ln_add_exp(k1 as f64 * delta, ln_geometric(k1, t) + tail)
}

/// `E 2^{t Z}` for the number `Z` of uniform random bits that greedy
/// matching consumes inside a `{k1, k2}` phrase:
/// `2^{k1(t-1)} + S(k1) (S(k2) + 2^{k2(t-1)-t})`, `S(k) = sum_{m=1}^{k} 2^{(t-1)m}`.
pub fn phrase_mgf(k1: usize, k2: usize, t: f64) -> Result<f64> {
    if k1 < 2 || k2 < 1 {
        return Err(Error::Domain(format!(
            "phrase type needs k1 >= 2 and k2 >= 1, got ({k1}, {k2})"
        )));
    }
    if !t.is_finite() {
        return Err(Error::Domain(format!("t = {t}")));
    }
    Ok(ln_phrase_mgf(k1, k2, t).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deletion::parse_bits;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Average of `2^{tZ}` over every continuation of length `k1 + k2 + 1`,
    /// with `Z` counted by literally running greedy matching on `0^(k1-1) 1^k2 0`.
    fn greedy_mgf(k1: usize, k2: usize, t: f64) -> f64 {
        let mut phrase = vec![0u8; k1 - 1];
        phrase.extend(std::iter::repeat_n(1, k2));
        phrase.push(0);
        let len = k1 + k2 + 1;
        let mut total = 0.0;
        for v in 0u32..1 << len {
            let mut pos = 0;
            let mut z = 0;
            for i in 0..len {
                let bit = ((v >> i) & 1) as u8;
                match phrase[pos..].iter().position(|&c| c == bit) {
                    Some(off) => {
                        pos += off + 1;
                        z += 1;
                    }
                    None => break,
                }
            }
            total += (t * z as f64).exp2();
        }
        total / (1u64 << len) as f64
    }

    #[test]
    fn parses_the_worked_string() {
        let h = parse_phrases(&parse_bits("0001111011001110001").unwrap());
        assert_eq!(
            h.phrases,
            vec![
                Phrase { b: 0, k1: 4, k2: 4 },
                Phrase { b: 1, k1: 3, k2: 2 },
                Phrase { b: 1, k1: 3, k2: 3 },
            ]
        );
        assert_eq!(h.trailing_bits, 0);
        assert_eq!(h.count(3, 2), 1);
    }

    #[test]
    fn incomplete_phrases() {
        assert_eq!(parse_phrases(&[1; 12]).total(), 0);
        assert_eq!(parse_phrases(&[1; 12]).trailing_bits, 12);
        let h = parse_phrases(&parse_bits("0100011").unwrap());
        assert_eq!(h.phrases, vec![Phrase { b: 0, k1: 2, k2: 1 }]);
        assert_eq!(h.trailing_bits, 4);
        assert_eq!(parse_phrases(&[]).trailing_bits, 0);
    }

    #[test]
    fn phrase_lengths_fit_in_the_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let n = rng.gen_range(0..64);
            let x: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2)).collect();
            let h = parse_phrases(&x);
            let used: usize = h.phrases.iter().map(Phrase::len).sum();
            assert_eq!(used + h.trailing_bits, n);
        }
    }

    #[test]
    fn phrase_frequencies_follow_the_law_of_large_numbers() {
        let n = 1_000_000;
        let mut rng = ChaCha8Rng::seed_from_u64(20_240_101);
        let x: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2)).collect();
        let h = parse_phrases(&x);
        let m = h.total() as f64;
        assert!((n as f64 / m - 5.0).abs() < 0.05);
        for k1 in 2..=5 {
            for k2 in 1..=4 {
                let p = phrase_weight(k1, k2);
                let se = (m * p * (1.0 - p)).sqrt();
                let got = h.count(k1, k2) as f64;
                assert!((got - m * p).abs() <= 3.0 * se, "({k1},{k2}): {got} vs {}", m * p);
            }
        }
    }

    #[test]
    fn weights_sum_to_one_with_mean_length_five() {
        let mut total = 0.0;
        let mut mean = 0.0;
        for k1 in 2..80 {
            for k2 in 1..80 {
                total += phrase_weight(k1, k2);
                mean += phrase_weight(k1, k2) * (k1 + k2) as f64;
            }
        }
        assert!((total - 1.0).abs() < 1e-15);
        assert!((mean - 5.0).abs() < 1e-12);
    }

    #[test]
    fn mgf_is_one_at_zero() {
        for k1 in 2..12 {
            for k2 in 1..12 {
                assert!((phrase_mgf(k1, k2, 0.0).unwrap() - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn mgf_matches_greedy_matching() {
        for k1 in 2..=6 {
            for k2 in 1..=6 {
                for t in [0.0, 0.3, 0.9995, 1.0, 1.0004, 1.7, 3.0] {
                    let want = greedy_mgf(k1, k2, t);
                    let got = phrase_mgf(k1, k2, t).unwrap();
                    assert!((got / want - 1.0).abs() < 1e-12, "({k1},{k2},{t}): {got} vs {want}");
                }
            }
        }
    }

    #[test]
    fn mgf_is_finite_far_out() {
        let l = ln_phrase_mgf(120, 120, 32.0);
        assert!(l.is_finite());
        // Z <= k1 + k2 and the all-matched event has probability 2^{-(k1+k2)}.
        let bound = 240.0 * 32.0 * LN_2;
        assert!(l <= bound && l >= bound - 240.0 * LN_2 - 1e-9);
        assert!(phrase_mgf(1, 1, 0.5).is_err());
        assert!(phrase_mgf(2, 0, 0.5).is_err());
    }
}
