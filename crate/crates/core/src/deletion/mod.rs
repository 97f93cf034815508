//! The binary i.i.d. deletion channel.
//!
//! Finite-length quantities ([`finite_n_joint`]) are totals in bits;
//! the asymptotic bounds are per channel use. Bit strings are slices of
//! `0`/`1` bytes.

mod combinatorics;
mod finite;
mod phrases;
mod rate;
mod sweep;
mod upper;

pub use combinatorics::{
    dp_is_subsequence, embedding_count, greedy_is_subsequence, supersequence_count,
};
pub use finite::{finite_input_index, finite_n_joint, finite_output_index, MAX_FINITE_N};
pub use phrases::{ln_phrase_mgf, parse_phrases, phrase_mgf, phrase_weight, Phrase, PhraseHistogram};
pub use rate::{deletion_lower_bound, g_of_d, lambda_star, RateFunction, RateValue};
pub use sweep::{deletion_sweep, sweep_csv, SweepRow, SWEEP_HEADER};
pub use upper::{deletion_upper_bound, dsv_upper_bound, gamma, rho_star};

use crate::error::{Error, Result};

/// Truncation and resolution parameters for the asymptotic lower bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeletionConfig {
    pub k1_max: usize,
    pub k2_max: usize,
    /// Points in the `t` grid on `(0, t_hi]`.
    pub t_grid: usize,
    pub t_hi: f64,
    /// Points in the `theta` grid on `[0, 1]`.
    pub theta_grid: usize,
}

impl Default for DeletionConfig {
    fn default() -> Self {
        DeletionConfig {
            k1_max: 60,
            k2_max: 60,
            t_grid: 4000,
            t_hi: 32.0,
            theta_grid: 2001,
        }
    }
}

impl DeletionConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k1_max < 2 || self.k2_max < 1 {
            return Err(Error::Domain(format!(
                "truncation needs k1_max >= 2 and k2_max >= 1, got {} and {}",
                self.k1_max, self.k2_max
            )));
        }
        if self.t_grid < 2 || self.theta_grid < 2 {
            return Err(Error::Domain("grids need at least 2 points".into()));
        }
        if !(self.t_hi > 0.0 && self.t_hi.is_finite()) {
            return Err(Error::ParameterRange {
                name: "t_hi",
                value: self.t_hi,
                range: "(0, inf)",
            });
        }
        Ok(())
    }
}

/// Parses a string of `0`/`1` characters.
pub fn parse_bits(text: &str) -> Result<Vec<u8>> {
    text.trim()
        .bytes()
        .map(|b| match b {
            b'0' => Ok(0),
            b'1' => Ok(1),
            _ => Err(Error::Parse(format!("{:?} is not a bit", b as char))),
        })
        .collect()
}

pub fn format_bits(bits: &[u8]) -> String {
    bits.iter().map(|&b| if b == 0 { '0' } else { '1' }).collect()
}
