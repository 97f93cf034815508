use std::fmt;

use thiserror::Error;

/// Which side of a joint support an infeasibility refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Row,
    Column,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Row => f.write_str("row"),
            Side::Column => f.write_str("column"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("dimension mismatch for {what}: expected {expected}, got {got}")]
    Dimension {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("infeasible support: {side} {index} has positive mass but no adjacent symbol with positive mass")]
    InfeasibleSupport { side: Side, index: usize },

    #[error("{name} = {value} is outside {range}")]
    ParameterRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("{what} has size {size}, above the cap of {cap}")]
    SizeCap {
        what: &'static str,
        size: String,
        cap: u64,
    },

    #[error("pair (x={x}, y={y}) is produced by no action with positive probability")]
    UnreachablePair { x: usize, y: usize },

    #[error("no convergence after {iterations} iterations (row residual {row_residual:e}, column residual {col_residual:e})")]
    NonConvergence {
        iterations: usize,
        row_residual: f64,
        col_residual: f64,
    },

    #[error("not an exact rational number: {0:?}")]
    NonRational(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_range(
    name: &'static str,
    value: f64,
    lo: f64,
    hi: f64,
    range: &'static str,
) -> Result<()> {
    if value.is_finite() && value >= lo && value <= hi {
        Ok(())
    } else {
        Err(Error::ParameterRange { name, value, range })
    }
}

pub(crate) fn check_open(
    name: &'static str,
    value: f64,
    lo: f64,
    hi: f64,
    range: &'static str,
) -> Result<()> {
    if value.is_finite() && value > lo && value < hi {
        Ok(())
    } else {
        Err(Error::ParameterRange { name, value, range })
    }
}
