//! Bounds on mutual information from marginals, joint support, and
//! channel actions.
//!
//! The exact quantity is [`mutual_information`]. Lower bounds need only
//! `(P_X, P_Y)` and which pairs `(x, y)` can co-occur; upper bounds need a
//! representation of the channel as a random deterministic map. The
//! [`deletion`] and [`boolean`] modules apply both to two structured
//! problems where the exact value is out of reach.
//!
//! ```
//! use mibounds::{adjacency_lower, adjacency_of, mutual_information, JointDistribution};
//!
//! let z = JointDistribution::new(vec![vec![0.5, 0.0], vec![0.25, 0.25]])?;
//! let adj = adjacency_of(&z, 0.0)?;
//! let lower = adjacency_lower(&adj).value_bits;
//! assert!(lower <= mutual_information(&z));
//! # Ok::<(), mibounds::Error>(())
//! ```

pub mod actions;
pub mod boolean;
pub mod bounds;
pub mod channels;
pub mod deletion;
mod error;
pub mod format;
pub mod info;
mod report;

pub use actions::{ActionModel, ActionSetIndex};
pub use bounds::{
    action_lower, action_upper, action_upper_generic, adjacency_lower, baseline_lower,
    iterative_lower, min_mi_ipf_oracle, IterativeState,
};
pub use channels::ChannelSpec;
pub use error::{Error, Result, Side};
pub use info::{
    adjacency_of, binary_divergence, binary_entropy, entropy, mutual_information,
    AdjacencyProblem, FiniteDistribution, JointDistribution,
};
pub use report::{BoundReport, Method};
