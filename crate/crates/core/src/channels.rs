//! The worked channels: erasure, binary symmetric, and Z.
//!
//! Closed forms in this module are written out independently of the
//! generic bound code so that comparing the two is a real check.

use serde::{Deserialize, Serialize};

use crate::actions::ActionModel;
use crate::error::{check_range, Error, Result};
use crate::info::{binary_entropy, FiniteDistribution, JointDistribution, SUM_TOL};

/// Output index of the erasure symbol in [`bec`].
pub const ERASURE: usize = 2;

/// A conditional matrix `P(y|x)`, one row per input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSpec {
    matrix: Vec<Vec<f64>>,
}

impl ChannelSpec {
    pub fn new(matrix: Vec<Vec<f64>>) -> Result<Self> {
        let n_y = matrix.first().map_or(0, Vec::len);
        if matrix.is_empty() || n_y == 0 {
            return Err(Error::InvalidDistribution("empty channel matrix".into()));
        }
        for (x, row) in matrix.iter().enumerate() {
            if row.len() != n_y {
                return Err(Error::Dimension {
                    what: "channel row",
                    expected: n_y,
                    got: row.len(),
                });
            }
            if row.iter().any(|p| !p.is_finite() || !(0.0..=1.0).contains(p)) {
                return Err(Error::InvalidDistribution(format!(
                    "channel row {x} has an entry outside [0, 1]"
                )));
            }
            let total: f64 = row.iter().sum();
            if (total - 1.0).abs() > SUM_TOL {
                return Err(Error::InvalidDistribution(format!(
                    "channel row {x} sums to {total}"
                )));
            }
        }
        Ok(ChannelSpec { matrix })
    }

    pub fn n_inputs(&self) -> usize {
        self.matrix.len()
    }

    pub fn n_outputs(&self) -> usize {
        self.matrix[0].len()
    }

    pub fn matrix(&self) -> &[Vec<f64>] {
        &self.matrix
    }

    pub fn prob(&self, x: usize, y: usize) -> f64 {
        self.matrix[x][y]
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: ChannelSpec =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::new(raw.matrix)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("channel serializes")
    }
}

/// Binary erasure channel; outputs are ordered `(0, 1, E)`.
pub fn bec(eps: f64) -> Result<ChannelSpec> {
    check_range("eps", eps, 0.0, 1.0, "[0, 1]")?;
    ChannelSpec::new(vec![vec![1.0 - eps, 0.0, eps], vec![0.0, 1.0 - eps, eps]])
}

/// Binary symmetric channel with crossover probability `p`.
pub fn bsc(p: f64) -> Result<ChannelSpec> {
    check_range("p", p, 0.0, 1.0, "[0, 1]")?;
    ChannelSpec::new(vec![vec![1.0 - p, p], vec![p, 1.0 - p]])
}

/// The Z channel: `0` passes intact, `1` becomes `0` or `1` with probability 1/2.
pub fn z_channel() -> ChannelSpec {
    ChannelSpec {
        matrix: vec![vec![1.0, 0.0], vec![0.5, 0.5]],
    }
}

/// `P(x, y) = P_X(x) P(y|x)`.
pub fn joint_of(px: &FiniteDistribution, c: &ChannelSpec) -> Result<JointDistribution> {
    if px.len() != c.n_inputs() {
        return Err(Error::Dimension {
            what: "input distribution",
            expected: c.n_inputs(),
            got: px.len(),
        });
    }
    let rows = c
        .matrix
        .iter()
        .zip(px.probs())
        .map(|(row, &p)| {
            row.iter()
                .enumerate()
                .map(|(y, &w)| (y, p * w))
                .collect()
        })
        .collect();
    JointDistribution::from_sparse(c.n_outputs(), rows)
}

/// Conditional of a joint. Rows of zero-mass inputs are set uniform, since
/// the joint says nothing about them.
pub fn channel_of(j: &JointDistribution) -> ChannelSpec {
    let n_y = j.n_y();
    let matrix = (0..j.n_x())
        .map(|x| {
            let px = j.px().get(x);
            if px > 0.0 {
                let mut row = vec![0.0; n_y];
                for &(y, p) in j.row(x) {
                    row[y] = p / px;
                }
                row
            } else {
                vec![1.0 / n_y as f64; n_y]
            }
        })
        .collect();
    ChannelSpec { matrix }
}

/// `{identity w.p. 1 - eps, erase w.p. eps}` for [`bec`].
pub fn bec_actions(eps: f64) -> Result<ActionModel> {
    check_range("eps", eps, 0.0, 1.0, "[0, 1]")?;
    ActionModel::new(
        3,
        vec![vec![0, 1], vec![ERASURE, ERASURE]],
        FiniteDistribution::new(vec![1.0 - eps, eps])?,
    )
}

/// `Y = X xor Z`: identity w.p. `1 - p`, flip w.p. `p`.
pub fn bsc_xor_actions(p: f64) -> Result<ActionModel> {
    check_range("p", p, 0.0, 1.0, "[0, 1]")?;
    ActionModel::new(
        2,
        vec![vec![0, 1], vec![1, 0]],
        FiniteDistribution::new(vec![1.0 - p, p])?,
    )
}

/// Pass-through w.p. `1 - 2p`, force 0 w.p. `p`, force 1 w.p. `p`.
pub fn bsc_ternary_actions(p: f64) -> Result<ActionModel> {
    check_range("p", p, 0.0, 0.5, "[0, 1/2]")?;
    ActionModel::new(
        2,
        vec![vec![0, 1], vec![0, 0], vec![1, 1]],
        FiniteDistribution::new(vec![1.0 - 2.0 * p, p, p])?,
    )
}

/// Identity and constant-0, each with probability 1/2.
pub fn z_actions() -> ActionModel {
    ActionModel::new(
        2,
        vec![vec![0, 1], vec![0, 0]],
        FiniteDistribution::new(vec![0.5, 0.5]).expect("valid"),
    )
    .expect("valid")
}

/// Closed-form Z-channel values for input `Bern(p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZReference {
    /// The baseline bound.
    pub simple: f64,
    /// The adjacency bound.
    pub adjacency: f64,
    /// The dual bound after one full round.
    pub one_round: f64,
    /// `h(p/2) - p`.
    pub exact: f64,
}

pub fn z_reference_values(p: f64) -> Result<ZReference> {
    crate::error::check_open("p", p, 0.0, 1.0, "(0, 1)")?;
    let l = f64::log2;
    Ok(ZReference {
        simple: -p / 2.0 * l(p),
        adjacency: 1.0 - p / 2.0 * l(p) - (1.0 - p) * l(2.0 - p) - p * l(3.0 - p),
        one_round: p / 2.0 * l(2.0 - p) + (1.0 - p) * l(3.0 - p)
            - p / 2.0 * l(p)
            - (1.0 - p / 2.0) * l(3.0 - 2.0 * p),
        exact: binary_entropy(p / 2.0) - p,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZCurveRow {
    pub p: f64,
    pub values: ZReference,
}

/// Tabulates [`z_reference_values`] on a grid of input parameters.
pub fn z_curves(p_grid: &[f64]) -> Result<Vec<ZCurveRow>> {
    p_grid
        .iter()
        .map(|&p| {
            Ok(ZCurveRow {
                p,
                values: z_reference_values(p)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::info::mutual_information;

    #[test]
    fn constructors() {
        assert_eq!(
            bec(0.0).unwrap().matrix(),
            &[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]]
        );
        assert!(bsc(0.5).unwrap().matrix().iter().flatten().all(|&p| p == 0.5));
        assert_eq!(z_channel().matrix(), &[vec![1.0, 0.0], vec![0.5, 0.5]]);
        assert!(bec(1.5).is_err());
        assert!(bsc(-0.1).is_err());
        assert!(ChannelSpec::new(vec![vec![0.5, 0.4]]).is_err());
    }

    #[test]
    fn joints() {
        let px = FiniteDistribution::uniform(3).unwrap();
        let id = ChannelSpec::new(vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ])
        .unwrap();
        let j = joint_of(&px, &id).unwrap();
        assert_eq!(j.get(1, 1), 1.0 / 3.0);
        assert_eq!(j.get(1, 0), 0.0);

        for p in [0.1, 0.5, 0.8] {
            let j = joint_of(&FiniteDistribution::bernoulli(p).unwrap(), &z_channel()).unwrap();
            assert!((j.py().get(1) - p / 2.0).abs() < 1e-15);
            let j = joint_of(&FiniteDistribution::bernoulli(p).unwrap(), &bec(0.3).unwrap()).unwrap();
            assert!((j.py().get(ERASURE) - 0.3).abs() < 1e-15);
        }
        assert!(joint_of(&px, &z_channel()).is_err());
    }

    #[test]
    fn channel_round_trip() {
        let px = FiniteDistribution::new(vec![0.25, 0.75]).unwrap();
        let c = bec(0.2).unwrap();
        let back = channel_of(&joint_of(&px, &c).unwrap());
        for (a, b) in back.matrix().iter().flatten().zip(c.matrix().iter().flatten()) {
            assert!((a - b).abs() < 1e-15);
        }
        assert_eq!(ChannelSpec::from_json(&c.to_json()).unwrap(), c);
    }

    #[test]
    fn z_reference_at_half() {
        let z = z_reference_values(0.5).unwrap();
        assert!((z.simple - 0.25).abs() < 1e-12);
        assert!((z.adjacency - 0.296_554_7).abs() < 1e-7);
        assert!((z.one_round - 0.307_204_6).abs() < 1e-7);
        assert!((z.exact - 0.311_278_1).abs() < 1e-7);
        let j = joint_of(&FiniteDistribution::bernoulli(0.5).unwrap(), &z_channel()).unwrap();
        assert!((z.exact - mutual_information(&j)).abs() < 1e-14);
    }

    #[test]
    fn z_reference_vanishes_at_zero() {
        let z = z_reference_values(1e-9).unwrap();
        for v in [z.simple, z.adjacency, z.one_round, z.exact] {
            assert!(v.abs() < 1e-7, "{v}");
        }
        assert!(z_reference_values(0.0).is_err());
    }

    #[test]
    fn z_curve_rows_are_ordered() {
        let grid: Vec<f64> = (1..100).map(|i| i as f64 / 100.0).collect();
        let rows = z_curves(&grid).unwrap();
        assert_eq!(rows.len(), 99);
        for r in rows {
            let v = r.values;
            assert!(v.simple <= v.adjacency && v.adjacency <= v.one_round && v.one_round <= v.exact, "{r:?}");
        }
        assert!(z_curves(&[]).unwrap().is_empty());
    }
}
