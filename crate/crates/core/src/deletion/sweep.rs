use rayon::prelude::*;

use super::rate::RateFunction;
use super::upper::{deletion_upper_bound, dsv_upper_bound};
use crate::error::Result;
use crate::format::fmt_sig;
use crate::info::binary_entropy;

pub const SWEEP_HEADER: &str =
    "d,gallager_lower,new_lower,improvement_ratio,new_upper,dsv_upper,trivial_upper";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub d: f64,
    /// `1 - h(min(d, 1/2))`.
    pub gallager_lower: f64,
    pub new_lower: f64,
    /// `new_lower / gallager_lower`; NaN where the latter vanishes.
    pub improvement_ratio: f64,
    pub new_upper: f64,
    pub dsv_upper: f64,
    /// `1 - d`.
    pub trivial_upper: f64,
}

/// Lower bound (uniform input) and upper bounds (`Bern(q)` input) on a
/// grid of deletion probabilities, ascending in `d`.
pub fn deletion_sweep(d_grid: &[f64], q: f64, rate: &RateFunction) -> Result<Vec<SweepRow>> {
    let mut grid = d_grid.to_vec();
    grid.sort_by(f64::total_cmp);
    grid.par_iter()
        .map(|&d| {
            let gallager = 1.0 - binary_entropy(d.min(0.5));
            let lower = rate.lower_bound(d)?.value_bits;
            Ok(SweepRow {
                d,
                gallager_lower: gallager,
                new_lower: lower,
                improvement_ratio: if gallager > 0.0 { lower / gallager } else { f64::NAN },
                new_upper: deletion_upper_bound(d, q)?.value_bits,
                dsv_upper: dsv_upper_bound(d, q)?,
                trivial_upper: 1.0 - d,
            })
        })
        .collect()
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for r in rows {
        let cells = [
            r.d,
            r.gallager_lower,
            r.new_lower,
            r.improvement_ratio,
            r.new_upper,
            r.dsv_upper,
            r.trivial_upper,
        ];
        let line: Vec<String> = cells.iter().map(|&v| fmt_sig(v)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deletion::DeletionConfig;

    #[test]
    fn rows_are_sorted_and_sandwiched() {
        let rate = RateFunction::new(DeletionConfig::default()).unwrap();
        let rows = deletion_sweep(&[0.6, 0.2, 0.4, 0.05], 0.5, &rate).unwrap();
        let ds: Vec<f64> = rows.iter().map(|r| r.d).collect();
        assert_eq!(ds, vec![0.05, 0.2, 0.4, 0.6]);
        for r in &rows {
            assert!(r.new_lower <= r.new_upper);
            assert!(r.new_upper <= r.trivial_upper);
        }
        let at = rows[1];
        assert!((at.improvement_ratio - 1.042).abs() <= 0.006, "{}", at.improvement_ratio);
        assert!(rows[3].improvement_ratio.is_nan());

        let csv = sweep_csv(&rows);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], SWEEP_HEADER);
        assert_eq!(lines.len(), 5);
        assert!(lines[4].contains(",nan,"));
        assert!(lines[1].starts_with("0.0500000000,"));
    }
}
