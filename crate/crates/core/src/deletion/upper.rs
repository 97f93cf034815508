use crate::error::{check_open, check_range, Result};
use crate::info::binary_entropy;
use crate::report::{BoundReport, Method};

fn check_dq(d: f64, q: f64) -> Result<()> {
    check_open("d", d, 0.0, 1.0, "(0, 1)")?;
    check_range("q", q, f64::MIN_POSITIVE, 0.5, "(0, 1/2]")
}

/// Largest feasible `rho`: `rho <= 1` and `rho (1-d) / d <= 1`.
fn rho_max(d: f64) -> f64 {
    (d / (1.0 - d)).min(1.0)
}

/// Stationary point of [`gamma`] in `rho`, clamped to the feasible range.
pub fn rho_star(d: f64, q: f64) -> Result<f64> {
    check_dq(d, q)?;
    let r = 4.0 * d * (1.0 - d) * q / (1.0 - q);
    let rho = (1.0 - q) / (2.0 * q * (1.0 - d)) * ((1.0 + r).sqrt() - 1.0);
    Ok(rho.clamp(0.0, rho_max(d)))
}

/// `(1-d)(h(rho) + rho log2(1-q)) + d h(rho (1-d) / d)`.
pub fn gamma(rho: f64, d: f64, q: f64) -> Result<f64> {
    check_dq(d, q)?;
    check_range("rho", rho, 0.0, rho_max(d), "[0, min(1, d/(1-d))]")?;
    Ok((1.0 - d) * (binary_entropy(rho) + rho * (1.0 - q).log2())
        + d * binary_entropy(rho * (1.0 - d) / d))
}

/// `(1-d) h(q) - h(d) + gamma(rho*)` for an i.i.d. `Bern(q)` input.
pub fn deletion_upper_bound(d: f64, q: f64) -> Result<BoundReport> {
    let rho = rho_star(d, q)?;
    let g = gamma(rho, d, q)?;
    Ok(
        BoundReport::new(Method::DeletionUpper, (1.0 - d) * binary_entropy(q) - binary_entropy(d) + g)
            .with_diag("rho_star", rho)
            .with_diag("gamma", g),
    )
}

/// `(1-d)(h(q) - 2 d q (1-q))`.
pub fn dsv_upper_bound(d: f64, q: f64) -> Result<f64> {
    check_range("d", d, 0.0, 1.0, "[0, 1]")?;
    check_range("q", q, 0.0, 1.0, "[0, 1]")?;
    Ok((1.0 - d) * (binary_entropy(q) - 2.0 * d * q * (1.0 - q)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid_max_gamma(d: f64, q: f64, n: usize) -> f64 {
        let hi = rho_max(d);
        (0..=n)
            .map(|i| gamma(hi * i as f64 / n as f64, d, q).unwrap())
            .fold(f64::NEG_INFINITY, f64::max)
    }

    #[test]
    fn symmetric_point() {
        let rho = rho_star(0.5, 0.5).unwrap();
        assert!((rho - (2f64.sqrt() - 1.0)).abs() < 1e-15);
        let up = deletion_upper_bound(0.5, 0.5).unwrap().value_bits;
        assert!((up - 0.271_553_3).abs() < 1e-7, "{up}");
        assert!((grid_max_gamma(0.5, 0.5, 200_000) - gamma(rho, 0.5, 0.5).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn closed_form_maximizes_gamma() {
        for d in [0.05, 0.2, 0.5, 0.8, 0.95] {
            for q in [0.1, 0.3, 0.5] {
                let rho = rho_star(d, q).unwrap();
                let best = grid_max_gamma(d, q, 100_000);
                let at = gamma(rho, d, q).unwrap();
                assert!(at >= best - 1e-9, "({d},{q}): {at} < {best}");
            }
        }
    }

    #[test]
    fn improves_on_dsv_for_uniform_input() {
        for i in 1..20 {
            let d = i as f64 / 20.0;
            let up = deletion_upper_bound(d, 0.5).unwrap().value_bits;
            assert!(up < dsv_upper_bound(d, 0.5).unwrap(), "{d}");
        }
    }

    #[test]
    fn dsv_endpoints() {
        assert!((dsv_upper_bound(0.0, 0.3).unwrap() - binary_entropy(0.3)).abs() < 1e-15);
        assert_eq!(dsv_upper_bound(1.0, 0.3).unwrap(), 0.0);
        assert_eq!(dsv_upper_bound(0.5, 0.5).unwrap(), 0.375);
    }

    #[test]
    fn range_errors() {
        assert!(rho_star(0.0, 0.5).is_err());
        assert!(rho_star(0.5, 0.6).is_err());
        assert!(deletion_upper_bound(1.0, 0.5).is_err());
        assert!(gamma(0.9, 0.2, 0.5).is_err());
    }
}
