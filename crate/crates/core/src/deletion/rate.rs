use rayon::prelude::*;

use super::phrases::{ln_phrase_mgf, phrase_weight};
use super::DeletionConfig;
use crate::error::{check_open, check_range, Result};
use crate::info::{binary_divergence, binary_entropy};
use crate::report::{BoundReport, Method};

const LN_2: f64 = std::f64::consts::LN_2;
const GOLDEN_TOL: f64 = 1e-12;

/// `max_{t>0} theta t - L(t)` where `L(t) = (1/5) sum w(k1,k2) log2 E 2^{tZ}`
/// is the per-symbol log-MGF of the greedy match count against a uniform
/// i.i.d. input, truncated at `(k1_max, k2_max)`.
///
/// `L` is tabulated once on the `t` grid so that many `theta` (and many
/// deletion probabilities) can share it.
#[derive(Debug, Clone)]
pub struct RateFunction {
    cfg: DeletionConfig,
    terms: Vec<(usize, usize, f64)>,
    t: Vec<f64>,
    log_mgf: Vec<f64>,
    /// Grid value of the rate function on the `theta` grid.
    theta_grid: Vec<f64>,
    /// `(5 - sum w (k1 + k2)) / 5`: the omitted weight, per unit of `t`.
    tail_factor: f64,
}

/// One evaluation of the rate function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateValue {
    pub value: f64,
    pub t_star: f64,
    /// Upper estimate of the truncation error at `t_star`.
    pub tail: f64,
    /// The supremum was not positive anywhere on the grid; `value` is 0.
    pub nonpositive: bool,
    /// The maximizer sits at the top of the `t` range.
    pub at_boundary: bool,
}

impl RateFunction {
    pub fn new(cfg: DeletionConfig) -> Result<Self> {
        cfg.validate()?;
        let mut terms = Vec::with_capacity(cfg.k1_max * cfg.k2_max);
        for k1 in 2..=cfg.k1_max {
            for k2 in 1..=cfg.k2_max {
                terms.push((k1, k2, phrase_weight(k1, k2)));
            }
        }
        let covered: f64 = terms.iter().map(|&(k1, k2, w)| w * (k1 + k2) as f64).sum();
        let t: Vec<f64> = (1..=cfg.t_grid)
            .map(|j| cfg.t_hi * j as f64 / cfg.t_grid as f64)
            .collect();
        let mut rate = RateFunction {
            cfg,
            terms,
            t,
            log_mgf: Vec::new(),
            theta_grid: Vec::new(),
            tail_factor: ((5.0 - covered) / 5.0).max(0.0),
        };
        rate.log_mgf = rate.t.par_iter().map(|&t| rate.log_mgf_at(t)).collect();
        rate.theta_grid = (0..cfg.theta_grid)
            .into_par_iter()
            .map(|i| rate.grid_max(rate.theta_at(i)).0.max(0.0))
            .collect();
        Ok(rate)
    }

    pub fn config(&self) -> &DeletionConfig {
        &self.cfg
    }

    /// `L(t)` in bits.
    pub fn log_mgf_at(&self, t: f64) -> f64 {
        let nats: f64 = self
            .terms
            .iter()
            .map(|&(k1, k2, w)| w * ln_phrase_mgf(k1, k2, t))
            .sum();
        nats / (5.0 * LN_2)
    }

    fn theta_at(&self, i: usize) -> f64 {
        i as f64 / (self.cfg.theta_grid - 1) as f64
    }

    /// Best grid value and its index.
    fn grid_max(&self, theta: f64) -> (f64, usize) {
        let mut best = (f64::NEG_INFINITY, 0);
        for (j, (&t, &l)) in self.t.iter().zip(&self.log_mgf).enumerate() {
            let v = theta * t - l;
            if v > best.0 {
                best = (v, j);
            }
        }
        best
    }

    /// Grid maximum followed by golden-section refinement around it.
    pub fn eval(&self, theta: f64) -> RateValue {
        let (grid_best, j) = self.grid_max(theta);
        if grid_best <= 0.0 {
            return RateValue {
                value: 0.0,
                t_star: 0.0,
                tail: 0.0,
                nonpositive: true,
                at_boundary: false,
            };
        }
        let lo = if j == 0 { 0.0 } else { self.t[j - 1] };
        let hi = self.t[(j + 1).min(self.t.len() - 1)];
        let (t_ref, v_ref) = golden_max(|t| theta * t - self.log_mgf_at(t), lo, hi);
        let (value, t_star) = if v_ref > grid_best {
            (v_ref, t_ref)
        } else {
            (grid_best, self.t[j])
        };
        RateValue {
            value,
            t_star,
            tail: self.tail_factor * t_star,
            nonpositive: false,
            at_boundary: j + 1 == self.t.len(),
        }
    }

    fn objective(&self, d: f64, theta: f64, rate: f64) -> f64 {
        binary_divergence(theta, 1.0 - d) - (1.0 - binary_entropy(theta.max(0.5))) + rate
    }

    /// `g(d) = min_theta D2(theta || 1-d) - (1 - h(max(theta, 1/2))) + rate(theta)`,
    /// with the minimizing `theta`.
    pub fn g(&self, d: f64) -> Result<(f64, f64)> {
        check_open("d", d, 0.0, 1.0, "(0, 1)")?;
        let n = self.cfg.theta_grid;
        let (mut best, mut i_best) = (f64::INFINITY, 0);
        for (i, &rate) in self.theta_grid.iter().enumerate() {
            let v = self.objective(d, self.theta_at(i), rate);
            if v < best {
                best = v;
                i_best = i;
            }
        }
        let refined = |theta: f64| self.objective(d, theta, self.eval(theta).value);
        let lo = self.theta_at(i_best.saturating_sub(1));
        let hi = self.theta_at((i_best + 1).min(n - 1));
        let (th, v) = golden_max(|th| -refined(th), lo, hi);
        let at_grid = refined(self.theta_at(i_best));
        Ok(if -v < at_grid {
            (-v, th)
        } else {
            (at_grid, self.theta_at(i_best))
        })
    }

    /// `1 - h(min(d, 1/2)) + g(d)` for the uniform i.i.d. input.
    pub fn lower_bound(&self, d: f64) -> Result<BoundReport> {
        let (g, theta) = self.g(d)?;
        let gallager = 1.0 - binary_entropy(d.min(0.5));
        let at = self.eval(theta);
        Ok(BoundReport::new(Method::DeletionLower, gallager + g)
            .with_diag("g", g)
            .with_diag("theta_star", theta)
            .with_diag("t_star", at.t_star)
            .with_diag("rate_at_theta_star", at.value)
            .with_diag("truncation_tail", at.tail)
            .with_diag("t_at_boundary", f64::from(u8::from(at.at_boundary)))
            .with_diag("gallager", gallager))
    }
}

/// Maximizes a unimodal `f` on `[lo, hi]`.
fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - inv_phi * (hi - lo);
    let mut b = lo + inv_phi * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    while hi - lo > GOLDEN_TOL {
        if fa < fb {
            lo = a;
            a = b;
            fa = fb;
            b = lo + inv_phi * (hi - lo);
            fb = f(b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - inv_phi * (hi - lo);
            fa = f(a);
        }
    }
    let x = (lo + hi) / 2.0;
    (x, f(x))
}

/// Rate function at `theta` under `cfg`.
pub fn lambda_star(theta: f64, cfg: &DeletionConfig) -> Result<RateValue> {
    check_range("theta", theta, 0.0, 1.0, "[0, 1]")?;
    Ok(RateFunction::new(*cfg)?.eval(theta))
}

pub fn g_of_d(d: f64, cfg: &DeletionConfig) -> Result<f64> {
    Ok(RateFunction::new(*cfg)?.g(d)?.0)
}

pub fn deletion_lower_bound(d: f64, cfg: &DeletionConfig) -> Result<BoundReport> {
    RateFunction::new(*cfg)?.lower_bound(d)
}
