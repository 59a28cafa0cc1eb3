//! Riesz potentials I_α f(x) = ∫ |x − y|^{α−n} f(y) dy by direct quadrature.

use aop_core::nullspace::{Quadrature, SmoothField};
use rayon::prelude::*;
use serde::Serialize;

use crate::field::{lp_norm, Field};
use crate::LabError;

/// Volume of the unit ball in ℝⁿ.
pub fn unit_ball_volume(n: usize) -> f64 {
    // ω_n = 2π/n · ω_{n−2}
    match n {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * std::f64::consts::PI / n as f64 * unit_ball_volume(n - 2),
    }
}

/// 0 < α < n, 1 ≤ p ≤ q and q < np/(n − αp) when αp < n.
pub fn check_exponents(n: usize, alpha: f64, p: f64, q: f64) -> Result<(), LabError> {
    let nf = n as f64;
    if !(alpha > 0.0 && alpha < nf) {
        return Err(LabError::Exponent(format!("α = {alpha} must lie in (0, {n})")));
    }
    if !(p >= 1.0 && q >= p) {
        return Err(LabError::Exponent(format!("need 1 ≤ p ≤ q, got p = {p}, q = {q}")));
    }
    if alpha * p < nf {
        let qmax = nf * p / (nf - alpha * p);
        if q >= qmax {
            return Err(LabError::Exponent(format!("q = {q} must be below np/(n − αp) = {qmax:.4}")));
        }
    }
    Ok(())
}

/// I_α f at arbitrary points from samples of f on `rule`.
///
/// A node closer to the evaluation point than half its cell radius ρ (the radius of the
/// ball of volume w) is replaced by the integral of the kernel over that ball, n ω_n ρ^α / α.
pub fn riesz_at(f: &Field, alpha: f64, points: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let rule = f.rule();
    let n = rule.dim();
    let omega = unit_ball_volume(n);
    let dim = f.dim();
    points
        .par_iter()
        .map(|x| {
            let mut out = vec![0.0; dim];
            for (q, (y, w)) in rule.iter().enumerate() {
                let d2: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
                let rho = (w / omega).powf(1.0 / n as f64);
                let k = if d2 < 0.25 * rho * rho {
                    n as f64 * omega * rho.powf(alpha) / alpha
                } else {
                    w * d2.powf(0.5 * (alpha - n as f64))
                };
                for (o, v) in out.iter_mut().zip(f.at(q)) {
                    *o += k * v;
                }
            }
            out
        })
        .collect()
}

/// I_α f on the nodes of the rule carrying f.
pub fn riesz_apply(f: &Field, alpha: f64) -> Result<Field, LabError> {
    let n = f.rule().dim();
    if !(alpha > 0.0 && alpha < n as f64) {
        return Err(LabError::Exponent(format!("α = {alpha} must lie in (0, {n})")));
    }
    let points: Vec<Vec<f64>> = f.rule().iter().map(|(x, _)| x.to_vec()).collect();
    let values = riesz_at(f, alpha, &points).into_iter().flatten().collect();
    Ok(Field::new(f.rule().clone(), f.dim(), values))
}

#[derive(Clone, Debug, Serialize)]
pub struct RieszConfig {
    pub alpha: f64,
    pub p: f64,
    pub q: f64,
    pub radius: f64,
    pub levels: Vec<usize>,
    pub tolerance: f64,
}

impl Default for RieszConfig {
    fn default() -> Self {
        Self { alpha: 1.0, p: 1.5, q: 3.0, radius: 1.0, levels: vec![32, 64], tolerance: 0.05 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RieszReport {
    pub experiment: &'static str,
    pub config: RieszConfig,
    /// ratios[level][field] = ‖I_α f‖_q / ‖f‖_p.
    pub ratios: Vec<Vec<f64>>,
    pub max_relative_change: f64,
    pub stable: bool,
}

/// ‖I_α f‖_q/‖f‖_p for each test field at each polar resolution on the disc of the given radius.
pub fn riesz_boundedness(cfg: &RieszConfig, fields: &[&dyn SmoothField]) -> Result<RieszReport, LabError> {
    check_exponents(2, cfg.alpha, cfg.p, cfg.q)?;
    let ratios: Vec<Vec<f64>> = cfg
        .levels
        .iter()
        .map(|&level| {
            let rule = Quadrature::disc_polar([0.0, 0.0], cfg.radius, level, level);
            fields
                .iter()
                .map(|u| {
                    let f = Field::sample(&rule, *u);
                    let i = riesz_apply(&f, cfg.alpha).expect("α checked");
                    lp_norm(&i, cfg.q) / lp_norm(&f, cfg.p)
                })
                .collect()
        })
        .collect();
    let mut max_relative_change: f64 = 0.0;
    for w in ratios.windows(2) {
        for (a, b) in w[0].iter().zip(&w[1]) {
            max_relative_change = max_relative_change.max((a - b).abs() / b.abs());
        }
    }
    Ok(RieszReport {
        experiment: "riesz",
        config: cfg.clone(),
        ratios,
        stable: max_relative_change <= cfg.tolerance,
        max_relative_change,
    })
}
