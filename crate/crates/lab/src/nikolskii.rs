//! Decay of translation differences ∫|u(x+y) − u(x)|^p dx for compactly supported u.

use aop_core::classify::is_elliptic;
use aop_core::nullspace::SmoothField;
use aop_core::opcore::Operator;
use serde::Serialize;

use crate::field::{apply_operator_grid, GridField};
use crate::LabError;

#[derive(Clone, Debug, Serialize)]
pub struct NikolskiiConfig {
    pub s: f64,
    pub p: f64,
    /// Grid spacing is 2^{−level} on [−1, 1]ⁿ.
    pub level: u32,
    /// |y| = 2^{−j} for j in this range.
    pub ladder: Vec<u32>,
    /// Translation axis.
    pub axis: usize,
    pub slope_slack: f64,
}

impl NikolskiiConfig {
    pub fn new(s: f64, p: f64) -> Self {
        Self { s, p, level: 9, ladder: (3..=8).collect(), axis: 0, slope_slack: 0.1 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NikolskiiReport {
    pub experiment: &'static str,
    pub config: NikolskiiConfig,
    pub shifts: Vec<f64>,
    pub differences: Vec<f64>,
    pub slope: f64,
    pub required_slope: f64,
    pub passed: bool,
    /// ‖𝔸u‖_{L¹} by centered differences on the grid.
    pub operator_l1: f64,
    /// max_y ∫|Δ_y u|^p / (‖𝔸u‖₁^p |y|^{sp}).
    pub constant: f64,
}

/// p must satisfy 1 ≤ p < n/(n − 1 + s) with 0 < s < 1.
pub fn admissible(n: usize, s: f64, p: f64) -> Result<(), LabError> {
    if !(s > 0.0 && s < 1.0) {
        return Err(LabError::Exponent(format!("s = {s} must lie in (0, 1)")));
    }
    let bound = n as f64 / (n as f64 - 1.0 + s);
    if !(p >= 1.0 && p < bound) {
        return Err(LabError::Exponent(format!("p = {p} must lie in [1, {bound:.4})")));
    }
    Ok(())
}

/// Least-squares slope of log y against log x.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Node grid on [−1, 1]ⁿ with spacing 2^{−level}.
pub fn unit_box_grid(n: usize, level: u32, u: &dyn SmoothField) -> GridField {
    let h = 2f64.powi(-(level as i32));
    let per_axis = (1usize << (level + 1)) + 1;
    GridField::sample(vec![-1.0; n], h, vec![per_axis; n], u.dim(), |x| u.value(x))
}

pub fn nikolskii_scaling(op: &Operator, u: &dyn SmoothField, cfg: &NikolskiiConfig) -> Result<NikolskiiReport, LabError> {
    if op.order() != 1 {
        return Err(LabError::Unsupported(format!("needs a first-order operator, got k = {}", op.order())));
    }
    admissible(op.n(), cfg.s, cfg.p)?;
    let e = is_elliptic(op).certainty;
    if e.truth() != Some(true) {
        return Err(LabError::NotElliptic(e.to_string()));
    }
    if cfg.ladder.iter().any(|&j| j > cfg.level) {
        return Err(LabError::GridTooCoarse(format!("shift 2^-j needs j ≤ {}", cfg.level)));
    }
    let grid = unit_box_grid(op.n(), cfg.level, u);
    let shifts: Vec<f64> = cfg.ladder.iter().map(|&j| 2f64.powi(-(j as i32))).collect();
    let differences: Vec<f64> = cfg
        .ladder
        .iter()
        .map(|&j| grid.translation_difference(cfg.axis, 1usize << (cfg.level - j), cfg.p))
        .collect();
    let slope = loglog_slope(&shifts, &differences);
    let required_slope = cfg.s * cfg.p - cfg.slope_slack;
    let operator_l1 = apply_operator_grid(op, &grid)?.lp_norm(1.0);
    let constant = shifts
        .iter()
        .zip(&differences)
        .map(|(y, d)| d / (operator_l1.powf(cfg.p) * y.powf(cfg.s * cfg.p)))
        .fold(0.0, f64::max);
    Ok(NikolskiiReport {
        experiment: "nikolskii",
        config: cfg.clone(),
        shifts,
        differences,
        slope,
        required_slope,
        passed: slope >= required_slope,
        operator_l1,
        constant,
    })
}
