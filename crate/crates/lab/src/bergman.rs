//! Null-space elements of non-ℂ-elliptic planar operators that lie in L¹ but not L².
//!
//! For a null pair (ξ, v) the fields u_β(x) = Re((1 − z(x))^{−β} v), z(x) = x·ξ / z₀, are
//! annihilated by 𝔸. z₀ is chosen so that z maps the unit disc into the closed unit disc
//! touching the circle only at z = 1, which keeps the branch cut of the principal power
//! outside the domain and puts the singularity on the boundary.

use std::f64::consts::PI;

use aop_core::classify::{null_family, InversePower, NullFamily};
use aop_core::nullspace::{Quadrature, SmoothField};
use aop_core::opcore::Operator;
use num_complex::Complex64;
use serde::Serialize;

use crate::field::{lp_norm, Field};
use crate::LabError;

#[derive(Clone, Debug, Serialize)]
pub struct BergmanConfig {
    pub betas: Vec<f64>,
    /// Polar resolutions; level N uses N radial and N angular nodes.
    pub levels: Vec<usize>,
    /// Grading exponent of the polar grid toward the singular point.
    pub grading: f64,
    /// Relative change allowed between successive L¹ values.
    pub cauchy_tolerance: f64,
    /// Smallest per-level growth of the L² norm counted as divergence.
    pub growth_threshold: f64,
}

impl Default for BergmanConfig {
    fn default() -> Self {
        Self {
            betas: vec![0.5, 1.0, 1.5],
            levels: vec![128, 256, 512],
            grading: 2.0,
            cauchy_tolerance: 0.01,
            growth_threshold: 1.3,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BergmanRow {
    pub beta: f64,
    pub l1: Vec<f64>,
    pub l2: Vec<f64>,
    pub l1_changes: Vec<f64>,
    pub l2_growth: Vec<f64>,
    pub l1_cauchy: bool,
    pub l2_cauchy: bool,
    pub l2_divergent: bool,
    /// Analytic rule: u_β ∈ L² iff 2β < 2.
    pub l2_expected: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BergmanReport {
    pub experiment: &'static str,
    pub config: BergmanConfig,
    pub family: String,
    pub singular_point: [f64; 2],
    pub rows: Vec<BergmanRow>,
}

/// The planar null family rescaled so the singularity sits on the unit circle.
pub struct ScaledFamily {
    pub family: NullFamily,
    pub z0: Complex64,
    pub singular_point: [f64; 2],
}

impl ScaledFamily {
    pub fn new(family: NullFamily) -> Result<Self, LabError> {
        if family.nvars() != 2 {
            return Err(LabError::Unsupported("the disc experiment needs n = 2".into()));
        }
        // |x·ξ|² = xᵀ(RRᵀ + IIᵀ)x; its top eigenvector maximizes |x·ξ| on the circle
        let (r, i) = ([family.xi[0].re, family.xi[1].re], [family.xi[0].im, family.xi[1].im]);
        let m = nalgebra::Matrix2::new(
            r[0] * r[0] + i[0] * i[0],
            r[0] * r[1] + i[0] * i[1],
            r[0] * r[1] + i[0] * i[1],
            r[1] * r[1] + i[1] * i[1],
        );
        let eig = m.symmetric_eigen();
        let top = if eig.eigenvalues[0] >= eig.eigenvalues[1] { 0 } else { 1 };
        let x = eig.eigenvectors.column(top);
        let mut point = [x[0], x[1]];
        if point[0] < 0.0 || (point[0] == 0.0 && point[1] < 0.0) {
            point = [-point[0], -point[1]];
        }
        let z0 = family.phase(&point);
        if z0.norm() == 0.0 {
            return Err(LabError::Unsupported("null direction has x·ξ ≡ 0".into()));
        }
        Ok(Self { family, z0, singular_point: point })
    }

    pub fn z(&self, x: &[f64]) -> Complex64 {
        self.family.phase(x) / self.z0
    }

    pub fn member(&self, beta: f64) -> BergmanField<'_> {
        BergmanField { scaled: self, f: InversePower(beta) }
    }
}

pub struct BergmanField<'a> {
    scaled: &'a ScaledFamily,
    f: InversePower,
}

impl SmoothField for BergmanField<'_> {
    fn nvars(&self) -> usize {
        2
    }
    fn dim(&self) -> usize {
        self.scaled.family.dim()
    }
    fn value(&self, x: &[f64]) -> Vec<f64> {
        use aop_core::classify::Holomorphic;
        let fz = self.f.derivative(0, self.scaled.z(x));
        self.scaled.family.v.iter().map(|c| (fz * c).re).collect()
    }
    fn derivative(&self, alpha: &aop_core::opcore::MultiIndex, x: &[f64]) -> Option<Vec<f64>> {
        use aop_core::classify::Holomorphic;
        let fz = self.f.derivative(alpha.order(), self.scaled.z(x));
        let xi: Vec<Complex64> = self.scaled.family.xi.iter().map(|c| c / self.scaled.z0).collect();
        let xa = alpha.power(&xi, Complex64::new(1.0, 0.0));
        Some(self.scaled.family.v.iter().map(|c| (fz * xa * c).re).collect())
    }
}

/// Midpoint rule on the unit disc in coordinates graded toward the boundary point at angle θ*.
///
/// r = 1 − (1 − s)^γ and θ = θ* + π sign(t)|t|^γ with s ∈ (0, 1), t ∈ (−1, 1) uniform.
pub fn graded_disc(theta_star: f64, n: usize, gamma: f64) -> Quadrature {
    let mut pts = Vec::with_capacity(2 * n * n);
    let mut w = Vec::with_capacity(n * n);
    let ds = 1.0 / n as f64;
    let dt = 2.0 / n as f64;
    for a in 0..n {
        let s = (a as f64 + 0.5) * ds;
        let r = 1.0 - (1.0 - s).powf(gamma);
        let dr = gamma * (1.0 - s).powf(gamma - 1.0) * ds;
        for b in 0..n {
            let t = -1.0 + (b as f64 + 0.5) * dt;
            let th = theta_star + PI * t.signum() * t.abs().powf(gamma);
            let dth = PI * gamma * t.abs().powf(gamma - 1.0) * dt;
            pts.push(r * th.cos());
            pts.push(r * th.sin());
            w.push(r * dr * dth);
        }
    }
    Quadrature::new(2, pts, w)
}

pub fn bergman_blowup(op: &Operator, cfg: &BergmanConfig) -> Result<BergmanReport, LabError> {
    if op.n() != 2 {
        return Err(LabError::Unsupported("the disc experiment needs n = 2".into()));
    }
    let family = match null_family(op) {
        Ok(f) => f,
        Err(aop_core::classify::FamilyError::CElliptic) => return Err(LabError::CElliptic),
        Err(e) => return Err(e.into()),
    };
    let description = family.description.clone();
    let scaled = ScaledFamily::new(family)?;
    let theta = scaled.singular_point[1].atan2(scaled.singular_point[0]);
    let rules: Vec<Quadrature> = cfg.levels.iter().map(|&n| graded_disc(theta, n, cfg.grading)).collect();
    let rows = cfg
        .betas
        .iter()
        .map(|&beta| {
            let u = scaled.member(beta);
            let (l1, l2): (Vec<f64>, Vec<f64>) = rules
                .iter()
                .map(|q| {
                    let f = Field::sample(q, &u);
                    (lp_norm(&f, 1.0), lp_norm(&f, 2.0))
                })
                .unzip();
            let rel = |v: &[f64]| v.windows(2).map(|w| (w[1] - w[0]).abs() / w[1].abs()).collect::<Vec<_>>();
            let l1_changes = rel(&l1);
            let l2_changes = rel(&l2);
            let l2_growth: Vec<f64> = l2.windows(2).map(|w| w[1] / w[0]).collect();
            BergmanRow {
                beta,
                l1_cauchy: l1_changes.iter().all(|&c| c < cfg.cauchy_tolerance),
                l2_cauchy: l2_changes.iter().all(|&c| c < cfg.cauchy_tolerance),
                l2_divergent: !l2_growth.is_empty() && l2_growth.iter().all(|&g| g >= cfg.growth_threshold),
                l2_expected: 2.0 * beta < 2.0,
                l1,
                l2,
                l1_changes,
                l2_growth,
            }
        })
        .collect();
    Ok(BergmanReport {
        experiment: "bergman",
        config: cfg.clone(),
        family: description,
        singular_point: scaled.singular_point,
        rows,
    })
}

/// One point of the weighted Bergman membership check.
#[derive(Clone, Debug, Serialize)]
pub struct MembershipCheck {
    pub p: f64,
    pub alpha: f64,
    pub beta: f64,
    /// Ratio of successive dyadic shell contributions near z = 1.
    pub shell_ratio: f64,
    pub numeric_member: bool,
    pub rule_member: bool,
}

/// Contribution of {2^{−j−1} < |1 − z| < 2^{−j}} ∩ 𝔻 to ∫ |1 − z|^{−pβ} (1 − |z|²)^α dA.
///
/// Uses z = 1 − ρe^{iφ}; z ∈ 𝔻 iff cos φ > ρ/2, and 1 − |z|² = ρ(2cos φ − ρ).
pub fn shell_integral(p: f64, alpha: f64, beta: f64, j: i32, nodes: usize) -> f64 {
    let (a, b) = (2f64.powi(-j - 1), 2f64.powi(-j));
    // log-spaced radial midpoints
    let (la, lb) = (a.ln(), b.ln());
    let dl = (lb - la) / nodes as f64;
    let mut total = 0.0;
    for i in 0..nodes {
        let rho = (la + (i as f64 + 0.5) * dl).exp();
        let phi_max = (rho / 2.0).acos();
        let dphi = 2.0 * phi_max / nodes as f64;
        let mut ang = 0.0;
        for k in 0..nodes {
            let phi = -phi_max + (k as f64 + 0.5) * dphi;
            ang += (rho * (2.0 * phi.cos() - rho)).powf(alpha) * dphi;
        }
        // dA = ρ dρ dφ = ρ² d(log ρ) dφ
        total += rho.powf(-p * beta) * ang * rho * rho * dl;
    }
    total
}

pub fn membership_check(p: f64, alpha: f64, beta: f64) -> MembershipCheck {
    let j = 24;
    let shell_ratio = shell_integral(p, alpha, beta, j + 1, 64) / shell_integral(p, alpha, beta, j, 64);
    MembershipCheck {
        p,
        alpha,
        beta,
        shell_ratio,
        numeric_member: shell_ratio < 1.0,
        rule_member: p * beta < alpha + 2.0,
    }
}

/// The 3×3×3 grid p ∈ {1, 2, 3}, α ∈ {¼, ¾, 3/2}, β ∈ {½, 1, 3/2}.
pub fn membership_grid() -> Vec<MembershipCheck> {
    let mut out = Vec::new();
    for p in [1.0, 2.0, 3.0] {
        for alpha in [0.25, 0.75, 1.5] {
            for beta in [0.5, 1.0, 1.5] {
                out.push(membership_check(p, alpha, beta));
            }
        }
    }
    out
}
