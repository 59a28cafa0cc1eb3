//! Empirical constants in ‖∇^l(u − π_Ω u)‖_p ≤ c (diam Ω)^{k−l} ‖𝔸u‖_p on discs.

use aop_core::classify::fdn;
use aop_core::nullspace::{AffineField, KernelProjector, PolyField, Quadrature, SmoothField, TaylorConfig};
use aop_core::opcore::multiindex::multi_indices_up_to;
use aop_core::opcore::{Operator, RealPoly};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::field::{apply_operator, gradient_tensor_norm, lp_norm, Field};
use crate::testfields::{DiffField, GaussianBump, SumField};
use crate::LabError;

#[derive(Clone, Debug, Serialize)]
pub struct PoincareConfig {
    pub l: u32,
    pub p: f64,
    pub trials: usize,
    pub radius: f64,
    /// Radial and angular nodes of the polar rule on the disc.
    pub resolution: usize,
    pub seed: u64,
}

impl PoincareConfig {
    pub fn new(l: u32, p: f64) -> Self {
        Self { l, p, trials: 50, radius: 1.0, resolution: 32, seed: 0 }
    }
}

/// A random V-valued sample on the unit disc: polynomial of degree ≤ 6 plus Gaussian bumps.
pub struct Sample {
    pub poly: PolyField,
    pub bumps: Vec<GaussianBump>,
}

impl Sample {
    pub fn random(dim_v: usize, rng: &mut ChaCha8Rng) -> Self {
        Self::random_with_degree(dim_v, 6, rng)
    }

    pub fn random_with_degree(dim_v: usize, max_degree: u32, rng: &mut ChaCha8Rng) -> Self {
        let degree = rng.gen_range(1..=max_degree);
        let polys = (0..dim_v)
            .map(|_| {
                RealPoly::from_terms(
                    2,
                    multi_indices_up_to(2, degree).into_iter().map(|m| (m, rng.gen_range(-1.0..1.0))),
                )
            })
            .collect();
        let nb = rng.gen_range(1..=3usize);
        let bumps = (0..nb)
            .map(|_| {
                let r = rng.gen_range(0.0..0.7f64);
                let t = rng.gen_range(0.0..std::f64::consts::TAU);
                GaussianBump {
                    center: vec![r * t.cos(), r * t.sin()],
                    sigma: rng.gen_range(0.15..0.4),
                    amplitude: (0..dim_v).map(|_| rng.gen_range(-1.0..1.0)).collect(),
                }
            })
            .collect();
        Self { poly: PolyField(polys), bumps }
    }

    pub fn fields(&self) -> Vec<&dyn SmoothField> {
        let mut v: Vec<&dyn SmoothField> = vec![&self.poly];
        v.extend(self.bumps.iter().map(|b| b as &dyn SmoothField));
        v
    }
}

impl SmoothField for Sample {
    fn nvars(&self) -> usize {
        2
    }
    fn dim(&self) -> usize {
        self.poly.dim()
    }
    fn value(&self, x: &[f64]) -> Vec<f64> {
        SumField(self.fields()).value(x)
    }
    fn derivative(&self, alpha: &aop_core::opcore::MultiIndex, x: &[f64]) -> Option<Vec<f64>> {
        SumField(self.fields()).derivative(alpha, x)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PoincareReport {
    pub experiment: &'static str,
    pub config: PoincareConfig,
    pub order: u32,
    pub ratios: Vec<f64>,
    pub max: f64,
    pub min: f64,
    pub mean: f64,
    pub all_finite: bool,
}

/// Projector π_Ω for the disc of radius R about 0 with the Taylor ball B(0, R/2).
pub fn disc_projector(op: &Operator, radius: f64, resolution: usize) -> Result<KernelProjector, LabError> {
    let domain = Quadrature::disc_polar([0.0, 0.0], radius, resolution, resolution);
    let cfg = TaylorConfig::new(vec![0.0, 0.0], radius / 2.0, op.order().saturating_sub(1))
        .with_resolution(resolution);
    Ok(KernelProjector::new(op, domain, cfg)?)
}

/// ‖∇^l(u − πu)‖_p and ‖𝔸u‖_p for one field.
pub fn ratio_parts(
    op: &Operator,
    projector: &KernelProjector,
    u: &dyn SmoothField,
    l: u32,
    p: f64,
) -> Result<(f64, f64), LabError> {
    let pu = projector.apply(u)?;
    let diff = DiffField(u, &pu);
    let rule = projector.domain();
    let num = Field::from_fn(rule, 1, |x| vec![gradient_tensor_norm(&diff, l, x).unwrap_or(f64::NAN)]);
    if num.values().iter().any(|v| v.is_nan()) {
        return Err(LabError::DerivativeUnavailable(vec![l]));
    }
    let den = apply_operator(op, u, rule)?;
    Ok((lp_norm(&num, p), lp_norm(&den, p)))
}

fn check(op: &Operator, l: u32, p: f64) -> Result<(), LabError> {
    if op.n() != 2 {
        return Err(LabError::Unsupported("disc experiments need n = 2".into()));
    }
    if l >= op.order() {
        return Err(LabError::Unsupported(format!("need l < k, got l = {l}, k = {}", op.order())));
    }
    if p < 1.0 {
        return Err(LabError::Exponent(format!("p = {p} < 1")));
    }
    let c = fdn(op);
    if c.truth() != Some(true) {
        return Err(LabError::NotCElliptic(c.to_string()));
    }
    Ok(())
}

pub fn poincare_ratio(op: &Operator, cfg: &PoincareConfig) -> Result<PoincareReport, LabError> {
    check(op, cfg.l, cfg.p)?;
    let projector = disc_projector(op, cfg.radius, cfg.resolution)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut ratios = Vec::with_capacity(cfg.trials);
    for _ in 0..cfg.trials {
        let s = Sample::random(op.dim_v(), &mut rng);
        let g = SumField(s.fields());
        // the sample lives on the unit disc; u(x) = g(x/R)
        let u = AffineField { inner: &g, center: vec![0.0, 0.0], scale: 1.0 / cfg.radius };
        let (num, den) = ratio_parts(op, &projector, &u, cfg.l, cfg.p)?;
        ratios.push(num / den);
    }
    let all_finite = ratios.iter().all(|r| r.is_finite());
    let max = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let mean = ratios.iter().sum::<f64>() / ratios.len().max(1) as f64;
    Ok(PoincareReport { experiment: "poincare", config: cfg.clone(), order: op.order(), ratios, max, min, mean, all_finite })
}

/// Numerator ‖∇^l(u − πu)‖_p for u in the kernel of 𝔸, with ‖u‖_p for scale.
pub fn kernel_numerator(op: &Operator, u: &dyn SmoothField, cfg: &PoincareConfig) -> Result<(f64, f64), LabError> {
    check(op, cfg.l, cfg.p)?;
    let projector = disc_projector(op, cfg.radius, cfg.resolution)?;
    let (num, _) = ratio_parts(op, &projector, u, cfg.l, cfg.p)?;
    let norm = lp_norm(&Field::sample(projector.domain(), u), cfg.p);
    Ok((num, norm))
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilityReport {
    pub coarse: f64,
    pub fine: f64,
    pub relative_change: f64,
    pub stable: bool,
}

/// Compare the maximum ratio at the configured resolution and at twice it.
pub fn refinement_stability(op: &Operator, cfg: &PoincareConfig, tolerance: f64) -> Result<StabilityReport, LabError> {
    let coarse = poincare_ratio(op, cfg)?.max;
    let fine_cfg = PoincareConfig { resolution: 2 * cfg.resolution, ..cfg.clone() };
    let fine = poincare_ratio(op, &fine_cfg)?.max;
    let relative_change = (fine - coarse).abs() / fine;
    Ok(StabilityReport { coarse, fine, relative_change, stable: relative_change <= tolerance })
}
