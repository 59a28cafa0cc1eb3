//! Smooth test fields with analytic derivatives.

use aop_core::nullspace::SmoothField;
use aop_core::opcore::MultiIndex;

/// Probabilists' Hermite polynomial He_m(t).
pub fn hermite(m: u32, t: f64) -> f64 {
    let (mut a, mut b) = (1.0, t);
    if m == 0 {
        return a;
    }
    for j in 1..m {
        let c = t * b - j as f64 * a;
        a = b;
        b = c;
    }
    b
}

/// amplitude · exp(−|x − c|²/(2σ²)).
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianBump {
    pub center: Vec<f64>,
    pub sigma: f64,
    pub amplitude: Vec<f64>,
}

impl SmoothField for GaussianBump {
    fn nvars(&self) -> usize {
        self.center.len()
    }
    fn dim(&self) -> usize {
        self.amplitude.len()
    }
    fn value(&self, x: &[f64]) -> Vec<f64> {
        self.derivative(&MultiIndex::zero(self.nvars()), x).expect("analytic")
    }
    fn derivative(&self, alpha: &MultiIndex, x: &[f64]) -> Option<Vec<f64>> {
        let mut s = 1.0;
        for ((xi, ci), &m) in x.iter().zip(&self.center).zip(alpha.exps()) {
            let t = (xi - ci) / self.sigma;
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            s *= sign * self.sigma.powi(-(m as i32)) * hermite(m, t) * (-0.5 * t * t).exp();
        }
        Some(self.amplitude.iter().map(|a| a * s).collect())
    }
}

/// One lattice mode κ with per-component cosine and sine coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigMode {
    pub kappa: Vec<i64>,
    pub cos: Vec<f64>,
    pub sin: Vec<f64>,
}

/// Σ_κ a_κ cos(κ·x) + b_κ sin(κ·x), a trigonometric polynomial on the torus.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigField {
    pub nvars: usize,
    pub dim: usize,
    pub modes: Vec<TrigMode>,
}

impl SmoothField for TrigField {
    fn nvars(&self) -> usize {
        self.nvars
    }
    fn dim(&self) -> usize {
        self.dim
    }
    fn value(&self, x: &[f64]) -> Vec<f64> {
        self.derivative(&MultiIndex::zero(self.nvars), x).expect("analytic")
    }
    fn derivative(&self, alpha: &MultiIndex, x: &[f64]) -> Option<Vec<f64>> {
        let mut out = vec![0.0; self.dim];
        // ∂^α cos(κ·x) = κ^α cos(κ·x + |α|π/2), likewise for sin
        let shift = alpha.order() as f64 * std::f64::consts::FRAC_PI_2;
        for m in &self.modes {
            let k: Vec<f64> = m.kappa.iter().map(|&v| v as f64).collect();
            let ka = alpha.power_f64(&k);
            if ka == 0.0 {
                continue;
            }
            let ph: f64 = k.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() + shift;
            let (s, c) = ph.sin_cos();
            for (o, (a, b)) in out.iter_mut().zip(m.cos.iter().zip(&m.sin)) {
                *o += ka * (a * c + b * s);
            }
        }
        Some(out)
    }
}

/// Pointwise sum of fields with the same shape.
pub struct SumField<'a>(pub Vec<&'a dyn SmoothField>);

impl SmoothField for SumField<'_> {
    fn nvars(&self) -> usize {
        self.0[0].nvars()
    }
    fn dim(&self) -> usize {
        self.0[0].dim()
    }
    fn value(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        for f in &self.0 {
            for (o, v) in out.iter_mut().zip(f.value(x)) {
                *o += v;
            }
        }
        out
    }
    fn derivative(&self, alpha: &MultiIndex, x: &[f64]) -> Option<Vec<f64>> {
        let mut out = vec![0.0; self.dim()];
        for f in &self.0 {
            for (o, v) in out.iter_mut().zip(f.derivative(alpha, x)?) {
                *o += v;
            }
        }
        Some(out)
    }
}

/// a − b.
pub struct DiffField<'a>(pub &'a dyn SmoothField, pub &'a dyn SmoothField);

impl SmoothField for DiffField<'_> {
    fn nvars(&self) -> usize {
        self.0.nvars()
    }
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn value(&self, x: &[f64]) -> Vec<f64> {
        self.0.value(x).iter().zip(self.1.value(x)).map(|(a, b)| a - b).collect()
    }
    fn derivative(&self, alpha: &MultiIndex, x: &[f64]) -> Option<Vec<f64>> {
        let a = self.0.derivative(alpha, x)?;
        let b = self.1.derivative(alpha, x)?;
        Some(a.iter().zip(b).map(|(a, b)| a - b).collect())
    }
}

/// Radial profile g(|x − c|/ρ) times a fixed vector, supported in the closed ball of radius ρ.
#[derive(Clone, Debug, PartialEq)]
pub enum Profile {
    /// exp(1 − 1/(1 − t²)) for t < 1, so the value at the center is 1.
    Smooth,
    /// ½(1 + tanh((r₀ − t)/ε)) for t < 1, cut to 0 outside; nearly an indicator of B(c, r₀ρ).
    Steep { r0: f64, eps: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompactBump {
    pub center: Vec<f64>,
    pub radius: f64,
    pub amplitude: Vec<f64>,
    pub profile: Profile,
}

impl CompactBump {
    pub fn smooth(center: Vec<f64>, radius: f64, amplitude: Vec<f64>) -> Self {
        Self { center, radius, amplitude, profile: Profile::Smooth }
    }

    pub fn scalar_profile(&self, x: &[f64]) -> f64 {
        let t = x.iter().zip(&self.center).map(|(a, c)| (a - c) * (a - c)).sum::<f64>().sqrt() / self.radius;
        if t >= 1.0 {
            return 0.0;
        }
        match self.profile {
            Profile::Smooth => (1.0 - 1.0 / (1.0 - t * t)).exp(),
            Profile::Steep { r0, eps } => 0.5 * (1.0 + ((r0 - t) / eps).tanh()),
        }
    }
}

impl SmoothField for CompactBump {
    fn nvars(&self) -> usize {
        self.center.len()
    }
    fn dim(&self) -> usize {
        self.amplitude.len()
    }
    fn value(&self, x: &[f64]) -> Vec<f64> {
        let g = self.scalar_profile(x);
        self.amplitude.iter().map(|a| a * g).collect()
    }
    fn derivative(&self, alpha: &MultiIndex, x: &[f64]) -> Option<Vec<f64>> {
        (alpha.order() == 0).then(|| self.value(x))
    }
}
