//! Null families u_f(x) = Re(f(x·ξ)v) of non-ℂ-elliptic operators.

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use super::ellipticity::is_c_elliptic;
use super::witness::{ComplexNullPair, ExactComplexPair};
use crate::nullspace::field::SmoothField;
use crate::opcore::multiindex::{multi_indices_of_order, MultiIndex};
use crate::opcore::Operator;
use crate::stencil::partial_derivative;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FamilyError {
    #[error("operator is ℂ-elliptic, so there is no infinite null family")]
    CElliptic,
    #[error("no complex null pair was found: {0}")]
    NoWitness(String),
}

/// ξ ∈ ℂⁿ, v ∈ ℂ^N with 𝔸[ξ]v = 0; every holomorphic f gives 𝔸 u_f = 0.
#[derive(Clone, Debug, Serialize)]
pub struct NullFamily {
    pub xi: Vec<Complex64>,
    pub v: Vec<Complex64>,
    pub residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<ExactComplexPair>,
    pub description: String,
}

/// Holomorphic f with derivatives of every order.
pub trait Holomorphic: Sync {
    /// f^{(m)}(z).
    fn derivative(&self, m: u32, z: Complex64) -> Complex64;
}

/// f(z) = z^j.
#[derive(Clone, Copy, Debug)]
pub struct Power(pub u32);

impl Holomorphic for Power {
    fn derivative(&self, m: u32, z: Complex64) -> Complex64 {
        if m > self.0 {
            return Complex64::new(0.0, 0.0);
        }
        let c: f64 = (0..m).map(|i| (self.0 - i) as f64).product();
        z.powu(self.0 - m) * c
    }
}

/// f(z) = (1 − z)^{−β}, principal branch.
#[derive(Clone, Copy, Debug)]
pub struct InversePower(pub f64);

impl Holomorphic for InversePower {
    fn derivative(&self, m: u32, z: Complex64) -> Complex64 {
        let b = self.0;
        let c: f64 = (0..m).map(|i| b + i as f64).product();
        (Complex64::new(1.0, 0.0) - z).powf(-(b + m as f64)) * c
    }
}

impl NullFamily {
    pub fn from_pair(pair: &ComplexNullPair) -> Self {
        let description = format!(
            "u_f(x) = Re(f(x·ξ) v), ξ = [{}], v = [{}]",
            pair.xi.iter().map(fmt_c).collect::<Vec<_>>().join(", "),
            pair.v.iter().map(fmt_c).collect::<Vec<_>>().join(", ")
        );
        Self { xi: pair.xi.clone(), v: pair.v.clone(), residual: pair.residual, exact: pair.exact.clone(), description }
    }

    pub fn nvars(&self) -> usize {
        self.xi.len()
    }

    pub fn dim(&self) -> usize {
        self.v.len()
    }

    pub fn phase(&self, x: &[f64]) -> Complex64 {
        x.iter().zip(&self.xi).map(|(a, z)| z * a).sum()
    }

    pub fn member<H: Holomorphic>(&self, f: H) -> FamilyMember<'_, H> {
        FamilyMember { family: self, f }
    }
}

fn fmt_c(z: &Complex64) -> String {
    format!("{}{:+}i", z.re, z.im)
}

/// One member u_f as a smooth field with analytic derivatives.
pub struct FamilyMember<'a, H: Holomorphic> {
    family: &'a NullFamily,
    f: H,
}

impl<H: Holomorphic> SmoothField for FamilyMember<'_, H> {
    fn nvars(&self) -> usize {
        self.family.nvars()
    }
    fn dim(&self) -> usize {
        self.family.dim()
    }
    fn value(&self, x: &[f64]) -> Vec<f64> {
        let fz = self.f.derivative(0, self.family.phase(x));
        self.family.v.iter().map(|c| (fz * c).re).collect()
    }
    fn derivative(&self, alpha: &MultiIndex, x: &[f64]) -> Option<Vec<f64>> {
        let fz = self.f.derivative(alpha.order(), self.family.phase(x));
        let xa = alpha.power(&self.family.xi, Complex64::new(1.0, 0.0));
        Some(self.family.v.iter().map(|c| (fz * xa * c).re).collect())
    }
}

pub fn null_family(op: &Operator) -> Result<NullFamily, FamilyError> {
    let c = is_c_elliptic(op);
    if c.certainty.is_true() {
        return Err(FamilyError::CElliptic);
    }
    match c.witness {
        Some(w) => Ok(NullFamily::from_pair(&w)),
        None => Err(FamilyError::NoWitness(c.certainty.to_string())),
    }
}

/// Result of checking ‖𝔸u_f‖_∞ against ‖∇^k u_f‖_∞ with finite differences.
#[derive(Clone, Debug, Serialize)]
pub struct SampledCheck {
    pub power: u32,
    pub max_operator: f64,
    pub max_kth_gradient: f64,
    pub passed: bool,
}

/// Relative tolerance for the sampled check.
pub const FAMILY_TOLERANCE: f64 = 1e-8;

/// Check f(z) = z^j for j = 0..=max_power on the grid {−1, −1+h, …, 1}ⁿ (n = 2) or a coarser cube.
///
/// Derivatives use 7-point centered stencils, exact on these polynomials up to rounding. When
/// j < k, ∇^k u_f vanishes and the bound is checked in absolute terms.
pub fn sampled_check(op: &Operator, family: &NullFamily, max_power: u32) -> Vec<SampledCheck> {
    let n = op.n();
    let per_axis: usize = if n == 2 { 9 } else { 4 };
    let h = 0.05;
    let grid: Vec<Vec<f64>> = (0..per_axis.pow(n as u32))
        .map(|idx| {
            (0..n).map(|a| -1.0 + 2.0 * ((idx / per_axis.pow(a as u32)) % per_axis) as f64 / (per_axis - 1) as f64).collect()
        })
        .collect();
    let kth = multi_indices_of_order(n, op.order());
    let terms = op.float_terms();
    (0..=max_power)
        .map(|j| {
            let member = family.member(Power(j));
            let f = |x: &[f64]| member.value(x);
            let mut max_op: f64 = 0.0;
            let mut max_grad: f64 = 0.0;
            for x in &grid {
                let derivs: Vec<(MultiIndex, Vec<f64>)> =
                    kth.iter().map(|a| (a.clone(), partial_derivative(&f, x, a, h, 3))).collect();
                for (_, d) in &derivs {
                    max_grad = d.iter().fold(max_grad, |m, v| m.max(v.abs()));
                }
                for r in 0..op.dim_w() {
                    let mut s = 0.0;
                    for (alpha, a) in &terms {
                        let d = &derivs.iter().find(|(b, _)| b == alpha).expect("order k").1;
                        s += (0..op.dim_v()).map(|c| a[(r, c)] * d[c]).sum::<f64>();
                    }
                    max_op = max_op.max(s.abs());
                }
            }
            let scale = if j < op.order() { 1.0 } else { max_grad };
            SampledCheck { power: j, max_operator: max_op, max_kth_gradient: max_grad, passed: max_op < FAMILY_TOLERANCE * scale }
        })
        .collect()
}
