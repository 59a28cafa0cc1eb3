//! Averaged Taylor polynomials 𝒫u and the L²(Ω) projection π_Ω = Π𝒫 onto ker 𝔸.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use super::field::{PolyField, SmoothField};
use super::quadrature::Quadrature;
use super::stabilized_kernel;
use crate::opcore::multiindex::{multi_indices_up_to, MultiIndex};
use crate::opcore::poly::RealPoly;
use crate::opcore::Operator;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TaylorError {
    #[error("derivative of order {0:?} is unavailable")]
    DerivativeUnavailable(Vec<u32>),
    #[error("field has {found} variables, weight ball lives in ℝ^{expected}")]
    DimensionMismatch { found: usize, expected: usize },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProjectionError {
    #[error("operator is not ℂ-elliptic: {0}")]
    NotCElliptic(String),
    #[error("kernel dimensions did not plateau up to degree {0}")]
    NoPlateau(u32),
    #[error("Gram matrix of the kernel basis is not positive definite on the domain")]
    SingularGram,
    #[error(transparent)]
    Taylor(#[from] TaylorError),
}

/// Weight ball, polynomial degree and quadrature resolution for 𝒫.
#[derive(Clone, Debug, PartialEq)]
pub struct TaylorConfig {
    pub center: Vec<f64>,
    pub radius: f64,
    pub degree: u32,
    pub resolution: usize,
}

impl TaylorConfig {
    pub fn new(center: Vec<f64>, radius: f64, degree: u32) -> Self {
        Self { center, radius, degree, resolution: 64 }
    }

    pub fn with_resolution(mut self, resolution: usize) -> Self {
        self.resolution = resolution;
        self
    }

    /// Quadrature on the ball whose weights are w(y)·dy with ∫w = 1.
    pub fn weighted_rule(&self) -> Quadrature {
        let q = Quadrature::ball(&self.center, self.radius, self.resolution);
        let raw: Vec<f64> = q.iter().map(|(y, dy)| dy * bump(&self.center, self.radius, y)).collect();
        let mass: f64 = raw.iter().sum();
        q.with_weights(raw.into_iter().map(|w| w / mass).collect())
    }
}

/// exp(−1/(1 − |y − c|²/r²)) inside the ball, 0 outside.
pub fn bump(center: &[f64], radius: f64, y: &[f64]) -> f64 {
    let s: f64 = y.iter().zip(center).map(|(a, c)| (a - c) * (a - c)).sum::<f64>() / (radius * radius);
    if s >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - s)).exp()
    }
}

/// Precomputed rule for repeated evaluation of 𝒫.
#[derive(Clone, Debug)]
pub struct AveragedTaylor {
    cfg: TaylorConfig,
    rule: Quadrature,
    alphas: Vec<MultiIndex>,
}

impl AveragedTaylor {
    pub fn new(cfg: TaylorConfig) -> Self {
        let rule = cfg.weighted_rule();
        let alphas = multi_indices_up_to(cfg.center.len(), cfg.degree);
        Self { cfg, rule, alphas }
    }

    pub fn config(&self) -> &TaylorConfig {
        &self.cfg
    }

    pub fn rule(&self) -> &Quadrature {
        &self.rule
    }

    /// 𝒫u(x) = ∫ Σ_{|α|≤d} (x−y)^α/α! ∂^α u(y) w(y) dy.
    pub fn apply(&self, u: &dyn SmoothField) -> Result<PolyField, TaylorError> {
        let n = self.cfg.center.len();
        if u.nvars() != n {
            return Err(TaylorError::DimensionMismatch { found: u.nvars(), expected: n });
        }
        let dim = u.dim();
        let c = &self.cfg.center;
        // coefficient of (x − c)^γ, per component
        let mut coef = vec![vec![0.0; self.alphas.len()]; dim];
        let pairs: Vec<(usize, usize, MultiIndex, f64)> = self
            .alphas
            .iter()
            .enumerate()
            .flat_map(|(ai, a)| {
                self.alphas.iter().enumerate().filter_map(move |(gi, g)| {
                    let rest = a.checked_sub(g)?;
                    let sign = if rest.order() % 2 == 0 { 1.0 } else { -1.0 };
                    Some((ai, gi, rest.clone(), sign / (g.factorial() as f64 * rest.factorial() as f64)))
                })
            })
            .collect();
        for (y, w) in self.rule.iter() {
            if w == 0.0 {
                continue;
            }
            let shifted: Vec<f64> = y.iter().zip(c).map(|(a, b)| a - b).collect();
            let mut derivs = Vec::with_capacity(self.alphas.len());
            for a in &self.alphas {
                derivs.push(u.derivative(a, y).ok_or_else(|| TaylorError::DerivativeUnavailable(a.0.clone()))?);
            }
            for (ai, gi, rest, f) in &pairs {
                let s = w * f * rest.power_f64(&shifted);
                for (comp, d) in derivs[*ai].iter().enumerate() {
                    coef[comp][*gi] += s * d;
                }
            }
        }
        let polys = coef
            .into_iter()
            .map(|cs| RealPoly::from_terms(n, self.alphas.iter().cloned().zip(cs)).shift(c))
            .collect();
        Ok(PolyField(polys))
    }
}

pub fn averaged_taylor(u: &dyn SmoothField, cfg: &TaylorConfig) -> Result<PolyField, TaylorError> {
    AveragedTaylor::new(cfg.clone()).apply(u)
}

/// Π: L²(Ω)-orthogonal projection onto ker 𝔸, composed with 𝒫.
#[derive(Clone, Debug)]
pub struct KernelProjector {
    n: usize,
    dim_v: usize,
    basis: Vec<PolyField>,
    domain: Quadrature,
    basis_values: Vec<Vec<f64>>,
    gram: DMatrix<f64>,
    chol: nalgebra::Cholesky<f64, nalgebra::Dyn>,
    taylor: AveragedTaylor,
    kernel_degree: u32,
}

/// Largest degree tried when looking for the kernel plateau.
pub const PLATEAU_SEARCH_LIMIT: u32 = 10;

impl KernelProjector {
    /// Kernel basis at the plateau degree; 𝒫 uses at least that degree.
    pub fn new(op: &Operator, domain: Quadrature, taylor: TaylorConfig) -> Result<Self, ProjectionError> {
        let c = crate::classify::ellipticity::fdn(op);
        if c.truth() != Some(true) {
            return Err(ProjectionError::NotCElliptic(c.to_string()));
        }
        let (profile, space) =
            stabilized_kernel(op, PLATEAU_SEARCH_LIMIT).ok_or(ProjectionError::NoPlateau(PLATEAU_SEARCH_LIMIT))?;
        let kernel_degree = profile.degree.expect("stabilized");
        let cfg = TaylorConfig { degree: taylor.degree.max(kernel_degree), ..taylor };
        Self::with_basis(op.n(), op.dim_v(), space.to_real(), domain, cfg, kernel_degree)
    }

    pub fn with_basis(
        n: usize,
        dim_v: usize,
        basis: Vec<PolyField>,
        domain: Quadrature,
        taylor: TaylorConfig,
        kernel_degree: u32,
    ) -> Result<Self, ProjectionError> {
        let basis_values: Vec<Vec<f64>> =
            basis.iter().map(|b| domain.iter().flat_map(|(x, _)| b.value(x)).collect()).collect();
        let k = basis.len();
        let gram = DMatrix::from_fn(k, k, |i, j| inner(&domain, dim_v, &basis_values[i], &basis_values[j]));
        let chol = gram.clone().cholesky().ok_or(ProjectionError::SingularGram)?;
        Ok(Self { n, dim_v, basis, domain, basis_values, gram, chol, taylor: AveragedTaylor::new(taylor), kernel_degree })
    }

    pub fn basis(&self) -> &[PolyField] {
        &self.basis
    }

    pub fn domain(&self) -> &Quadrature {
        &self.domain
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    pub fn kernel_degree(&self) -> u32 {
        self.kernel_degree
    }

    pub fn taylor(&self) -> &AveragedTaylor {
        &self.taylor
    }

    /// Coefficients of Πf in the kernel basis, for f given by its values on the domain nodes.
    pub fn coefficients_from_values(&self, values: &[f64]) -> Vec<f64> {
        let rhs = DVector::from_iterator(
            self.basis.len(),
            self.basis_values.iter().map(|b| inner(&self.domain, self.dim_v, b, values)),
        );
        self.chol.solve(&rhs).iter().copied().collect()
    }

    pub fn project_values(&self, values: &[f64]) -> PolyField {
        let c = self.coefficients_from_values(values);
        PolyField::combination(self.n, self.dim_v, &c, &self.basis)
    }

    /// Π p for a polynomial field.
    pub fn project(&self, p: &PolyField) -> PolyField {
        let values: Vec<f64> = self.domain.iter().flat_map(|(x, _)| p.value(x)).collect();
        self.project_values(&values)
    }

    /// π_Ω u = Π 𝒫 u.
    pub fn apply(&self, u: &dyn SmoothField) -> Result<PolyField, TaylorError> {
        Ok(self.project(&self.taylor.apply(u)?))
    }
}

/// Σ_q w_q ⟨a(x_q), b(x_q)⟩ for node-major flattened values.
pub fn inner(domain: &Quadrature, dim: usize, a: &[f64], b: &[f64]) -> f64 {
    domain
        .weights()
        .iter()
        .enumerate()
        .map(|(q, w)| w * (0..dim).map(|c| a[q * dim + c] * b[q * dim + c]).sum::<f64>())
        .sum()
}

pub fn pi_omega(
    u: &dyn SmoothField,
    op: &Operator,
    cfg: &TaylorConfig,
    domain: Quadrature,
) -> Result<PolyField, ProjectionError> {
    Ok(KernelProjector::new(op, domain, cfg.clone())?.apply(u)?)
}
