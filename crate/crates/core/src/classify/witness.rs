use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::opcore::scalar::{rational_serde, to_f64, Field, GaussianRational, Rational};
use crate::opcore::Operator;

/// Real ξ ≠ 0 and v ≠ 0 with 𝔸[ξ]v = 0 (up to `residual`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealNullPair {
    pub xi: Vec<f64>,
    pub v: Vec<f64>,
    /// |𝔸[ξ]v| / (|ξ|^k |v|); zero for exact witnesses.
    pub residual: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub exact: Option<ExactRealPair>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactRealPair {
    #[serde(with = "rational_serde::vec")]
    pub xi: Vec<Rational>,
    #[serde(with = "rational_serde::vec")]
    pub v: Vec<Rational>,
}

/// Complex ξ ≠ 0 and v ≠ 0 with 𝔸[ξ]v = 0 (up to `residual`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexNullPair {
    pub xi: Vec<Complex64>,
    pub v: Vec<Complex64>,
    pub residual: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub exact: Option<ExactComplexPair>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactComplexPair {
    pub xi: Vec<GaussianRational>,
    pub v: Vec<GaussianRational>,
}

impl RealNullPair {
    pub fn from_exact(op: &Operator, xi: Vec<Rational>, v: Vec<Rational>) -> Self {
        let xf: Vec<f64> = xi.iter().map(to_f64).collect();
        let vf: Vec<f64> = v.iter().map(to_f64).collect();
        Self { residual: real_residual(op, &xf, &vf), xi: xf, v: vf, exact: Some(ExactRealPair { xi, v }) }
    }

    pub fn to_complex(&self) -> ComplexNullPair {
        let c = |x: &[f64]| x.iter().map(|&a| Complex64::new(a, 0.0)).collect::<Vec<_>>();
        ComplexNullPair {
            xi: c(&self.xi),
            v: c(&self.v),
            residual: self.residual,
            exact: self.exact.as_ref().map(|e| ExactComplexPair {
                xi: e.xi.iter().cloned().map(GaussianRational::real).collect(),
                v: e.v.iter().cloned().map(GaussianRational::real).collect(),
            }),
        }
    }
}

impl ComplexNullPair {
    pub fn from_exact(op: &Operator, xi: Vec<GaussianRational>, v: Vec<GaussianRational>) -> Self {
        let xf: Vec<Complex64> = xi.iter().map(GaussianRational::to_complex).collect();
        let vf: Vec<Complex64> = v.iter().map(GaussianRational::to_complex).collect();
        Self {
            residual: complex_residual(op, &xf, &vf),
            xi: xf,
            v: vf,
            exact: Some(ExactComplexPair { xi, v }),
        }
    }

    /// True when the exact payload verifies 𝔸[ξ]v = 0 in ℚ(i).
    pub fn verify_exact(&self, op: &Operator) -> bool {
        let Some(e) = &self.exact else { return false };
        let Ok(s) = op.symbol_at(&e.xi) else { return false };
        e.v.iter().any(|c| !c.is_zero()) && s.mul_vec(&e.v).iter().all(Zero::is_zero)
    }
}

pub fn real_residual(op: &Operator, xi: &[f64], v: &[f64]) -> f64 {
    let s = op.symbol_f64(xi);
    let r = &s * DVector::from_column_slice(v);
    let xn = xi.iter().map(|a| a * a).sum::<f64>().sqrt();
    let vn = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    r.norm() / (xn.powi(op.order() as i32) * vn).max(f64::MIN_POSITIVE)
}

pub fn complex_residual(op: &Operator, xi: &[Complex64], v: &[Complex64]) -> f64 {
    let s = op.symbol_c64(xi);
    let r = &s * DVector::from_column_slice(v);
    let xn = xi.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    let vn = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    r.norm() / (xn.powi(op.order() as i32) * vn).max(f64::MIN_POSITIVE)
}

/// Scale so that the first nonzero entry is 1.
pub fn normalize_first<F: Field>(v: &mut [F]) {
    if let Some(p) = v.iter().find(|c| !c.is_zero()).cloned() {
        for c in v.iter_mut() {
            *c = c.div_ref(&p);
        }
    }
}

/// First exact kernel vector of 𝔸[ξ], normalized; `None` if injective.
pub fn exact_kernel_vector<F: Field>(op: &Operator, xi: &[F]) -> Option<Vec<F>> {
    let s = op.symbol_at(xi).ok()?;
    let mut v = s.kernel().into_iter().next()?;
    normalize_first(&mut v);
    Some(v)
}

/// Right singular vector of the smallest singular value, with that value.
pub fn smallest_singular_pair_real(m: &DMatrix<f64>) -> (f64, Vec<f64>) {
    let n = m.ncols();
    let padded = pad_rows(m.clone());
    let svd = padded.svd(false, true);
    let vt = svd.v_t.expect("requested V");
    let (idx, s) = svd
        .singular_values
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, &s)| if s < acc.1 { (i, s) } else { acc });
    let v: Vec<f64> = (0..n).map(|j| vt[(idx, j)]).collect();
    (s, v)
}

pub fn smallest_singular_pair_complex(m: &DMatrix<Complex64>) -> (f64, Vec<Complex64>) {
    let n = m.ncols();
    let padded = pad_rows(m.clone());
    let svd = padded.svd(false, true);
    let vt = svd.v_t.expect("requested V");
    let (idx, s) = svd
        .singular_values
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, &s)| if s < acc.1 { (i, s) } else { acc });
    let mut v: Vec<Complex64> = (0..n).map(|j| vt[(idx, j)].conj()).collect();
    // fix the phase: largest entry real positive, then first-nonzero normalization for display
    if let Some(p) = v.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())) {
        let ph = p / p.norm();
        for c in v.iter_mut() {
            *c /= ph;
        }
    }
    (s, v)
}

fn pad_rows<T: nalgebra::Scalar + Zero>(m: DMatrix<T>) -> DMatrix<T> {
    let (r, c) = m.shape();
    if r >= c {
        return m;
    }
    let mut p = DMatrix::from_element(c, c, T::zero());
    p.view_mut((0, 0), (r, c)).copy_from(&m);
    p
}

/// Normalize a complex vector so its first entry of non-negligible size is 1.
pub fn normalize_first_c64(v: &mut [Complex64]) {
    let scale = v.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if let Some(p) = v.iter().copied().find(|c| c.norm() > 1e-9 * scale) {
        for c in v.iter_mut() {
            *c /= p;
        }
    }
}

pub fn unit_rational(n: usize, i: usize) -> Vec<Rational> {
    (0..n).map(|j| if j == i { Rational::one() } else { Rational::zero() }).collect()
}
