use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use super::multiindex::MultiIndex;
use super::scalar::{Field, Rational};
use super::symbol::SymbolMatrix;
use crate::exactla::matrix::RationalMatrix;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OperatorError {
    #[error("space dimension n = {0} not supported (need n >= 2)")]
    DimensionTooSmall(usize),
    #[error("V and W must be nonzero (got N = {dim_v}, m = {dim_w})")]
    EmptySpace { dim_v: usize, dim_w: usize },
    #[error("multi-index {alpha:?} has length {len}, expected n = {n}")]
    IndexLength { alpha: Vec<u32>, len: usize, n: usize },
    #[error("order mismatch: |alpha| = {found} for alpha = {alpha:?}, but k = {expected}")]
    OrderMismatch { alpha: Vec<u32>, found: u32, expected: u32 },
    #[error("matrix for alpha = {alpha:?} is {rows}x{cols}, expected {m}x{n_v}")]
    MatrixShape { alpha: Vec<u32>, rows: usize, cols: usize, m: usize, n_v: usize },
    #[error("duplicate multi-index {0:?}")]
    DuplicateIndex(Vec<u32>),
    #[error("operator has no nonzero coefficient matrix")]
    ZeroOperator,
    #[error("pairing is only defined for first-order operators (k = {0})")]
    PairingOrder(u32),
    #[error("dimension mismatch: expected length {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// Homogeneous constant-coefficient operator 𝔸u = Σ_{|α|=k} A_α ∂^α u, u: ℝⁿ → V = ℝᴺ, 𝔸u ∈ W = ℝᵐ.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Operator {
    n: usize,
    #[serde(rename = "N")]
    dim_v: usize,
    #[serde(rename = "m")]
    dim_w: usize,
    #[serde(rename = "k")]
    order: u32,
    #[serde(serialize_with = "serialize_terms")]
    terms: BTreeMap<MultiIndex, RationalMatrix>,
}

fn serialize_terms<S: serde::Serializer>(
    terms: &BTreeMap<MultiIndex, RationalMatrix>,
    s: S,
) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    #[derive(Serialize)]
    struct Term<'a> {
        alpha: &'a MultiIndex,
        matrix: &'a RationalMatrix,
    }
    let mut seq = s.serialize_seq(Some(terms.len()))?;
    for (alpha, matrix) in terms {
        seq.serialize_element(&Term { alpha, matrix })?;
    }
    seq.end()
}

impl Operator {
    /// Validates and canonicalizes; zero coefficient matrices are dropped.
    pub fn new(
        n: usize,
        dim_v: usize,
        dim_w: usize,
        order: u32,
        terms: impl IntoIterator<Item = (MultiIndex, RationalMatrix)>,
    ) -> Result<Self, OperatorError> {
        if n < 2 {
            return Err(OperatorError::DimensionTooSmall(n));
        }
        if dim_v == 0 || dim_w == 0 {
            return Err(OperatorError::EmptySpace { dim_v, dim_w });
        }
        let mut map = BTreeMap::new();
        for (alpha, matrix) in terms {
            if alpha.nvars() != n {
                return Err(OperatorError::IndexLength { alpha: alpha.0.clone(), len: alpha.nvars(), n });
            }
            if alpha.order() != order {
                return Err(OperatorError::OrderMismatch {
                    alpha: alpha.0.clone(),
                    found: alpha.order(),
                    expected: order,
                });
            }
            if matrix.rows() != dim_w || matrix.cols() != dim_v {
                return Err(OperatorError::MatrixShape {
                    alpha: alpha.0.clone(),
                    rows: matrix.rows(),
                    cols: matrix.cols(),
                    m: dim_w,
                    n_v: dim_v,
                });
            }
            if map.contains_key(&alpha) {
                return Err(OperatorError::DuplicateIndex(alpha.0.clone()));
            }
            map.insert(alpha, matrix);
        }
        map.retain(|_, m| !m.is_zero());
        if map.is_empty() {
            return Err(OperatorError::ZeroOperator);
        }
        Ok(Self { n, dim_v, dim_w, order, terms: map })
    }

    /// Build from individual entries `(row, col, α, coefficient)`, summing repeats.
    pub fn from_entries(
        n: usize,
        dim_v: usize,
        dim_w: usize,
        order: u32,
        entries: impl IntoIterator<Item = (usize, usize, MultiIndex, Rational)>,
    ) -> Result<Self, OperatorError> {
        let mut map: BTreeMap<MultiIndex, RationalMatrix> = BTreeMap::new();
        for (r, c, alpha, v) in entries {
            if alpha.nvars() != n {
                return Err(OperatorError::IndexLength { alpha: alpha.0.clone(), len: alpha.nvars(), n });
            }
            if r >= dim_w || c >= dim_v {
                return Err(OperatorError::MatrixShape {
                    alpha: alpha.0.clone(),
                    rows: r + 1,
                    cols: c + 1,
                    m: dim_w,
                    n_v: dim_v,
                });
            }
            let m = map.entry(alpha).or_insert_with(|| RationalMatrix::zeros(dim_w, dim_v));
            let cur = m.get(r, c).clone();
            m.set(r, c, cur + v);
        }
        Self::new(n, dim_v, dim_w, order, map)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// N = dim V.
    pub fn dim_v(&self) -> usize {
        self.dim_v
    }

    /// m = dim W.
    pub fn dim_w(&self) -> usize {
        self.dim_w
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, RationalMatrix> {
        &self.terms
    }

    pub fn coefficient(&self, alpha: &MultiIndex) -> Option<&RationalMatrix> {
        self.terms.get(alpha)
    }

    pub fn symbol(&self) -> SymbolMatrix {
        SymbolMatrix::from_operator(self)
    }

    /// 𝔸[ξ] evaluated at a point over any field.
    pub fn symbol_at<F: Field>(&self, xi: &[F]) -> Result<crate::exactla::matrix::Matrix<F>, OperatorError> {
        if xi.len() != self.n {
            return Err(OperatorError::DimensionMismatch { expected: self.n, found: xi.len() });
        }
        let mut out = crate::exactla::matrix::Matrix::<F>::zeros(self.dim_w, self.dim_v);
        for (alpha, a) in &self.terms {
            let p = alpha.power(xi, F::one());
            for i in 0..self.dim_w {
                for j in 0..self.dim_v {
                    let c = a.get(i, j);
                    if c.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j).add_ref(&F::from_rational(c).mul_ref(&p));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// 𝔸[ξ] as an `f64` matrix (fast numeric path).
    pub fn symbol_f64(&self, xi: &[f64]) -> nalgebra::DMatrix<f64> {
        let mut out = nalgebra::DMatrix::zeros(self.dim_w, self.dim_v);
        for (alpha, a) in self.float_terms() {
            let p = alpha.power_f64(xi);
            out += a * p;
        }
        out
    }

    /// 𝔸[ξ] as a complex matrix.
    pub fn symbol_c64(&self, xi: &[num_complex::Complex64]) -> nalgebra::DMatrix<num_complex::Complex64> {
        let one = num_complex::Complex64::new(1.0, 0.0);
        let mut out = nalgebra::DMatrix::zeros(self.dim_w, self.dim_v);
        for (alpha, a) in self.float_terms() {
            let p = alpha.power(xi, one);
            out += a.map(|v| num_complex::Complex64::new(v, 0.0)) * p;
        }
        out
    }

    pub fn float_terms(&self) -> Vec<(MultiIndex, nalgebra::DMatrix<f64>)> {
        self.terms.iter().map(|(a, m)| (a.clone(), m.to_f64())).collect()
    }

    /// v ⊗_𝔸 ξ = 𝔸[ξ]v for first-order operators.
    pub fn pairing(&self, v: &[f64], xi: &[f64]) -> Result<Vec<f64>, OperatorError> {
        if self.order != 1 {
            return Err(OperatorError::PairingOrder(self.order));
        }
        if v.len() != self.dim_v {
            return Err(OperatorError::DimensionMismatch { expected: self.dim_v, found: v.len() });
        }
        if xi.len() != self.n {
            return Err(OperatorError::DimensionMismatch { expected: self.n, found: xi.len() });
        }
        let s = self.symbol_f64(xi);
        Ok((s * nalgebra::DVector::from_column_slice(v)).iter().copied().collect())
    }

    /// Largest absolute coefficient, used to scale numeric thresholds.
    pub fn coefficient_scale(&self) -> f64 {
        self.terms
            .values()
            .flat_map(|m| (0..m.rows()).flat_map(move |i| m.row(i).iter().map(Field::magnitude).collect::<Vec<_>>()))
            .fold(0.0, f64::max)
    }
}

pub fn pairing(op: &Operator, v: &[f64], xi: &[f64]) -> Result<Vec<f64>, OperatorError> {
    op.pairing(v, xi)
}
