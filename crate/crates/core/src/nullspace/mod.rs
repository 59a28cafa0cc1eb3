//! Polynomial null spaces, averaged Taylor polynomials and the projection onto ker 𝔸.

pub mod field;
pub mod quadrature;
pub mod taylor;

use num_traits::Zero;
use serde::Serialize;

use crate::exactla::matrix::RationalMatrix;
use crate::opcore::multiindex::{multi_indices_up_to, MultiIndex};
use crate::opcore::poly::Polynomial;
use crate::opcore::scalar::Rational;
use crate::opcore::Operator;

pub use field::{AffineField, PolyField, SmoothField, ValueField};
pub use quadrature::Quadrature;
pub use taylor::{averaged_taylor, pi_omega, KernelProjector, ProjectionError, TaylorConfig, TaylorError};

/// Basis of {u ∈ ℝ_d[x]^V : 𝔸u = 0}.
#[derive(Clone, Debug)]
pub struct PolySpace {
    pub n: usize,
    pub dim_v: usize,
    pub degree: u32,
    /// Each element lists its N component polynomials.
    pub basis: Vec<Vec<Polynomial>>,
}

impl PolySpace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn to_real(&self) -> Vec<PolyField> {
        self.basis.iter().map(|b| PolyField(b.iter().map(Polynomial::to_real).collect())).collect()
    }
}

/// Apply 𝔸 symbolically to a V-valued polynomial.
pub fn apply_polynomial(op: &Operator, u: &[Polynomial]) -> Vec<Polynomial> {
    assert_eq!(u.len(), op.dim_v());
    (0..op.dim_w())
        .map(|r| {
            let mut acc = Polynomial::zero(op.n());
            for (alpha, a) in op.terms() {
                for (j, uj) in u.iter().enumerate() {
                    let c = a.get(r, j);
                    if !c.is_zero() {
                        acc = &acc + &uj.partial(alpha).scale(c);
                    }
                }
            }
            acc
        })
        .collect()
}

/// Matrix of 𝔸 : ℝ_d[x]^V → ℝ_{d−k}[x]^W on monomial coefficients.
///
/// Columns are (j, β) with j outer, rows (r, γ) with r outer, both over graded-lex monomials.
pub fn action_matrix(op: &Operator, d: u32) -> (RationalMatrix, Vec<MultiIndex>) {
    let n = op.n();
    let k = op.order();
    let cols_m = multi_indices_up_to(n, d);
    let rows_m = if d >= k { multi_indices_up_to(n, d - k) } else { Vec::new() };
    let row_of = |g: &MultiIndex| rows_m.binary_search(g).expect("row monomial in range");
    let nc = op.dim_v() * cols_m.len();
    let nr = op.dim_w() * rows_m.len();
    let mut mat = RationalMatrix::zeros(nr, nc);
    for j in 0..op.dim_v() {
        for (bi, beta) in cols_m.iter().enumerate() {
            let col = j * cols_m.len() + bi;
            for (alpha, a) in op.terms() {
                let Some(gamma) = beta.checked_sub(alpha) else { continue };
                let f = Rational::from_integer(MultiIndex::falling_factorial(beta, alpha).into());
                let gi = row_of(&gamma);
                for r in 0..op.dim_w() {
                    let c = a.get(r, j);
                    if c.is_zero() {
                        continue;
                    }
                    let row = r * rows_m.len() + gi;
                    let v = mat.get(row, col) + c * &f;
                    mat.set(row, col, v);
                }
            }
        }
    }
    (mat, cols_m)
}

pub fn poly_kernel(op: &Operator, d: u32) -> PolySpace {
    let (mat, monos) = action_matrix(op, d);
    let n = op.n();
    let big_n = op.dim_v();
    let vectors: Vec<Vec<Rational>> = if mat.rows() == 0 {
        (0..mat.cols()).map(|i| crate::classify::witness::unit_rational(mat.cols(), i)).collect()
    } else {
        mat.kernel()
    };
    let basis = vectors
        .iter()
        .map(|v| {
            (0..big_n)
                .map(|j| {
                    Polynomial::from_terms(
                        n,
                        monos.iter().enumerate().map(|(bi, b)| (b.clone(), v[j * monos.len() + bi].clone())),
                    )
                })
                .collect()
        })
        .collect();
    PolySpace { n, dim_v: big_n, degree: d, basis }
}

/// Kernel dimensions for d = 0..=d_max and the plateau estimate of d(𝔸).
#[derive(Clone, Debug, Serialize)]
pub struct KernelProfile {
    pub dims: Vec<usize>,
    pub stabilized: bool,
    /// First degree of the plateau.
    pub degree: Option<u32>,
    pub dimension: Option<usize>,
    /// The plateau rule is a heuristic: no a priori bound on d(𝔸) is used.
    pub heuristic: bool,
}

pub const PLATEAU_WINDOW: usize = 3;

pub fn kernel_dimension_profile(op: &Operator, d_max: u32) -> KernelProfile {
    kernel_dimension_profile_with(op, d_max, PLATEAU_WINDOW)
}

pub fn kernel_dimension_profile_with(op: &Operator, d_max: u32, window: usize) -> KernelProfile {
    let dims: Vec<usize> = (0..=d_max).map(|d| kernel_dimension(op, d)).collect();
    let start = plateau_start(&dims, window);
    KernelProfile {
        stabilized: start.is_some(),
        degree: start.map(|s| s as u32),
        dimension: start.map(|s| dims[s]),
        dims,
        heuristic: true,
    }
}

fn plateau_start(dims: &[usize], window: usize) -> Option<usize> {
    let window = window.max(1);
    (0..dims.len().saturating_sub(window - 1)).find(|&s| dims[s..s + window].iter().all(|&x| x == dims[s]))
}

/// dim ker on ℝ_d[x]^V, via rank only.
pub fn kernel_dimension(op: &Operator, d: u32) -> usize {
    let (mat, _) = action_matrix(op, d);
    if mat.rows() == 0 {
        return mat.cols();
    }
    mat.cols() - mat.rank()
}

/// Grow d until the profile plateaus (or `d_limit` is reached) and return the kernel there.
pub fn stabilized_kernel(op: &Operator, d_limit: u32) -> Option<(KernelProfile, PolySpace)> {
    let mut dims = Vec::new();
    for d in 0..=d_limit {
        dims.push(kernel_dimension(op, d));
        if let Some(s) = plateau_start(&dims, PLATEAU_WINDOW) {
            let profile = KernelProfile {
                stabilized: true,
                degree: Some(s as u32),
                dimension: Some(dims[s]),
                dims,
                heuristic: true,
            };
            return Some((profile, poly_kernel(op, s as u32)));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opcore::scalar::rat;

    fn gradient(n: usize) -> Operator {
        Operator::from_entries(n, 1, n, 1, (0..n).map(|i| (i, 0, MultiIndex::unit(n, i), rat(1)))).unwrap()
    }

    #[test]
    fn gradient_kernel_is_constants() {
        let k = poly_kernel(&gradient(2), 3);
        assert_eq!(k.dimension(), 1);
        assert_eq!(k.basis[0][0].degree(), Some(0));
    }

    #[test]
    fn plateau_rule() {
        assert_eq!(plateau_start(&[2, 3, 3, 3, 3], 3), Some(1));
        assert_eq!(plateau_start(&[2, 4, 6, 8], 3), None);
        assert_eq!(plateau_start(&[1, 1], 3), None);
    }

    #[test]
    fn below_order_everything_is_in_the_kernel() {
        // ∂₁² on ℝ² with d = 1: all affine functions
        let op = Operator::from_entries(2, 1, 1, 2, [(0, 0, MultiIndex::new(vec![2, 0]), rat(1))]).unwrap();
        assert_eq!(kernel_dimension(&op, 1), 3);
        assert_eq!(poly_kernel(&op, 1).dimension(), 3);
    }
}
