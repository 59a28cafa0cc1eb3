use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use super::certainty::Certainty;
use super::ellipticity::is_elliptic;
use crate::exactla::matrix::RationalMatrix;
use crate::opcore::multiindex::MultiIndex;
use crate::opcore::Operator;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BbError {
    #[error("condition needs a first-order operator (k = {0})")]
    Order(u32),
    #[error("condition needs V = R^n (N = {dim_v}, n = {n})")]
    Shape { dim_v: usize, n: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct BbOutcome {
    pub certainty: Certainty,
    /// L^(s) with (𝔸u)_s = ⟨L^(s), ∇u⟩, (∇u)_{ij} = ∂_j u_i.
    pub matrices: Vec<RationalMatrix>,
    /// First s (0-based) with det L^(s) ≠ 0.
    pub failing_index: Option<usize>,
}

/// (L^(s))_{ij} = (A_{e_j})_{s,i}.
pub fn bb_matrices(op: &Operator) -> Result<Vec<RationalMatrix>, BbError> {
    if op.order() != 1 {
        return Err(BbError::Order(op.order()));
    }
    let n = op.n();
    if op.dim_v() != n {
        return Err(BbError::Shape { dim_v: op.dim_v(), n });
    }
    let zero = RationalMatrix::zeros(op.dim_w(), n);
    let a: Vec<&RationalMatrix> =
        (0..n).map(|j| op.coefficient(&MultiIndex::unit(n, j)).unwrap_or(&zero)).collect();
    Ok((0..op.dim_w())
        .map(|s| RationalMatrix::from_fn(n, n, |i, j| a[j].get(s, i).clone()))
        .collect())
}

pub fn check_bb(op: &Operator) -> Result<BbOutcome, BbError> {
    let matrices = bb_matrices(op)?;
    let failing_index = matrices.iter().position(|l| !l.determinant().is_zero());
    let certainty = match failing_index {
        Some(_) => Certainty::ExactFalse,
        None => is_elliptic(op).certainty,
    };
    Ok(BbOutcome { certainty, matrices, failing_index })
}
