//! Desk-scale numerical experiments: L^p norms on grids, blow-up of null-space
//! elements, Poincaré ratios, translation estimates, Fourier multipliers on the torus
//! and Riesz potentials.

pub mod bergman;
pub mod field;
pub mod multiplier;
pub mod nikolskii;
pub mod poincare;
pub mod riesz;
pub mod testfields;

use thiserror::Error;

pub use field::{apply_operator, apply_operator_grid, lp_norm, Field, GridField};

#[derive(Debug, Error)]
pub enum LabError {
    #[error("operator is C-elliptic; the experiment needs an infinite null family")]
    CElliptic,
    #[error("operator must be C-elliptic: {0}")]
    NotCElliptic(String),
    #[error("operator must be elliptic: {0}")]
    NotElliptic(String),
    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),
    #[error("exponent out of range: {0}")]
    Exponent(String),
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    #[error("derivative {0:?} unavailable for this field")]
    DerivativeUnavailable(Vec<u32>),
    #[error("normal matrix is singular at lattice frequency {0:?}")]
    SingularMultiplier(Vec<i64>),
    #[error(transparent)]
    Family(#[from] aop_core::classify::FamilyError),
    #[error(transparent)]
    Projection(#[from] aop_core::nullspace::ProjectionError),
    #[error(transparent)]
    Taylor(#[from] aop_core::nullspace::TaylorError),
}
