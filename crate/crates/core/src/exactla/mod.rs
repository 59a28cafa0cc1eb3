//! Exact linear algebra, univariate root tools and binary forms.

pub mod forms;
pub mod matrix;
pub mod subspace;
pub mod univariate;

pub use forms::{gcd_binary_forms, resultant, BinaryForm, FormError};
pub use matrix::{kernel, rref, Matrix, RationalMatrix, Rref};
pub use subspace::{subspace_intersect, SubspaceError};
pub use univariate::UniPoly;
