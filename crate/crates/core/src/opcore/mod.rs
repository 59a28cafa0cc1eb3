//! Operators, multi-indices, polynomials and symbol evaluation.

pub mod multiindex;
pub mod operator;
pub mod poly;
pub mod scalar;
pub mod symbol;

pub use multiindex::MultiIndex;
pub use operator::{pairing, Operator, OperatorError};
pub use poly::{Polynomial, RealPoly};
pub use scalar::{Field, GaussianRational, Rational};
pub use symbol::{SymbolError, SymbolMatrix};
