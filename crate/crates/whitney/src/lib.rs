//! Whitney decompositions of the unit disc and of its exterior in a bounding box, reflection
//! of small exterior cubes to interior ones, a smooth partition of unity on the exterior
//! collar and the resulting extension operator.

pub mod cube;
pub mod decompose;
pub mod extend;
pub mod jet;
pub mod partition;
pub mod reflect;

use thiserror::Error;

pub use cube::{Contact, DyadicCube};
pub use decompose::{decompose, Domain, Role, WhitneyConfig, WhitneyDecomposition};
pub use extend::{Extension, ExtensionConfig};
pub use partition::PartitionOfUnity;
pub use reflect::{chain, reflect, ReflectionMap};

#[derive(Debug, Error)]
pub enum WhitneyError {
    #[error("level cap {cap} cannot resolve cubes of side εδ/(16n) = {side}; need cap ≥ {needed}")]
    CapTooSmall { cap: i32, side: f64, needed: i32 },
    #[error("level cap {0} exceeds the supported maximum 12")]
    CapTooLarge(i32),
    #[error("bounding box half-width {half_width} is below three times the disc radius {radius}")]
    BoxTooSmall { half_width: f64, radius: f64 },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("no interior cube of admissible size for exterior cube {0:?}")]
    NoReflection(DyadicCube),
    #[error("cubes {0} and {1} are not connected in the interior decomposition")]
    Disconnected(usize, usize),
    #[error("cubes {0} and {1} are not adjacent")]
    NotAdjacent(usize, usize),
    #[error(transparent)]
    Projection(#[from] aop_core::nullspace::ProjectionError),
    #[error(transparent)]
    Taylor(#[from] aop_core::nullspace::TaylorError),
}
