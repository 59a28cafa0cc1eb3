//! Symbol-level analysis of homogeneous constant-coefficient differential operators:
//! exact representation, ellipticity and cancellation decisions, polynomial null
//! spaces and a small JSON operator format.

pub mod classify;
pub mod exactla;
pub mod nullspace;
pub mod opcore;
pub mod opdsl;
pub mod sample;
pub mod stencil;
