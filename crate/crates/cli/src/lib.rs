//! The `aop` command-line tool: classification reports, the comparison table,
//! experiments and decomposition dumps.

pub mod cli;
pub mod report;
pub mod table;

pub use cli::{run, Outcome, EXIT_FAILURE, EXIT_INPUT, EXIT_NOT_EXACT, EXIT_OK};
