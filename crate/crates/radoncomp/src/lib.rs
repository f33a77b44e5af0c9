//! Command-line front end for `radoncomp-core`: a small expression language
//! for input functions, INI scenario files, and reproducible JSON/CSV
//! reports.
//!
//! Exit codes: 0 verified, 1 input error, 2 hypothesis failed, 3 domination
//! failed, 4 construction failed, 5 inconsistent result.

pub mod cli;
pub mod config;
pub mod expr;
pub mod lower;
pub mod report;
pub mod run;

pub use config::{Kind, ScenarioConfig};
pub use expr::{parse_expr, Expr, ExprError};
pub use run::{execute, write_outputs, Outcome, RunError, Status};
