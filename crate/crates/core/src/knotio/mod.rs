//! Braid input, result files and the command line.

mod braid;
mod cache;
mod cli;

pub use braid::{parse_braid, BraidWord};
pub use cache::{cache_key, BasisCache, BasisEntry, ENGINE_VERSION};
pub use cli::{report, run_command, Calibration, Cell, Report};
