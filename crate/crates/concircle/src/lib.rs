//! Manifold files, deterministic sampling, verification suites and reports
//! on top of `concircle-core`.

// `!(x > 0.0)` guards are deliberate: NaN must fail them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod file;
pub mod fixtures;
pub mod report;
pub mod run;
pub mod sampling;
pub mod suites;

pub use error::{Error, Result};
pub use file::ManifoldFile;
pub use report::RunReport;
pub use run::{prepare, run, run_context, RunOptions};
pub use suites::{Command, Context, Status, Suite};
