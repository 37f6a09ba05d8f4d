//! Batch front-end for `mukai-core`: TOML instance specs in, JSON reports out.

pub mod checks;
pub mod encode;
pub mod report;
pub mod spec;

pub use checks::{run_checks, CheckResult, Status};
pub use report::{run_batch, Report};
pub use spec::{parse_spec, Check, InstanceSpec};
