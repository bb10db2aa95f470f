//! Verification harness for the `hardyspace` toolkit: a registry of named
//! checks, JSON configuration, CSV / JSON-lines reports and small one-shot
//! computations behind the `hardyspace` binary.

pub mod checks;
pub mod config;
pub mod error;
pub mod report;
pub mod tools;

pub use checks::{coverage_gaps, run_check, run_experiment, CHECKS, CLAIMS};
pub use config::{ExperimentConfig, DEFAULT_SEED};
pub use error::{HarnessError, Result};
pub use report::{any_failed, emit_report, write_report, CheckReport, Format, Status};
