//! Reports, statistics, configuration and the test-suite runner.

pub mod config;
pub mod report;
pub mod stats;
pub mod suite;

pub use config::{Group, RunConfig, OUT_DIR_ENV};
pub use report::{ComparisonReport, Value, Verdict};
pub use suite::{run_group, run_suite, SuiteOutcome};
