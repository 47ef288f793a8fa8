//! Named verification suites with layered configuration, JSON reports and golden data.

mod config;
mod golden;
mod report;
mod suites;

pub use config::{ConfigOverrides, DimRange, OutputFormat, SuiteConfig, DEFAULT_SEED, SEED_ENV};
pub use golden::{compare_golden, read_verified, regen_golden, MANIFEST};
pub use report::{run_suite, ConfigEcho, Report, Summary, REPORT_SCHEMA};
pub use suites::{list_suites, run_checks, sign_error_pair, trial_sampler, Suite, SuiteDescriptor};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("unknown suite {0:?}; run `verify list` for the names")]
    UnknownSuite(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("refusing to overwrite golden data without --regen-golden")]
    RegenRefused,
    #[error("golden data checksum mismatch: {0}")]
    Checksum(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error("construction failed: {0}")]
    Construction(String),
}
