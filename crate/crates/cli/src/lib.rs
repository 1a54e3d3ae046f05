//! Configuration, orchestration, persistence and plot-data emission for the
//! verification suites and estimators.

pub mod config;
pub mod outputs;
pub mod suites;

pub use config::{DomainConfig, ProcessConfig, RunConfig, SchemeConfig, SCHEMA_VERSION};
pub use outputs::{emit_plotdata, write_json_atomic, write_samples_csv};
pub use suites::{run_config, RunOutcome, SUITE_NAMES};
