//! Experiment configuration, parallel execution, statistics and result files.

pub mod acceptance;
pub mod config;
pub mod experiment;
pub mod report;
pub mod scaling;
pub mod stats;

pub use config::{Algorithm, ExperimentConfig, MuRule};
pub use experiment::{run_experiment, run_trial};
pub use report::{read_report, write_report, ExperimentReport, ReportFormat, ReportRow};
pub use scaling::{runtime_scaling_check, ScalingEntry, ScalingTable};
pub use stats::{mean_and_variance, wilson_interval};
