//! Experiment harness around the robust submodular solvers: flat-file
//! configuration, (algorithm x k x tau) sweeps, CSV output and the
//! guarantee report.

pub mod config;
pub mod experiment;
pub mod report;

pub use config::{
    AlgorithmKind, DatasetConfig, ExperimentConfig, ObjectiveKind, OsuBucketSize, Overrides,
};
pub use experiment::{
    build_instance, emit_csv, run_experiment, run_on_instance, CellStatus, ExperimentRecord,
    Instance,
};
pub use report::bound_report;
