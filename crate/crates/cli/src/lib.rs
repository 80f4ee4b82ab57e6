//! Library side of the experiment runner: config schema, resolution of
//! groups/representations/targets, and the three subcommand
//! implementations. The binary in `main.rs` is a thin argument-parsing
//! wrapper over [`runner`].

pub mod config;
pub mod runner;
pub mod setup;

pub use config::{ActionSpec, ExperimentConfig, GroupSpec};
pub use runner::{
    compute_uat_rows, run_laws, run_lift_demo, run_uat, sub_seed, RunError, UatRow,
    LAW_TOLERANCE, TEST_STREAM, TRAIN_STREAM, UAT_CSV_HEADER,
};
pub use setup::{resolve_action, resolve_group, resolve_rep, resolve_setup, resolve_target, Setup};
