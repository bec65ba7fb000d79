//! Experiment harness: sweeps, statistics, configuration and output.

pub mod config;
pub mod emit;
pub mod rng;
pub mod selftest;
pub mod stats;
pub mod sweep;

pub use config::{CodeSelector, ConfigOverrides, OutputFormat, SweepConfig};
pub use emit::{emit, load, read_points, write_points, CSV_HEADER};
pub use stats::wilson_interval;
pub use sweep::{
    analytic_points, measure_throughput, run_sweep, run_sweep_with_progress, SweepPoint, Tally,
};
