//! Command surface of the `poorman` binary: generator specs, CSV commands
//! and reproduction experiments.

pub mod commands;
pub mod experiments;
pub mod spec;

pub use commands::{load_game, solve_with, Engine};
pub use experiments::{run_experiment, Experiment, ExperimentOptions, ExperimentReport};
pub use spec::parse_gen;
