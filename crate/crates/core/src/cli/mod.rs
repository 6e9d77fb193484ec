//! Command-line front end: config parsing, experiment drivers and the clap
//! command tree used by the `pite-lab` binary.

mod commands;
mod config;
mod experiment;
mod stats;

pub use commands::{
    execute, Cli, Command, GlobalArgs, CIRCUIT_BLOCK_TOLERANCE, CIRCUIT_WEIGHT_TOLERANCE,
};
pub use config::{
    load_config, parse_config, HamiltonianSpec, InitialState, Quantity, RunConfig, ScheduleSpec,
    Spacing, SweepParam, SweepSpec, DEFAULT_GAMMA,
};
pub use experiment::{
    build_hamiltonian, build_system, gamma_params, run_point, run_sweep, shift_policy,
    sweep_points, window_stats, window_stats_many, write_sweep_csv, write_sweep_json, Point,
    SweepRow, System, WindowStats, SWEEP_HEADER,
};
pub use stats::{linear_fit, mean, pearson, sample_std, spearman, windowed_argmin};
