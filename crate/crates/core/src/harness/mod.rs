//! Configuration, gate runs, τ sweeps and the verification suites behind
//! the command-line front end.

pub mod config;
pub mod run;
pub mod sweep;
pub mod verify;

pub use config::{ConfigError, ResolvedConfig, RunConfig, ScheduleKind, SweepMode};
pub use run::{run_gate, RunReport};
pub use sweep::{run_dd_sweep, run_interaction_scaling, sweep_csv, SweepError, SweepRow};
pub use verify::{run_verify, VerifyContext, VerifySummary};
