//! File formats, configuration and the sweep driver around `bufferless-core`.

pub mod config;
pub mod edgelist;
pub mod error;
pub mod sweep;
pub mod table_dump;
pub mod trace;

pub use config::{ExperimentSpec, Param, Scenario};
pub use error::HarnessError;
pub use sweep::{run_sweep, write_sweep_csv, SweepRow};
