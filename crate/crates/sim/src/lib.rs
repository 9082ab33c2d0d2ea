//! Parallel runner, CSV and JSON outputs, and the `abroca-sim` command line
//! on top of [`abroca_core`].

pub mod cli;
pub mod config;
pub mod error;
pub mod report;
pub mod runner;

pub use config::{parse_config, ConfigDocument};
pub use error::{Result, SimError};
pub use report::{summarize_config, DistributionSummary};
pub use runner::{Runner, Workers};
