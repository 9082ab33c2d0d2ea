//! Monte Carlo machinery for the sampling distribution of ABROCA, the absolute
//! area between two groups' ROC curves.
//!
//! One replication draws a two-group population with known per-group AUCs,
//! splits it 80/20, fits a univariate logistic regression on the training part
//! and measures ABROCA between the groups on the held-out part. The [`engine`]
//! repeats that under independent random streams and sweeps experiment grids.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, parallel
//! execution and the command line live in the `abroca-sim` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod classifier;
pub mod datagen;
pub mod engine;
mod error;
pub mod numerics;
pub mod roc;

pub use classifier::LogisticModel;
pub use datagen::{Composition, Dataset, Group, PopulationSpec, SplitDataset};
pub use engine::{ExperimentGrid, GridName, ReplicationResult, SimConfig};
pub use error::{Error, Result};
pub use numerics::{RngStream, SummaryStats};
pub use roc::{AbrocaMethod, AbrocaResult, RocCurve};
