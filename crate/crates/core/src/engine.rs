//! One replication end to end, replicated over independent streams, swept over grids.
//!
//! Replication `i` of a config draws from the stream
//! `(master_seed, stream_id(config_id, i, attempt))`, so its result depends
//! only on those values and never on execution order or worker count.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::classifier;
use crate::datagen::{self, Group, PopulationSpec};
use crate::error::{Error, Result};
use crate::numerics::RngStream;
use crate::roc::{self, AbrocaMethod};

/// Replications per config unless overridden.
pub const DEFAULT_REPLICATIONS: usize = 1000;
/// Degenerate draws tolerated for one replication before giving up.
pub const MAX_RESAMPLES: u32 = 1000;
/// Configs above this total size may use a reduced replication count.
pub const LARGE_N_THRESHOLD: usize = 20_000;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SimConfig {
    pub config_id: String,
    pub spec: PopulationSpec,
    pub replications: usize,
    pub master_seed: u64,
    #[cfg_attr(feature = "serde", serde(default))]
    pub method: AbrocaMethod,
}

impl SimConfig {
    pub fn new(config_id: impl Into<String>, spec: PopulationSpec, master_seed: u64) -> Self {
        Self {
            config_id: config_id.into(),
            spec,
            replications: DEFAULT_REPLICATIONS,
            master_seed,
            method: AbrocaMethod::Exact,
        }
    }

    pub fn with_replications(mut self, replications: usize) -> Self {
        self.replications = replications;
        self
    }

    pub fn with_method(mut self, method: AbrocaMethod) -> Self {
        self.method = method;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.config_id.is_empty() {
            return Err(Error::domain("config", "config_id must not be empty"));
        }
        if self.replications == 0 {
            return Err(Error::domain(
                "config",
                format!("`{}`: replications must be at least 1", self.config_id),
            ));
        }
        self.spec.validate()
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ReplicationResult {
    pub config_id: String,
    pub replication_index: u64,
    pub abroca: f64,
    pub auc_group1: f64,
    pub auc_group2: f64,
    /// Whether the logistic fit met its tolerance.
    pub converged: bool,
    /// Degenerate draws rejected before this one succeeded.
    pub resample_count: u32,
}

/// 64-bit FNV-1a.
fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Stream id for one attempt of one replication.
pub fn stream_id(config_id: &str, index: u64, attempt: u32) -> u64 {
    let h = splitmix64(fnv1a(config_id.as_bytes()) ^ splitmix64(index));
    splitmix64(h ^ u64::from(attempt).rotate_left(32))
}

fn is_degenerate(e: &Error) -> bool {
    matches!(
        e,
        Error::DegenerateData(_) | Error::DegenerateGroup(_) | Error::DegenerateSpec(_)
    )
}

fn attempt(config: &SimConfig, rng: &mut RngStream) -> Result<(roc::AbrocaResult, bool)> {
    let data = datagen::generate(&config.spec, rng)?;
    let split = datagen::split(&data, rng)?;
    let model = classifier::fit(&split.train)?;
    let scores = model.score(&split.test.x);

    let mut curves = Vec::with_capacity(2);
    for group in [Group::Majority, Group::Minority] {
        let (s, y): (Vec<f64>, Vec<bool>) = split
            .test
            .group
            .iter()
            .zip(scores.iter().zip(&split.test.y))
            .filter(|(g, _)| **g == group)
            .map(|(_, (s, y))| (*s, *y))
            .unzip();
        curves.push(roc::roc_curve(&s, &y)?);
    }
    Ok((
        roc::abroca_with(&curves[0], &curves[1], config.method),
        model.converged,
    ))
}

/// Generate, split, fit, score and measure ABROCA on the test split.
///
/// A draw whose training labels or per-group test labels contain a single
/// class is rejected and redrawn from the next attempt's stream.
pub fn run_replication(config: &SimConfig, index: u64) -> Result<ReplicationResult> {
    config.validate()?;
    for resample_count in 0..=MAX_RESAMPLES {
        let mut rng = RngStream::new(
            config.master_seed,
            stream_id(&config.config_id, index, resample_count),
        );
        match attempt(config, &mut rng) {
            Ok((r, converged)) => {
                return Ok(ReplicationResult {
                    config_id: config.config_id.clone(),
                    replication_index: index,
                    abroca: r.abroca,
                    auc_group1: r.auc_group1,
                    auc_group2: r.auc_group2,
                    converged,
                    resample_count,
                })
            }
            Err(e) if is_degenerate(&e) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::PathologicalConfig {
        config_id: config.config_id.clone(),
        replication_index: index,
        limit: MAX_RESAMPLES,
    })
}

/// All replications of a config, serially, ordered by index.
pub fn run_config(config: &SimConfig) -> Result<Vec<ReplicationResult>> {
    config.validate()?;
    (0..config.replications as u64)
        .map(|i| run_replication(config, i))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum GridName {
    Rq1,
    Rq2,
    Rq3,
    Custom,
}

impl fmt::Display for GridName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GridName::Rq1 => "rq1",
            GridName::Rq2 => "rq2",
            GridName::Rq3 => "rq3",
            GridName::Custom => "custom",
        })
    }
}

impl FromStr for GridName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rq1" => Ok(GridName::Rq1),
            "rq2" => Ok(GridName::Rq2),
            "rq3" => Ok(GridName::Rq3),
            "custom" => Ok(GridName::Custom),
            _ => Err(Error::domain("grid name", format!("unknown grid `{s}`"))),
        }
    }
}

/// Replication counts for a grid, optionally reduced above [`LARGE_N_THRESHOLD`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Replications {
    pub default: usize,
    pub large_n: Option<usize>,
}

impl Default for Replications {
    fn default() -> Self {
        Self {
            default: DEFAULT_REPLICATIONS,
            large_n: None,
        }
    }
}

impl Replications {
    pub fn uniform(n: usize) -> Self {
        Self {
            default: n,
            large_n: None,
        }
    }

    pub fn for_size(&self, n_total: usize) -> usize {
        match self.large_n {
            Some(r) if n_total > LARGE_N_THRESHOLD => r,
            _ => self.default,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExperimentGrid {
    pub name: GridName,
    pub configs: Vec<SimConfig>,
}

/// Total sample sizes of the size sweep: 500 to 9,500 by 500, then 10,000 to
/// 100,000 by 5,000.
pub fn sweep_sizes() -> Vec<usize> {
    (500..=9_500)
        .step_by(500)
        .chain((10_000..=100_000).step_by(5_000))
        .collect()
}

pub const RQ2_MINORITY_AUCS: [f64; 5] = [0.79, 0.75, 0.7, 0.6, 0.5];
pub const RQ3_SHARES: [f64; 2] = [0.9, 0.5];
pub const RQ3_MINORITY_AUCS: [f64; 2] = [0.8, 0.6];

impl ExperimentGrid {
    /// Validates every config and orders them by `config_id`.
    pub fn new(name: GridName, mut configs: Vec<SimConfig>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for c in &configs {
            c.validate()?;
            if !seen.insert(c.config_id.as_str()) {
                return Err(Error::domain(
                    "grid",
                    format!("duplicate config_id `{}`", c.config_id),
                ));
            }
        }
        configs.sort_by(|a, b| a.config_id.cmp(&b.config_id));
        Ok(Self { name, configs })
    }

    /// Equal AUCs (0.8/0.8), balanced groups and classes, across [`sweep_sizes`].
    pub fn rq1(master_seed: u64, reps: Replications) -> Self {
        let configs = sweep_sizes()
            .into_iter()
            .map(|n| {
                SimConfig::new(
                    format!("rq1-n{n:06}"),
                    PopulationSpec::balanced(n, 0.8),
                    master_seed,
                )
                .with_replications(reps.for_size(n))
            })
            .collect();
        Self::new(GridName::Rq1, configs).expect("rq1 grid is valid")
    }

    /// The size sweep crossed with each lower minority AUC.
    pub fn rq2(master_seed: u64, reps: Replications) -> Self {
        let mut configs = Vec::new();
        for auc in RQ2_MINORITY_AUCS {
            for n in sweep_sizes() {
                configs.push(
                    SimConfig::new(
                        format!("rq2-a{auc:.2}-n{n:06}"),
                        PopulationSpec::balanced(n, auc),
                        master_seed,
                    )
                    .with_replications(reps.for_size(n)),
                );
            }
        }
        Self::new(GridName::Rq2, configs).expect("rq2 grid is valid")
    }

    /// Majority share × positive share ∈ {0.9, 0.5}², minority AUC ∈ {0.8, 0.6},
    /// at a fixed total size.
    pub fn rq3(master_seed: u64, n_total: usize, reps: Replications) -> Self {
        let mut configs = Vec::new();
        for majority in RQ3_SHARES {
            for positive in RQ3_SHARES {
                for auc in RQ3_MINORITY_AUCS {
                    let spec = PopulationSpec {
                        minority_ratio: 1.0 - majority,
                        positive_ratio: positive,
                        ..PopulationSpec::balanced(n_total, auc)
                    };
                    configs.push(
                        SimConfig::new(
                            format!(
                                "rq3-maj{majority:.1}-pos{positive:.1}-a{auc:.2}-n{n_total:06}"
                            ),
                            spec,
                            master_seed,
                        )
                        .with_replications(reps.for_size(n_total)),
                    );
                }
            }
        }
        Self::new(GridName::Rq3, configs).expect("rq3 grid is valid")
    }

    pub fn len(&self) -> usize {
        self.configs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.configs.is_empty()
    }
}

/// Runs each config in turn. A failing config yields its error and the
/// remaining configs still run.
pub fn run_grid(
    grid: &ExperimentGrid,
) -> impl Iterator<Item = (&SimConfig, Result<Vec<ReplicationResult>>)> + '_ {
    grid.configs.iter().map(|c| (c, run_config(c)))
}
