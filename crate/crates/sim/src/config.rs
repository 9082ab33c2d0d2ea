//! JSON config documents and run manifests.
//!
//! A document is either one flat config entry, or an object with a `configs`
//! array of entries. Manifests written by the CLI use the grid form with every
//! field spelled out, so `grid --config manifest.json` reproduces the run.
//!
//! ```json
//! { "n_total": 500, "auc_minor": 0.6 }
//! ```

use abroca_core::engine::DEFAULT_REPLICATIONS;
use abroca_core::{AbrocaMethod, Composition, ExperimentGrid, GridName, PopulationSpec, SimConfig};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};

/// Seed used when neither the command line nor the document sets one.
pub const DEFAULT_SEED: u64 = 42;

/// Version of the CSV and manifest layout.
pub const ARTIFACT_VERSION: &str = "1";

fn default_auc_major() -> f64 {
    0.8
}

fn half() -> f64 {
    0.5
}

fn default_id() -> String {
    "single".into()
}

fn default_reps() -> usize {
    DEFAULT_REPLICATIONS
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigEntry {
    #[serde(default = "default_id")]
    pub config_id: String,
    pub n_total: usize,
    #[serde(default = "default_auc_major")]
    pub auc_major: f64,
    pub auc_minor: f64,
    #[serde(default = "half")]
    pub minority_ratio: f64,
    #[serde(default = "half")]
    pub positive_ratio: f64,
    #[serde(default)]
    pub composition: Composition,
    #[serde(default = "default_reps")]
    pub replications: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub master_seed: Option<u64>,
    #[serde(default)]
    pub method: AbrocaMethod,
}

impl ConfigEntry {
    fn into_config(self, fallback_seed: u64) -> SimConfig {
        SimConfig {
            spec: PopulationSpec {
                auc_major: self.auc_major,
                auc_minor: self.auc_minor,
                minority_ratio: self.minority_ratio,
                positive_ratio: self.positive_ratio,
                n_total: self.n_total,
                composition: self.composition,
            },
            replications: self.replications,
            master_seed: self.master_seed.unwrap_or(fallback_seed),
            method: self.method,
            config_id: self.config_id,
        }
    }
}

impl From<&SimConfig> for ConfigEntry {
    fn from(c: &SimConfig) -> Self {
        Self {
            config_id: c.config_id.clone(),
            n_total: c.spec.n_total,
            auc_major: c.spec.auc_major,
            auc_minor: c.spec.auc_minor,
            minority_ratio: c.spec.minority_ratio,
            positive_ratio: c.spec.positive_ratio,
            composition: c.spec.composition,
            replications: c.replications,
            master_seed: Some(c.master_seed),
            method: c.method,
        }
    }
}

/// The grid form of a document; also the manifest layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub artifact_version: Option<String>,
    #[serde(default = "custom")]
    pub name: GridName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub master_seed: Option<u64>,
    pub configs: Vec<ConfigEntry>,
}

fn custom() -> GridName {
    GridName::Custom
}

impl GridDocument {
    /// Manifest for `grid`. Configs carry their own seeds; the top-level seed
    /// is recorded when they all agree.
    pub fn manifest(grid: &ExperimentGrid) -> Self {
        let seed = grid.configs.first().map(|c| c.master_seed);
        let shared = seed.filter(|s| grid.configs.iter().all(|c| c.master_seed == *s));
        Self {
            artifact_version: Some(ARTIFACT_VERSION.into()),
            name: grid.name,
            master_seed: shared,
            configs: grid.configs.iter().map(ConfigEntry::from).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConfigDocument {
    Single(SimConfig),
    Grid(ExperimentGrid),
}

impl ConfigDocument {
    pub fn configs(&self) -> &[SimConfig] {
        match self {
            ConfigDocument::Single(c) => std::slice::from_ref(c),
            ConfigDocument::Grid(g) => &g.configs,
        }
    }

    /// The document as a grid; a single config becomes a one-entry custom grid.
    pub fn into_grid(self) -> ExperimentGrid {
        match self {
            ConfigDocument::Single(c) => ExperimentGrid {
                name: GridName::Custom,
                configs: vec![c],
            },
            ConfigDocument::Grid(g) => g,
        }
    }
}

fn invalid(config_id: &str, e: impl std::fmt::Display) -> SimError {
    SimError::Config(format!("config `{config_id}`: {e}"))
}

/// Parses and validates a config document. Seeds default to the document's
/// top-level `master_seed`, then to [`DEFAULT_SEED`].
pub fn parse_config(text: &str) -> Result<ConfigDocument> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| SimError::Config(e.to_string()))?;
    let is_grid = value.as_object().is_some_and(|o| o.contains_key("configs"));
    if is_grid {
        let doc: GridDocument =
            serde_json::from_value(value).map_err(|e| SimError::Config(e.to_string()))?;
        if let Some(v) = &doc.artifact_version {
            if v != ARTIFACT_VERSION {
                return Err(SimError::Config(format!(
                    "artifact_version `{v}` is not supported (expected `{ARTIFACT_VERSION}`)"
                )));
            }
        }
        let seed = doc.master_seed.unwrap_or(DEFAULT_SEED);
        let configs: Vec<SimConfig> = doc
            .configs
            .into_iter()
            .map(|e| e.into_config(seed))
            .collect();
        for c in &configs {
            c.validate().map_err(|e| invalid(&c.config_id, e))?;
        }
        let grid =
            ExperimentGrid::new(doc.name, configs).map_err(|e| SimError::Config(e.to_string()))?;
        Ok(ConfigDocument::Grid(grid))
    } else {
        let entry: ConfigEntry =
            serde_json::from_value(value).map_err(|e| SimError::Config(e.to_string()))?;
        let config = entry.into_config(DEFAULT_SEED);
        config
            .validate()
            .map_err(|e| invalid(&config.config_id, e))?;
        Ok(ConfigDocument::Single(config))
    }
}
