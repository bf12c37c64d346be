//! JSON run-config documents for single chains.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::generators::planted_instance;
use crate::graph::Graph;
use crate::saa::{SaaConfig, SaaSettings};
use crate::samplers::{Algorithm, SamplerConfig, DEFAULT_ALPHA};

/// Where a run's graph comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum InstanceSource {
    /// Edge-list file; relative paths resolve against the config's directory.
    EdgeList(PathBuf),
    Generate(GeneratorParams),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorParams {
    pub n: usize,
    pub p: f64,
    /// Planted clique size; 0 plants nothing.
    #[serde(default)]
    pub k: usize,
    #[serde(default)]
    pub seed: u64,
}

/// Everything needed to reproduce one chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfigDocument {
    pub algorithm: Algorithm,
    pub k: usize,
    #[serde(default = "default_iterations")]
    pub max_iterations: u64,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub target_density: Option<f64>,
    #[serde(default)]
    pub stop_at_target: bool,
    #[serde(default)]
    pub saa: SaaSettings,
    pub instance: InstanceSource,
}

fn default_iterations() -> u64 {
    10_000
}

fn default_alpha() -> f64 {
    DEFAULT_ALPHA
}

impl RunConfigDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<(Self, PathBuf)> {
        let path = path.as_ref();
        let doc = Self::from_json(&std::fs::read_to_string(path)?)?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok((doc, base))
    }

    pub fn graph(&self, base_dir: &Path) -> Result<Graph> {
        match &self.instance {
            InstanceSource::EdgeList(p) => Graph::load_edge_list(base_dir.join(p)),
            InstanceSource::Generate(g) => Ok(planted_instance(g.n, g.p, g.k, g.seed)?.graph),
        }
    }

    pub fn sampler_config(&self) -> SamplerConfig {
        SamplerConfig {
            alpha: self.alpha,
            target_density: self.target_density,
            stop_at_target: self.stop_at_target,
            ..SamplerConfig::new(self.algorithm, self.k, self.max_iterations, self.seed)
        }
    }

    pub fn saa_config(&self) -> Result<SaaConfig> {
        self.saa.build()
    }
}
