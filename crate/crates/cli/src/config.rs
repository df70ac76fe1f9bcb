//! Declarative scenario configuration: JSON with a versioned schema.

use gaugecode::gauging::{GaugeStructure, SymmetricSystem};
use gaugecode::graph::{LabeledGraph, PlanarEmbedding};
use gaugecode::group::FiniteGroup;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

pub const CONFIG_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("failed to read config: {0}")]
    Io(#[from] std::io::Error),
    #[error("failed to parse config: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("unsupported schema version {0} (expected {CONFIG_SCHEMA_VERSION})")]
    SchemaVersion(u32),
    #[error("scenario {0}: {1}")]
    Scenario(String, String),
    #[error("dense size estimate {0} exceeds the cap {1}")]
    CapExceeded(usize, usize),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Config {
    pub schema_version: u32,
    #[serde(default)]
    pub scenarios: Vec<ScenarioConfig>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub id: String,
    /// Either the name of a catalog scenario...
    #[serde(default)]
    pub builtin: Option<String>,
    /// ...or an explicit (group, graph) pair.
    #[serde(default)]
    pub group: Option<String>,
    #[serde(default)]
    pub graph: Option<GraphLiteral>,
    /// Vertices carrying the default two-dimensional representation.
    #[serde(default)]
    pub charged_vertices: Vec<u32>,
    /// Suites to run; empty selects the scenario's default suites.
    #[serde(default)]
    pub suites: Vec<String>,
}

/// Graph literal: vertex list with bit labels, edge list as ordered pairs,
/// optional embedding block.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphLiteral {
    pub vertices: Vec<(u32, u8)>,
    pub edges: Vec<(u32, u32)>,
    #[serde(default)]
    pub embedding: Option<EmbeddingLiteral>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EmbeddingLiteral {
    pub cyclic_order: BTreeMap<u32, Vec<(u32, u32)>>,
    pub boundary: BTreeSet<u32>,
}

impl GraphLiteral {
    pub fn build(&self) -> Result<LabeledGraph, gaugecode::graph::GraphError> {
        let embedding = self.embedding.as_ref().map(|e| PlanarEmbedding {
            cyclic_order: e.cyclic_order.clone(),
            boundary: e.boundary.clone(),
        });
        LabeledGraph::new(&self.vertices, &self.edges, embedding)
    }
}

pub fn load(path: &std::path::Path) -> Result<Config, ConfigError> {
    let text = std::fs::read_to_string(path)?;
    let config: Config = serde_json::from_str(&text)?;
    if config.schema_version != CONFIG_SCHEMA_VERSION {
        return Err(ConfigError::SchemaVersion(config.schema_version));
    }
    Ok(config)
}

/// Builds a gauge structure from an explicit scenario, with the dense-size
/// pre-estimate enforced before any allocation.
pub fn build_custom(sc: &ScenarioConfig) -> Result<GaugeStructure, ConfigError> {
    let group_spec = sc
        .group
        .as_ref()
        .ok_or_else(|| ConfigError::Scenario(sc.id.clone(), "missing group".into()))?;
    let group = FiniteGroup::parse(group_spec)
        .map_err(|e| ConfigError::Scenario(sc.id.clone(), e.to_string()))?;
    let literal = sc
        .graph
        .as_ref()
        .ok_or_else(|| ConfigError::Scenario(sc.id.clone(), "missing graph".into()))?;
    let graph = literal
        .build()
        .map_err(|e| ConfigError::Scenario(sc.id.clone(), e.to_string()))?;
    // Pre-estimate the dense dimension before building operators.
    let set = gaugecode::group::irreps(&group)
        .map_err(|e| ConfigError::Scenario(sc.id.clone(), e.to_string()))?;
    let rep = gaugecode::holo::dense_codes::qubit_rep(&group, &set);
    let mut estimate: u128 = 1;
    for v in graph.vertices() {
        let d = if sc.charged_vertices.contains(v) { rep.dim } else { 1 };
        estimate = estimate.saturating_mul(d as u128);
    }
    for _ in graph.edges() {
        estimate = estimate.saturating_mul(group.order() as u128);
    }
    if estimate > gaugecode::DENSE_CAP as u128 {
        return Err(ConfigError::CapExceeded(
            estimate.min(usize::MAX as u128) as usize,
            gaugecode::DENSE_CAP,
        ));
    }
    let reps: BTreeMap<u32, gaugecode::group::Irrep> = sc
        .charged_vertices
        .iter()
        .map(|&v| (v, rep.clone()))
        .collect();
    let sys = SymmetricSystem::new(graph, group, reps)
        .map_err(|e| ConfigError::Scenario(sc.id.clone(), e.to_string()))?;
    GaugeStructure::new(sys).map_err(|e| ConfigError::Scenario(sc.id.clone(), e.to_string()))
}
