//! Seeded benchmark instances: Erdős–Rényi graphs with an optional planted clique.
//!
//! A single seed drives each instance. The graph stream is seeded with `seed`
//! itself and the clique-placement stream with `seed ^ CLIQUE_SEED_MASK`;
//! both are [`ChainRng`](crate::rng::ChainRng) streams.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{invalid_arg, Result};
use crate::graph::Graph;
use crate::rng::{self, CLIQUE_SEED_MASK, RNG_NAME};

/// A graph together with the clique that was planted in it.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantedInstance {
    pub graph: Graph,
    /// Planted node ids, ascending. Empty when nothing was planted.
    pub planted: Vec<usize>,
    /// Edge probability of the background graph, when it was generated here.
    pub p: Option<f64>,
    pub seed: u64,
}

/// Sidecar document written next to an edge-list file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceMetadata {
    pub n: usize,
    pub m: usize,
    pub p: f64,
    pub k: usize,
    pub seed: u64,
    pub planted: Vec<usize>,
    pub rng: String,
    pub graph_seed: u64,
    pub clique_seed: u64,
}

/// `G(n, p)`: each of the `n(n-1)/2` pairs, visited in lexicographic order,
/// is kept when a uniform `[0, 1)` draw falls below `p`.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(invalid_arg("n must be at least 1"));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid_arg(format!("edge probability {p} outside [0, 1]")));
    }
    let mut rng = rng::seeded(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng::unit(&mut rng) < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges)
}

/// Chooses `k` distinct nodes uniformly (partial Fisher–Yates) and adds every
/// missing edge among them. Existing edges are never removed.
pub fn plant_clique(g: &Graph, k: usize, seed: u64) -> Result<PlantedInstance> {
    let n = g.n();
    if k > n {
        return Err(invalid_arg(format!(
            "clique size {k} exceeds node count {n}"
        )));
    }
    let mut rng = rng::seeded(seed);
    let mut ids: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = i + rng::pick_index(&mut rng, n - i);
        ids.swap(i, j);
    }
    let mut planted = ids[..k].to_vec();
    planted.sort_unstable();

    let clique = planted
        .iter()
        .enumerate()
        .flat_map(|(i, &u)| planted[i + 1..].iter().map(move |&v| (u, v)));
    let graph = Graph::from_edges(n, g.edges().chain(clique))?;
    Ok(PlantedInstance {
        graph,
        planted,
        p: None,
        seed,
    })
}

/// Background `G(n, p)` plus a planted `k`-clique, both derived from `seed`.
/// `k = 0` plants nothing.
pub fn planted_instance(n: usize, p: f64, k: usize, seed: u64) -> Result<PlantedInstance> {
    let background = erdos_renyi(n, p, seed)?;
    let mut inst = plant_clique(&background, k, clique_seed(seed))?;
    inst.p = Some(p);
    inst.seed = seed;
    Ok(inst)
}

#[inline]
pub fn clique_seed(seed: u64) -> u64 {
    seed ^ CLIQUE_SEED_MASK
}

impl PlantedInstance {
    pub fn metadata(&self) -> InstanceMetadata {
        InstanceMetadata {
            n: self.graph.n(),
            m: self.graph.m(),
            p: self.p.unwrap_or(f64::NAN),
            k: self.planted.len(),
            seed: self.seed,
            planted: self.planted.clone(),
            rng: RNG_NAME.to_string(),
            graph_seed: self.seed,
            clique_seed: clique_seed(self.seed),
        }
    }

    /// Writes the edge list to `path` and the metadata JSON to `meta_path`.
    pub fn save(&self, path: impl AsRef<Path>, meta_path: impl AsRef<Path>) -> Result<()> {
        self.graph.save_edge_list(path)?;
        let mut json = serde_json::to_string_pretty(&self.metadata())?;
        json.push('\n');
        std::fs::write(meta_path, json)?;
        Ok(())
    }
}
