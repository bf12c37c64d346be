//! Exhaustive oracle and the replicated planted-clique study.
//!
//! # Seeds
//!
//! Replicate `r` (counted from 1) builds its instance from
//! `master_seed + r` and runs algorithm `a` with chain seed
//! `master_seed + r + offset(a)`, where the offsets are `1 << 32` for SM,
//! `2 << 32` for SA and `3 << 32` for SAA. All additions wrap.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid_arg, Error, Result};
use crate::generators::planted_instance;
use crate::graph::{clique_edges, density_from_edges, Graph, Selection};
use crate::saa::SaaSettings;
use crate::samplers::{run_chain, Algorithm, SamplerConfig, Trace, DEFAULT_ALPHA};

/// Default ceiling on the number of subsets the oracle will enumerate.
pub const DEFAULT_ENUMERATION_CAP: u128 = 10_000_000;

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) is exact at every step.
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Densest `k`-subset by full enumeration, refusing when `C(n, k)` exceeds
/// [`DEFAULT_ENUMERATION_CAP`].
pub fn brute_force_densest(g: &Graph, k: usize) -> Result<(f64, Selection)> {
    brute_force_densest_capped(g, k, DEFAULT_ENUMERATION_CAP)
}

/// Returns the maximum density and the lexicographically smallest subset
/// attaining it.
pub fn brute_force_densest_capped(g: &Graph, k: usize, cap: u128) -> Result<(f64, Selection)> {
    let n = g.n();
    if k < 2 || k > n {
        return Err(invalid_arg(format!(
            "oracle needs 2 <= k <= n (k = {k}, n = {n})"
        )));
    }
    let subsets = binomial(n, k);
    if subsets > cap {
        return Err(Error::CapExceeded { subsets, cap });
    }

    struct Search<'a> {
        g: &'a Graph,
        k: usize,
        chosen: Vec<usize>,
        best_edges: Option<usize>,
        best: Vec<usize>,
    }

    impl Search<'_> {
        fn visit(&mut self, next: usize, edges: usize) {
            if self.chosen.len() == self.k {
                if self.best_edges.is_none_or(|b| edges > b) {
                    self.best_edges = Some(edges);
                    self.best.clone_from(&self.chosen);
                }
                return;
            }
            let need = self.k - self.chosen.len();
            for v in next..=self.g.n() - need {
                let gained = self
                    .chosen
                    .iter()
                    .filter(|&&u| self.g.has_edge(u, v))
                    .count();
                self.chosen.push(v);
                self.visit(v + 1, edges + gained);
                self.chosen.pop();
            }
        }
    }

    let mut search = Search {
        g,
        k,
        chosen: Vec::with_capacity(k),
        best_edges: None,
        best: Vec::new(),
    };
    search.visit(0, 0);
    let edges = search.best_edges.expect("at least one subset exists");
    Ok((
        density_from_edges(edges, k),
        Selection::from_sorted_unchecked(search.best),
    ))
}

/// First iteration whose best-so-far density is within `1e-12` of `target`.
pub fn first_hit_iteration(trace: &Trace, target: f64) -> Option<u64> {
    trace
        .records
        .iter()
        .find(|r| r.best_density >= target - 1e-12)
        .map(|r| r.iteration)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StudyConfig {
    pub replicates: usize,
    pub n: usize,
    pub p: f64,
    pub k: usize,
    pub max_iterations: u64,
    pub algorithms: Vec<Algorithm>,
    pub master_seed: u64,
    pub alpha: f64,
    pub saa: SaaSettings,
    /// End each chain once it holds a clique; success and first-hit values
    /// are unaffected, only wall times shrink.
    pub stop_at_target: bool,
}

impl StudyConfig {
    /// The planted-clique protocol: 100 replicates of `G(100, 0.05)` with a
    /// 10-clique, 10,000 iterations per chain, all three algorithms.
    pub fn planted_clique_protocol(master_seed: u64) -> Self {
        Self {
            replicates: 100,
            n: 100,
            p: 0.05,
            k: 10,
            max_iterations: 10_000,
            algorithms: Algorithm::ALL.to_vec(),
            master_seed,
            alpha: DEFAULT_ALPHA,
            saa: SaaSettings::default(),
            stop_at_target: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.replicates == 0 {
            return Err(invalid_arg("replicates must be at least 1"));
        }
        if self.algorithms.is_empty() {
            return Err(invalid_arg("at least one algorithm is required"));
        }
        if self.max_iterations == 0 {
            return Err(invalid_arg("max_iterations must be at least 1"));
        }
        if !(0.0..=1.0).contains(&self.p) {
            return Err(invalid_arg(format!(
                "edge probability {} outside [0, 1]",
                self.p
            )));
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(invalid_arg(format!("alpha {} outside [0, 1]", self.alpha)));
        }
        if self.k < 2 {
            return Err(invalid_arg("k must be at least 2"));
        }
        self.saa.build()?;
        Ok(())
    }

    pub fn instance_seed(&self, replicate: usize) -> u64 {
        self.master_seed.wrapping_add(replicate as u64)
    }

    pub fn chain_seed(&self, replicate: usize, algorithm: Algorithm) -> u64 {
        self.instance_seed(replicate)
            .wrapping_add(algorithm_offset(algorithm))
    }
}

/// Per-algorithm chain-seed offset.
pub fn algorithm_offset(algorithm: Algorithm) -> u64 {
    match algorithm {
        Algorithm::Sm => 1 << 32,
        Algorithm::Sa => 2 << 32,
        Algorithm::Saa => 3 << 32,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicateRow {
    pub replicate: usize,
    pub algorithm: Algorithm,
    pub instance_seed: u64,
    pub chain_seed: u64,
    pub success: bool,
    pub first_hit: Option<u64>,
    pub wall_seconds: f64,
    pub best_density: Option<f64>,
    pub best_edges: Option<usize>,
    /// Set when the instance or chain could not be built.
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmSummary {
    pub algorithm: Algorithm,
    pub replicates: usize,
    pub success_count: usize,
    pub failures: usize,
    pub first_hit_iterations: Vec<u64>,
    pub median_first_hit: Option<f64>,
    pub wall_times_seconds: Vec<f64>,
    pub mean_wall_seconds: f64,
    pub median_wall_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudySummary {
    pub config: StudyConfig,
    pub rows: Vec<ReplicateRow>,
    pub aggregates: Vec<AlgorithmSummary>,
}

impl StudySummary {
    pub fn get(&self, algorithm: Algorithm) -> Option<&AlgorithmSummary> {
        self.aggregates.iter().find(|a| a.algorithm == algorithm)
    }

    /// Copy with every wall-clock field zeroed, for determinism comparisons.
    pub fn without_timing(&self) -> Self {
        let mut out = self.clone();
        for row in &mut out.rows {
            row.wall_seconds = 0.0;
        }
        for agg in &mut out.aggregates {
            agg.wall_times_seconds.iter_mut().for_each(|t| *t = 0.0);
            agg.mean_wall_seconds = 0.0;
            agg.median_wall_seconds = 0.0;
        }
        out
    }

    /// Fixed-width table: algorithm, successes/replicates, median first hit,
    /// mean wall seconds.
    pub fn table(&self) -> String {
        let mut out = format!(
            "{:<9} {:>12} {:>17} {:>17}\n",
            "algorithm", "successes", "median_first_hit", "mean_wall_seconds"
        );
        for a in &self.aggregates {
            let median = a
                .median_first_hit
                .map(|m| format!("{m:.1}"))
                .unwrap_or_else(|| "-".into());
            out.push_str(&format!(
                "{:<9} {:>12} {:>17} {:>17.6}\n",
                a.algorithm.name(),
                format!("{}/{}", a.success_count, a.replicates),
                median,
                a.mean_wall_seconds
            ));
        }
        out
    }
}

pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    Some(if v.len().is_multiple_of(2) {
        (v[mid - 1] + v[mid]) / 2.0
    } else {
        v[mid]
    })
}

fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        0.0
    } else {
        values.iter().sum::<f64>() / values.len() as f64
    }
}

/// Runs every replicate (in parallel on the current rayon pool) and
/// aggregates per algorithm. Rows are ordered by replicate, then by the
/// order of `cfg.algorithms`, whatever the scheduling.
pub fn run_replication_study(cfg: &StudyConfig) -> Result<StudySummary> {
    cfg.validate()?;
    let saa = cfg.saa.build()?;
    let rows: Vec<ReplicateRow> = (1..=cfg.replicates)
        .into_par_iter()
        .map(|r| run_replicate(cfg, &saa, r))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    let aggregates = cfg
        .algorithms
        .iter()
        .map(|&alg| aggregate(alg, &rows))
        .collect();
    Ok(StudySummary {
        config: cfg.clone(),
        rows,
        aggregates,
    })
}

fn run_replicate(cfg: &StudyConfig, saa: &crate::saa::SaaConfig, r: usize) -> Vec<ReplicateRow> {
    let instance_seed = cfg.instance_seed(r);
    let instance = planted_instance(cfg.n, cfg.p, cfg.k, instance_seed);
    cfg.algorithms
        .iter()
        .map(|&algorithm| {
            let chain_seed = cfg.chain_seed(r, algorithm);
            let mut row = ReplicateRow {
                replicate: r,
                algorithm,
                instance_seed,
                chain_seed,
                success: false,
                first_hit: None,
                wall_seconds: 0.0,
                best_density: None,
                best_edges: None,
                error: None,
            };
            let inst = match &instance {
                Ok(inst) => inst,
                Err(e) => {
                    row.error = Some(e.to_string());
                    return row;
                }
            };
            let sampler = SamplerConfig {
                alpha: cfg.alpha,
                target_density: Some(1.0),
                stop_at_target: cfg.stop_at_target,
                ..SamplerConfig::new(algorithm, cfg.k, cfg.max_iterations, chain_seed)
            };
            let started = Instant::now();
            let outcome = run_chain(&inst.graph, &sampler, Some(saa));
            row.wall_seconds = started.elapsed().as_secs_f64();
            match outcome {
                Ok((_, state)) => {
                    row.success = state.best_edges == clique_edges(cfg.k);
                    row.first_hit = row.success.then(|| state.first_hit());
                    row.best_density = Some(state.best_density);
                    row.best_edges = Some(state.best_edges);
                }
                Err(e) => row.error = Some(e.to_string()),
            }
            row
        })
        .collect()
}

fn aggregate(algorithm: Algorithm, rows: &[ReplicateRow]) -> AlgorithmSummary {
    let mine: Vec<&ReplicateRow> = rows.iter().filter(|r| r.algorithm == algorithm).collect();
    let first_hit_iterations: Vec<u64> = mine.iter().filter_map(|r| r.first_hit).collect();
    let hits: Vec<f64> = first_hit_iterations.iter().map(|&h| h as f64).collect();
    let wall_times_seconds: Vec<f64> = mine
        .iter()
        .filter(|r| r.error.is_none())
        .map(|r| r.wall_seconds)
        .collect();
    AlgorithmSummary {
        algorithm,
        replicates: mine.len(),
        success_count: mine.iter().filter(|r| r.success).count(),
        failures: mine.iter().filter(|r| r.error.is_some()).count(),
        median_first_hit: median(&hits),
        first_hit_iterations,
        mean_wall_seconds: mean(&wall_times_seconds),
        median_wall_seconds: median(&wall_times_seconds).unwrap_or(0.0),
        wall_times_seconds,
    }
}
