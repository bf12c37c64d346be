//! Helpers shared by several integration test targets.
#![allow(dead_code)]

use densest::generators::erdos_renyi;
use densest::graph::{clique_edges, internal_edges};
use densest::harness::brute_force_densest;
use densest::saa::SaaConfig;
use densest::samplers::{run_chain, Algorithm, SamplerConfig};

/// Number of the 20 instances `G(20, 0.2)`, k = 4, on which a 5,000-iteration
/// chain matches the exhaustive optimum (compared by internal edge count).
pub fn oracle_agreement(algorithm: Algorithm) -> usize {
    let k = 4;
    let saa = SaaConfig::default();
    (0..20u64)
        .filter(|&seed| {
            let g = erdos_renyi(20, 0.2, seed).unwrap();
            let (best, witness) = brute_force_densest(&g, k).unwrap();
            let target = internal_edges(&g, &witness);
            assert!(target <= clique_edges(k) && best <= 1.0);
            let cfg = SamplerConfig::new(algorithm, k, 5_000, 1_000 + seed);
            match run_chain(&g, &cfg, Some(&saa)) {
                Ok((_, state)) => state.best_edges == target,
                Err(_) => false,
            }
        })
        .count()
}
