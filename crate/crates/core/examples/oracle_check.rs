//! Compare SA and SAA against exhaustive enumeration on small random graphs.
//!
//! ```bash
//! cargo run --release -p densest --example oracle_check -- 20
//! ```

use densest::generators::erdos_renyi;
use densest::graph::internal_edges;
use densest::harness::brute_force_densest;
use densest::saa::SaaConfig;
use densest::samplers::{run_chain, Algorithm, SamplerConfig};

/// Returns how many of `instances` graphs each algorithm solved exactly.
pub fn run(instances: u64) -> densest::Result<(usize, usize)> {
    let k = 4;
    let saa = SaaConfig::default();
    let (mut sa_hits, mut saa_hits) = (0, 0);
    for seed in 0..instances {
        let g = erdos_renyi(20, 0.2, seed)?;
        let (best, witness) = brute_force_densest(&g, k)?;
        let target = internal_edges(&g, &witness);
        let mut line = format!("seed {seed:>2}  oracle {best:.4} {:?}", witness.nodes());
        for (algorithm, hits) in [
            (Algorithm::Sa, &mut sa_hits),
            (Algorithm::Saa, &mut saa_hits),
        ] {
            let cfg = SamplerConfig::new(algorithm, k, 5_000, 1_000 + seed);
            let (_, state) = run_chain(&g, &cfg, Some(&saa))?;
            let ok = state.best_edges == target;
            *hits += usize::from(ok);
            line.push_str(&format!("  {algorithm} {}", if ok { "ok" } else { "miss" }));
        }
        println!("{line}");
    }
    println!("SA {sa_hits}/{instances}, SAA {saa_hits}/{instances}");
    Ok((sa_hits, saa_hits))
}

fn main() -> densest::Result<()> {
    let instances = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(20);
    run(instances).map(drop)
}
