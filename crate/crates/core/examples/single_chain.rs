//! One chain of each algorithm on the same planted instance, with trace CSVs
//! and SVG plots written to a directory.
//!
//! ```bash
//! cargo run --release -p densest --example single_chain -- traces 10000
//! ```

use std::path::Path;

use densest::generators::planted_instance;
use densest::plot::render_svg;
use densest::saa::SaaConfig;
use densest::samplers::{run_chain, Algorithm, SamplerConfig};

/// Returns `(algorithm, best density, first-hit iteration)` per chain.
pub fn run(dir: &Path, iterations: u64) -> densest::Result<Vec<(Algorithm, f64, u64)>> {
    std::fs::create_dir_all(dir)?;
    let inst = planted_instance(100, 0.05, 10, 7)?;
    let saa = SaaConfig::default();
    let mut results = Vec::new();
    for algorithm in Algorithm::ALL {
        let cfg = SamplerConfig::new(algorithm, 10, iterations, 3);
        let (trace, state) = run_chain(&inst.graph, &cfg, Some(&saa))?;
        trace.write_csv(std::fs::File::create(dir.join(format!("{algorithm}.csv")))?)?;
        let svg = render_svg(
            &trace.records,
            &format!("{algorithm} on G(100, 0.05) + K10"),
        );
        std::fs::write(dir.join(format!("{algorithm}.svg")), svg)?;
        let hit = if state.found_clique() {
            state.first_hit().to_string()
        } else {
            "-".into()
        };
        println!(
            "{:<4} best {:.4}  first hit {hit}",
            algorithm.name(),
            state.best_density
        );
        results.push((algorithm, state.best_density, state.first_hit()));
    }
    Ok(results)
}

fn main() -> densest::Result<()> {
    let mut args = std::env::args().skip(1);
    let dir = args.next().unwrap_or_else(|| "traces".into());
    let iterations = args.next().and_then(|a| a.parse().ok()).unwrap_or(10_000);
    run(Path::new(&dir), iterations).map(drop)
}
