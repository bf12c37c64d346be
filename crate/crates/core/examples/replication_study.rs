//! Replicated planted-clique study with all three algorithms.
//!
//! ```bash
//! cargo run --release -p densest --example replication_study -- 100 2024
//! ```
//!
//! Arguments: replicate count (default 20) and master seed (default 2024).

use densest::harness::{run_replication_study, StudyConfig};

pub fn run(replicates: usize, master_seed: u64) -> densest::Result<()> {
    let cfg = StudyConfig {
        replicates,
        ..StudyConfig::planted_clique_protocol(master_seed)
    };
    let summary = run_replication_study(&cfg)?;
    println!(
        "n = {}, p = {}, k = {}, {} iterations, {} replicates",
        cfg.n, cfg.p, cfg.k, cfg.max_iterations, cfg.replicates
    );
    print!("{}", summary.table());
    Ok(())
}

fn main() -> densest::Result<()> {
    let mut args = std::env::args().skip(1);
    let replicates = args.next().and_then(|a| a.parse().ok()).unwrap_or(20);
    let seed = args.next().and_then(|a| a.parse().ok()).unwrap_or(2024);
    run(replicates, seed)
}
