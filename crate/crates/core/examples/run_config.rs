//! Drive a chain from a JSON run-config document, the same format accepted
//! by `densest run --config`.
//!
//! ```bash
//! cargo run -p densest --example run_config -- my_run.json
//! ```

use std::path::Path;

use densest::config::RunConfigDocument;
use densest::samplers::run_chain;

pub const SAMPLE: &str = r#"{
  "algorithm": "saa",
  "k": 6,
  "max_iterations": 4000,
  "seed": 11,
  "saa": { "n_regions": 21, "plateau": 500 },
  "instance": { "generate": { "n": 60, "p": 0.05, "k": 6, "seed": 3 } }
}"#;

/// Runs the document and returns the best density found.
pub fn run(doc: &RunConfigDocument, base_dir: &Path) -> densest::Result<f64> {
    let g = doc.graph(base_dir)?;
    let saa = doc.saa_config()?;
    let (trace, state) = run_chain(&g, &doc.sampler_config(), Some(&saa))?;
    println!(
        "{} on {} nodes, {} iterations",
        doc.algorithm,
        g.n(),
        trace.len()
    );
    println!(
        "best {:.4} {:?} first hit {}",
        state.best_density,
        state.best.nodes(),
        state.first_hit()
    );
    Ok(state.best_density)
}

fn main() -> densest::Result<()> {
    match std::env::args().nth(1) {
        Some(path) => {
            let (doc, base) = RunConfigDocument::load(&path)?;
            run(&doc, &base)
        }
        None => run(&RunConfigDocument::from_json(SAMPLE)?, Path::new(".")),
    }
    .map(drop)
}
