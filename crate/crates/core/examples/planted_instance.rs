//! Generate a planted-clique instance and write the edge list with its
//! metadata sidecar.
//!
//! ```bash
//! cargo run -p densest --example planted_instance -- out/graph.txt 7
//! ```

use std::path::{Path, PathBuf};

use densest::generators::{planted_instance, PlantedInstance};
use densest::graph::{edge_density, Selection};

pub fn run(out: &Path, seed: u64) -> densest::Result<PlantedInstance> {
    let inst = planted_instance(100, 0.05, 10, seed)?;
    let meta = PathBuf::from(format!("{}.meta.json", out.display()));
    inst.save(out, &meta)?;

    let clique = Selection::new(&inst.graph, inst.planted.iter().copied())?;
    println!("n {} m {}", inst.graph.n(), inst.graph.m());
    println!("planted {:?}", inst.planted);
    println!(
        "density on planted set {}",
        edge_density(&inst.graph, &clique)?
    );
    println!("wrote {} and {}", out.display(), meta.display());
    Ok(inst)
}

fn main() -> densest::Result<()> {
    let mut args = std::env::args().skip(1);
    let out = args.next().unwrap_or_else(|| "planted.txt".into());
    let seed = args.next().and_then(|a| a.parse().ok()).unwrap_or(7);
    run(Path::new(&out), seed).map(drop)
}
