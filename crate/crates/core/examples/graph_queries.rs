//! The graph primitives the samplers are built on: density, connectivity,
//! articulation points and the pairwise distance objective.
//!
//! ```bash
//! cargo run -p densest --example graph_queries
//! ```

use densest::graph::{
    distance_objective, edge_density, is_connected, neighbors_of_set, non_articulation_nodes,
    Graph, Selection,
};

pub struct Report {
    pub density: f64,
    pub connected: bool,
    pub removable: Vec<usize>,
    pub frontier: Vec<usize>,
    pub distance_sum: u64,
}

/// Triangle 0-1-2 with a pendant path 2-3-4.
pub fn run() -> densest::Result<Report> {
    let g = Graph::from_edges(5, [(0, 1), (0, 2), (1, 2), (2, 3), (3, 4)])?;
    let s = Selection::new(&g, [0, 1, 2, 3])?;
    let report = Report {
        density: edge_density(&g, &s)?,
        connected: is_connected(&g, s.nodes())?,
        removable: non_articulation_nodes(&g, s.nodes())?,
        frontier: neighbors_of_set(&g, s.nodes()),
        distance_sum: distance_objective(&g, &s),
    };
    println!("selection {:?} of a {}-node graph", s.nodes(), g.n());
    println!("edge density        {:.4}", report.density);
    println!("connected           {}", report.connected);
    println!("removable nodes     {:?}", report.removable);
    println!("outside neighbours  {:?}", report.frontier);
    println!("distance objective  {}", report.distance_sum);
    Ok(report)
}

fn main() -> densest::Result<()> {
    run().map(drop)
}
