//! Monte Carlo search for the densest subgraph of a fixed size `k`.
//!
//! Three chains are provided over a shared immutable [`Graph`]:
//!
//! * **SM**: node swaps scored by the sum of pairwise shortest-path lengths,
//!   with a forced random replacement every ninth iteration.
//! * **SA**: simulated annealing on edge density with connectivity-preserving
//!   local and global moves and geometric cooling.
//! * **SAA**: SA augmented with stochastic-approximation weights over a
//!   density partition and square-root cooling.
//!
//! The [`generators`] module builds seeded Erdős–Rényi graphs with a planted
//! clique, and [`harness`] runs replicated studies against them and offers an
//! exhaustive oracle for small instances.

pub mod config;
pub mod error;
pub mod generators;
pub mod graph;
pub mod harness;
pub mod plot;
pub mod rng;
pub mod saa;
pub mod samplers;

pub use error::{Error, Result};
pub use generators::{erdos_renyi, plant_clique, PlantedInstance};
pub use graph::{Graph, Selection};
pub use harness::{brute_force_densest, run_replication_study, StudyConfig, StudySummary};
pub use saa::{Partition, SaaConfig, ThetaVector};
pub use samplers::{run_chain, Algorithm, ChainState, SamplerConfig, Trace, TraceRecord};
