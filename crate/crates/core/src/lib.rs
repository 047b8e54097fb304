//! Deterministic approximate counting of matchings in 3-uniform hypergraphs of
//! maximum degree 3, by correlation decay on the intersection graph, with exact
//! brute-force oracles and a numerical certifier for the contraction bound.

pub mod blocks;
pub mod bound;
pub mod cli;
pub mod counter;
pub mod decay;
pub mod error;
pub mod exact;
pub mod hypergraph;
pub mod intersection;
pub mod numeric;
pub mod vertex_set;

pub use blocks::{BlockPartition, MAX_BLOCK};
pub use counter::{
    count_is, count_matchings, count_matchings_exact_mode, ApproxCount, CountOptions,
};
pub use decay::{decay_error_bound, phi, required_t, PhiCache, PhiParams};
pub use error::{Error, Result};
pub use exact::{exact_pi, exact_zi, exact_zm, ExactOracle};
pub use hypergraph::{gen_random_33, named_instance, EdgeId, Hypergraph, ValidationReport};
pub use intersection::{IGraph, StructReport};
pub use numeric::{Real, Weight};
pub use vertex_set::VertexSet;
