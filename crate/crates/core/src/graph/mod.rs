//! Bigraphs, dependency graphs, standard families and structural predicates.

mod bigraph;
mod cyclic;
mod dependency;
mod generators;

pub use bigraph::Bigraph;
pub use cyclic::{contains_cyclic, cyclic_event_subset, CyclicEmbedding};
pub use dependency::{DependencyGraph, DEFAULT_VERTEX_CAP};
pub(crate) use dependency::mask_to_vec;
pub use generators::{
    k_subsets, make_canonical_bigraph, make_combinatorial_bigraph, make_cycle_bigraph, make_hstar,
    make_upper_combinatorial, random_tree, random_tree_bigraph,
};
