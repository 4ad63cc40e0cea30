//! Tight local lemma boundaries.
//!
//! Computes Shearer's abstract boundary for dependency graphs, the variable
//! boundary for event–variable bigraphs (exact for trees and cycles, by
//! discrete search otherwise), and classifies bigraphs as gapful or gapless.

pub mod boundary;
pub mod cycle;
pub mod discrete;
pub mod error;
pub mod gap;
pub mod graph;
pub mod probvec;
pub mod shearer;
pub mod tree;
pub mod witness;

pub use boundary::{BoundaryResult, Method};
pub use cycle::{cycle_boundary_lambda, cycle_boundary_witness, cycle_chain_solve, cycle_gapful_witness, triangle_closed_form};
pub use discrete::{
    exterior_membership, mup_bruteforce, vlll_boundary_lambda_bruteforce, DiscreteCylinderSet, Evaluation,
    MembershipCertificate, SearchConfig,
};
pub use error::{Error, Result};
pub use gap::{
    apply_reduction, classify_gap, classify_graph, h43_witness, normalize, numeric_gap_check, small_exclusive_witness,
    GapStatus, GapVerdict, ReductionOp,
};
pub use graph::{Bigraph, CyclicEmbedding, DependencyGraph};
pub use probvec::ProbVec;
pub use shearer::{abstract_boundary_lambda, shearer_values, ShearerReport};
pub use tree::{tree_boundary_lambda, tree_witness};
pub use witness::BoxWitness;
