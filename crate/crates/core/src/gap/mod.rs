//! Gap classification, reductions, catalog matching and exclusive witnesses.

mod classify;
mod iso;
mod reduction;
mod witness;

pub use classify::{
    classify_gap, classify_gap_with, classify_graph, is_two_way, numeric_gap_check, trace_respects_directions,
    ClassifyConfig, GapStatus, GapVerdict, GraphClass, NumericGap, TraceStep, VerdictWitness,
};
pub use iso::{bigraph_isomorphic, is_complete_sparsification, ISO_EVENT_CAP};
pub use reduction::{apply_reduction, normalize, Normalized, ReductionKind, ReductionOp};
pub use witness::{h43_witness, small_exclusive_witness};
