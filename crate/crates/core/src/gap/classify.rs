//! Gap classification of bigraphs and dependency graphs.

use serde::{Deserialize, Serialize};

use crate::boundary::Method;
use crate::cycle::{cycle_boundary_lambda_bigraph, DEFAULT_TOL as CYCLE_TOL};
use crate::discrete::{vlll_boundary_lambda_bruteforce, SearchConfig};
use crate::error::{Error, Result};
use crate::graph::{
    contains_cyclic, cyclic_event_subset, k_subsets, make_canonical_bigraph, make_combinatorial_bigraph, make_hstar,
    Bigraph, CyclicEmbedding, DependencyGraph,
};
use crate::probvec::ProbVec;
use crate::shearer::abstract_boundary_lambda;
use crate::tree::{tree_boundary_lambda, tree_witness, DEFAULT_TOL as TREE_TOL};
use crate::witness::BoxWitness;

use super::iso::{bigraph_isomorphic, is_complete_sparsification};
use super::reduction::{normalize, ReductionOp};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GapStatus {
    Gapful,
    Gapless,
    Unknown,
}

/// One derivation step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub rule: String,
    /// The result the step relies on.
    pub justification: String,
    pub detail: serde_json::Value,
}

impl TraceStep {
    fn new(rule: &str, justification: &str, detail: serde_json::Value) -> Self {
        TraceStep {
            rule: rule.into(),
            justification: justification.into(),
            detail,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum VerdictWitness {
    CyclicEmbedding(CyclicEmbedding),
    /// Events of the normal form inducing a cyclic sub-bigraph.
    EventSubset(Vec<usize>),
    Boxes(BoxWitness),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapVerdict {
    pub status: GapStatus,
    pub trace: Vec<TraceStep>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<VerdictWitness>,
}

/// Caps for catalog matching.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ClassifyConfig {
    /// Largest number of event subsets scanned for a gapful sub-bigraph.
    pub subset_cap: u64,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        ClassifyConfig { subset_cap: 100_000 }
    }
}

const REDUCTION_RULE: &str = "delete-variable, duplicate-event and duplicate-variable preserve gap status in both directions";
const ADD_EVENTS_RULE: &str = "a gapful bigraph stays gapful when events are added (inverse delete-event)";
const DELETE_EDGE_RULE: &str = "a gapful bigraph stays gapful under delete-edge";

fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Decides gapful/gapless where an implemented rule applies, else Unknown.
pub fn classify_gap(h: &Bigraph) -> Result<GapVerdict> {
    classify_gap_with(h, &ClassifyConfig::default())
}

pub fn classify_gap_with(h: &Bigraph, cfg: &ClassifyConfig) -> Result<GapVerdict> {
    if !h.base_graph().is_connected() {
        return Err(Error::Disconnected);
    }
    let norm = normalize(h);
    let normal = &norm.normal;
    let mut trace = vec![TraceStep::new(
        "normalize",
        REDUCTION_RULE,
        serde_json::to_value(&norm.trace).expect("serializable"),
    )];
    let done = |status, mut trace: Vec<TraceStep>, step: TraceStep, witness| {
        trace.push(step);
        Ok(GapVerdict { status, trace, witness })
    };
    let g = normal.base_graph();

    if g.is_tree() {
        let witness = if h.base_graph().is_tree() {
            tree_boundary_lambda(h, &ProbVec::uniform(h.n_events(), 1.0)?, TREE_TOL)
                .and_then(|r| tree_witness(h, &r.boundary_vector))
                .ok()
                .map(VerdictWitness::Boxes)
        } else {
            None
        };
        return done(
            GapStatus::Gapless,
            trace,
            TraceStep::new("treelike", "treelike bigraphs are gapless", serde_json::json!({})),
            witness,
        );
    }

    if let Some(emb) = contains_cyclic(normal) {
        let len = emb.cycle_length;
        return done(
            GapStatus::Gapful,
            trace,
            TraceStep::new(
                "cyclic-containment",
                "any bigraph containing a cyclic bigraph is gapful",
                serde_json::json!({ "cycle_length": len }),
            ),
            Some(VerdictWitness::CyclicEmbedding(emb)),
        );
    }

    if let Some(subset) = cyclic_event_subset(normal) {
        trace.push(TraceStep::new(
            "add-events",
            ADD_EVENTS_RULE,
            serde_json::json!({ "kept_events": subset }),
        ));
        return done(
            GapStatus::Gapful,
            trace,
            TraceStep::new(
                "cyclic-after-normalize",
                "the kept events normalize to a cyclic bigraph, which is gapful",
                serde_json::json!({ "cycle_length": subset.len() }),
            ),
            Some(VerdictWitness::EventSubset(subset)),
        );
    }

    if g.is_chordal() {
        let canonical = normalize(&make_canonical_bigraph(&g)).normal;
        if let Ok(true) = bigraph_isomorphic(normal, &canonical) {
            return done(
                GapStatus::Gapless,
                trace,
                TraceStep::new(
                    "chordal-canonical",
                    "the canonical bigraph of a chordal graph is gapless",
                    serde_json::json!({ "vertices": g.n_vertices() }),
                ),
                None,
            );
        }
    }

    if let Some(n) = is_dense_combinatorial(normal) {
        if n >= 4 {
            trace.push(TraceStep::new(
                "catalog",
                "H_{4,3} is gapless",
                serde_json::json!({ "member": "H_{4,3}" }),
            ));
            return done(
                GapStatus::Gapless,
                trace,
                TraceStep::new(
                    "dense-extension",
                    "if H_{n,m} is gapless then so is H_{n+c,m+c}",
                    serde_json::json!({ "member": format!("H_{{{n},{}}}", n - 1) }),
                ),
                None,
            );
        }
    }

    let hstar = make_hstar();
    let h75 = make_combinatorial_bigraph(7, 5)?;
    for (candidate, label) in [(normal, "normal form"), (h, "input")] {
        if is_complete_sparsification(candidate, &hstar, false) {
            return done(
                GapStatus::Gapful,
                trace,
                TraceStep::new(
                    "catalog-sparsification",
                    DELETE_EDGE_RULE,
                    serde_json::json!({ "member": "H*", "of": label }),
                ),
                None,
            );
        }
        if is_complete_sparsification(candidate, &h75, true) {
            return done(
                GapStatus::Gapful,
                trace,
                TraceStep::new(
                    "catalog-sparsification",
                    DELETE_EDGE_RULE,
                    serde_json::json!({ "member": "H_{7,5}", "of": label }),
                ),
                None,
            );
        }
    }

    let n = normal.n_events();
    if n > 5 && binom(n as u64, 5) <= cfg.subset_cap {
        for subset in k_subsets(n, 5) {
            let sub = normalize(&normal.restrict_events(&subset)).normal;
            if is_complete_sparsification(&sub, &hstar, false) {
                trace.push(TraceStep::new(
                    "add-events",
                    ADD_EVENTS_RULE,
                    serde_json::json!({ "kept_events": subset }),
                ));
                return done(
                    GapStatus::Gapful,
                    trace,
                    TraceStep::new(
                        "catalog-sparsification",
                        DELETE_EDGE_RULE,
                        serde_json::json!({ "member": "H*", "of": "event subset" }),
                    ),
                    Some(VerdictWitness::EventSubset(subset)),
                );
            }
        }
    }

    done(
        GapStatus::Unknown,
        trace,
        TraceStep::new("none", "no implemented rule decides this bigraph", serde_json::json!({})),
        None,
    )
}

/// `Some(n)` when `h ≅ H_{n,n-1}`: `n` events and `n` variables, each event
/// missing exactly one variable, distinct events missing distinct ones.
fn is_dense_combinatorial(h: &Bigraph) -> Option<usize> {
    let n = h.n_events();
    if h.n_variables() != n || n < 2 {
        return None;
    }
    let mut seen = vec![false; n];
    for i in 0..n {
        let nb = h.event_neighbors(i);
        if nb.len() != n - 1 {
            return None;
        }
        let miss = (0..n).find(|j| nb.binary_search(j).is_err())?;
        if std::mem::replace(&mut seen[miss], true) {
            return None;
        }
    }
    Some(n)
}

/// Structural predicates of a dependency graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphClass {
    /// Some bigraph with this base graph is gapful.
    pub a_gapful: bool,
    /// The canonical bigraph of this graph is gapful.
    pub strongly_a_gapful: bool,
}

/// Non-trees are a-gapful; non-chordal graphs are strongly a-gapful.
pub fn classify_graph(g: &DependencyGraph) -> GraphClass {
    GraphClass {
        a_gapful: !g.is_tree(),
        strongly_a_gapful: !g.is_chordal(),
    }
}

/// Abstract versus variable boundary along one direction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NumericGap {
    pub lambda_abstract: f64,
    pub lambda_variable: f64,
    pub margin: f64,
    pub method: Method,
    pub gapful_in_direction: bool,
}

/// Compares Shearer's bound with the best applicable exact or brute-force
/// variable boundary; a direction counts as gapful when the margin exceeds
/// `threshold` plus the solver's own uncertainty.
pub fn numeric_gap_check(h: &Bigraph, direction: &ProbVec, cfg: &SearchConfig, threshold: f64) -> Result<NumericGap> {
    let g = h.base_graph();
    let a = abstract_boundary_lambda(&g, direction, 1e-12)?;
    let (v, uncertainty) = if g.is_tree() {
        (tree_boundary_lambda(h, direction, TREE_TOL)?, 1e-9)
    } else if let Ok(r) = cycle_boundary_lambda_bigraph(h, direction, CYCLE_TOL) {
        (r, 1e-9)
    } else {
        let r = vlll_boundary_lambda_bruteforce(h, direction, cfg)?;
        let width = r.residual;
        (r, width)
    };
    let margin = v.lambda - a.lambda;
    Ok(NumericGap {
        lambda_abstract: a.lambda,
        lambda_variable: v.lambda,
        margin,
        method: v.method,
        gapful_in_direction: margin > threshold + uncertainty,
    })
}

/// Direction-respecting audit: Gapless may only be concluded through
/// two-way reductions and rules that transfer gaplessness.
pub fn trace_respects_directions(v: &GapVerdict) -> bool {
    v.trace.iter().all(|s| match v.status {
        GapStatus::Gapless => s.justification != ADD_EVENTS_RULE && s.justification != DELETE_EDGE_RULE,
        _ => true,
    })
}

/// Reductions accepted by [`ReductionOp`] that keep the gap status.
pub fn is_two_way(op: &ReductionOp) -> bool {
    use super::reduction::ReductionKind::*;
    matches!(op.kind(), DeleteVariable | DuplicateEvent | DuplicateVariable)
}
