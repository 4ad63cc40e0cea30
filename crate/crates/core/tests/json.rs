use lll_core::discrete::mup_bruteforce_report;
use lll_core::gap::ClassifyConfig;
use lll_core::graph::{make_cycle_bigraph, make_hstar};
use lll_core::*;
use serde::de::DeserializeOwned;
use serde::Serialize;

fn round_trip<T: Serialize + DeserializeOwned + PartialEq + std::fmt::Debug>(x: &T) {
    let s = serde_json::to_string(x).unwrap();
    let back: T = serde_json::from_str(&s).unwrap();
    assert_eq!(&back, x, "{s}");
}

#[test]
fn graphs_and_vectors() {
    round_trip(&make_hstar());
    round_trip(&DependencyGraph::cycle(5).unwrap());
    round_trip(&ProbVec::new(vec![0.1, 0.7, 1.0 / 3.0]).unwrap());
}

#[test]
fn boundary_and_shearer() {
    let d = ProbVec::uniform(4, 1.0).unwrap();
    round_trip(&cycle_boundary_lambda(&d, 1e-12).unwrap());
    round_trip(&shearer_values(&DependencyGraph::cycle(4).unwrap(), &ProbVec::uniform(4, 0.2).unwrap()).unwrap());
}

#[test]
fn witnesses() {
    let h = Bigraph::new(3, 2, vec![(0, 0), (1, 0), (1, 1), (2, 1)]).unwrap();
    let r = tree_boundary_lambda(&h, &ProbVec::new(vec![0.3, 1.0, 0.6]).unwrap(), 1e-12).unwrap();
    let w = tree_witness(&h, &r.boundary_vector).unwrap();
    round_trip(&w);
    round_trip(&cycle_gapful_witness(5).unwrap());
    round_trip(&cycle_gapful_witness(4).unwrap().evaluate(&make_cycle_bigraph(4).unwrap()).unwrap());
}

#[test]
fn verdicts_and_reports() {
    round_trip(&classify_gap(&make_hstar()).unwrap());
    round_trip(&classify_gap(&make_cycle_bigraph(4).unwrap()).unwrap());
    round_trip(&ClassifyConfig::default());
    round_trip(&SearchConfig::default());
    let h = Bigraph::new(2, 1, vec![(0, 0), (1, 0)]).unwrap();
    let cfg = SearchConfig::default();
    round_trip(&mup_bruteforce_report(&h, &ProbVec::new(vec![0.3, 0.4]).unwrap(), &cfg).unwrap());
    round_trip(&exterior_membership(&h, &ProbVec::new(vec![0.6, 0.5]).unwrap(), &cfg).unwrap().unwrap());
}

#[test]
fn reduction_ops() {
    let ops = vec![
        ReductionOp::DeleteVariable { variable: 2 },
        ReductionOp::DuplicateEvent { event: 1, position: 3 },
        ReductionOp::InsertEdge { event: 0, variable: 1 },
    ];
    for op in &ops {
        round_trip(op);
    }
}
