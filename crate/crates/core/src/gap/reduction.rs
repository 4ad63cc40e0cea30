//! The five gap-relevant bigraph operations and their inverses.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Bigraph;

/// Operation family, without direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ReductionKind {
    DeleteVariable,
    DuplicateEvent,
    DuplicateVariable,
    DeleteEdge,
    DeleteEvent,
}

/// A concrete operation. Indices are 0-based and refer to the bigraph the
/// operation is applied to; inserted items land at `position`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum ReductionOp {
    /// Remove a variable with at most one neighbor.
    DeleteVariable { variable: usize },
    /// Insert a variable with at most one neighbor.
    InsertVariable { position: usize, events: Vec<usize> },
    /// Insert a copy of `event` at `position`.
    DuplicateEvent { event: usize, position: usize },
    /// Remove `duplicate`, whose neighborhood equals that of `event`.
    MergeDuplicateEvent { event: usize, duplicate: usize },
    /// Insert a variable at `position` adjacent to `events ⊆ N(variable)`.
    DuplicateVariable {
        variable: usize,
        position: usize,
        events: Vec<usize>,
    },
    /// Remove `variable`, whose neighborhood is contained in that of `into`.
    MergeVariable { variable: usize, into: usize },
    /// Remove an edge without changing the base graph.
    DeleteEdge { event: usize, variable: usize },
    /// Add an edge without changing the base graph.
    InsertEdge { event: usize, variable: usize },
    /// Remove an event and its edges.
    DeleteEvent { event: usize },
    /// Insert an event at `position` adjacent to `variables`.
    InsertEvent { position: usize, variables: Vec<usize> },
}

impl ReductionOp {
    pub fn kind(&self) -> ReductionKind {
        use ReductionOp::*;
        match self {
            DeleteVariable { .. } | InsertVariable { .. } => ReductionKind::DeleteVariable,
            DuplicateEvent { .. } | MergeDuplicateEvent { .. } => ReductionKind::DuplicateEvent,
            DuplicateVariable { .. } | MergeVariable { .. } => ReductionKind::DuplicateVariable,
            DeleteEdge { .. } | InsertEdge { .. } => ReductionKind::DeleteEdge,
            DeleteEvent { .. } | InsertEvent { .. } => ReductionKind::DeleteEvent,
        }
    }

    /// Whether this is the inverse form of its family.
    pub fn is_inverse(&self) -> bool {
        use ReductionOp::*;
        matches!(
            self,
            InsertVariable { .. } | MergeDuplicateEvent { .. } | MergeVariable { .. } | InsertEdge { .. } | InsertEvent { .. }
        )
    }

    /// The operation undoing `self` when `self` is applied to `h`.
    pub fn inverse_on(&self, h: &Bigraph) -> Result<ReductionOp> {
        use ReductionOp::*;
        self.check(h)?;
        let shift = |idx: usize, removed: usize| if idx > removed { idx - 1 } else { idx };
        let bump = |idx: usize, inserted: usize| if idx >= inserted { idx + 1 } else { idx };
        Ok(match self {
            DeleteVariable { variable } => InsertVariable {
                position: *variable,
                events: h.variable_neighbors(*variable).to_vec(),
            },
            InsertVariable { position, .. } => DeleteVariable { variable: *position },
            DuplicateEvent { event, position } => MergeDuplicateEvent {
                event: bump(*event, *position),
                duplicate: *position,
            },
            MergeDuplicateEvent { event, duplicate } => DuplicateEvent {
                event: shift(*event, *duplicate),
                position: *duplicate,
            },
            DuplicateVariable { variable, position, .. } => MergeVariable {
                variable: *position,
                into: bump(*variable, *position),
            },
            MergeVariable { variable, into } => DuplicateVariable {
                variable: shift(*into, *variable),
                position: *variable,
                events: h.variable_neighbors(*variable).to_vec(),
            },
            DeleteEdge { event, variable } => InsertEdge {
                event: *event,
                variable: *variable,
            },
            InsertEdge { event, variable } => DeleteEdge {
                event: *event,
                variable: *variable,
            },
            DeleteEvent { event } => InsertEvent {
                position: *event,
                variables: h.event_neighbors(*event).to_vec(),
            },
            InsertEvent { position, .. } => DeleteEvent { event: *position },
        })
    }

    fn check(&self, h: &Bigraph) -> Result<()> {
        use ReductionOp::*;
        let n = h.n_events();
        let m = h.n_variables();
        let ev = |i: usize| -> Result<()> {
            if i < n {
                Ok(())
            } else {
                Err(Error::invalid(format!("event {i} out of range")))
            }
        };
        let var = |j: usize| -> Result<()> {
            if j < m {
                Ok(())
            } else {
                Err(Error::invalid(format!("variable {j} out of range")))
            }
        };
        let subset = |xs: &[usize], of: &[usize]| xs.iter().all(|x| of.binary_search(x).is_ok());
        match self {
            DeleteVariable { variable } => {
                var(*variable)?;
                if h.variable_degree(*variable) > 1 {
                    return Err(Error::invalid("only variables with at most one neighbor can be deleted"));
                }
            }
            InsertVariable { position, events } => {
                if *position > m || events.len() > 1 {
                    return Err(Error::invalid("inserted variable needs a valid position and at most one neighbor"));
                }
                events.iter().try_for_each(|&i| ev(i))?;
            }
            DuplicateEvent { event, position } => {
                ev(*event)?;
                if *position > n {
                    return Err(Error::invalid("insertion position out of range"));
                }
            }
            MergeDuplicateEvent { event, duplicate } => {
                ev(*event)?;
                ev(*duplicate)?;
                if event == duplicate || h.event_neighbors(*event) != h.event_neighbors(*duplicate) {
                    return Err(Error::invalid("events are not duplicates"));
                }
            }
            DuplicateVariable {
                variable,
                position,
                events,
            } => {
                var(*variable)?;
                if *position > m {
                    return Err(Error::invalid("insertion position out of range"));
                }
                let mut sorted = events.clone();
                sorted.sort_unstable();
                sorted.dedup();
                if sorted.len() != events.len() || !subset(&sorted, h.variable_neighbors(*variable)) {
                    return Err(Error::invalid("duplicate variable must see a subset of the original's events"));
                }
            }
            MergeVariable { variable, into } => {
                var(*variable)?;
                var(*into)?;
                if variable == into || !subset(h.variable_neighbors(*variable), h.variable_neighbors(*into)) {
                    return Err(Error::invalid("variable neighborhood is not contained in the target's"));
                }
            }
            DeleteEdge { event, variable } => {
                if !h.has_edge(*event, *variable) {
                    return Err(Error::invalid("edge not present"));
                }
            }
            InsertEdge { event, variable } => {
                ev(*event)?;
                var(*variable)?;
                if h.has_edge(*event, *variable) {
                    return Err(Error::invalid("edge already present"));
                }
            }
            DeleteEvent { event } => {
                ev(*event)?;
                if n == 1 {
                    return Err(Error::invalid("cannot delete the only event"));
                }
            }
            InsertEvent { position, variables } => {
                if *position > n {
                    return Err(Error::invalid("insertion position out of range"));
                }
                variables.iter().try_for_each(|&j| var(j))?;
            }
        }
        Ok(())
    }
}

/// Applies `op` to `h`.
pub fn apply_reduction(h: &Bigraph, op: &ReductionOp) -> Result<Bigraph> {
    use ReductionOp::*;
    op.check(h)?;
    let mut nbrs: Vec<Vec<usize>> = (0..h.n_events()).map(|i| h.event_neighbors(i).to_vec()).collect();
    let mut m = h.n_variables();
    let remove_var = |nbrs: &mut Vec<Vec<usize>>, j: usize| {
        for vs in nbrs.iter_mut() {
            vs.retain(|&x| x != j);
            vs.iter_mut().filter(|x| **x > j).for_each(|x| *x -= 1);
        }
    };
    let insert_var = |nbrs: &mut Vec<Vec<usize>>, pos: usize, events: &[usize]| {
        for vs in nbrs.iter_mut() {
            vs.iter_mut().filter(|x| **x >= pos).for_each(|x| *x += 1);
        }
        for &i in events {
            nbrs[i].push(pos);
        }
    };
    match op {
        DeleteVariable { variable } | MergeVariable { variable, .. } => {
            remove_var(&mut nbrs, *variable);
            m -= 1;
        }
        InsertVariable { position, events } => {
            insert_var(&mut nbrs, *position, events);
            m += 1;
        }
        DuplicateVariable { position, events, .. } => {
            insert_var(&mut nbrs, *position, events);
            m += 1;
        }
        DuplicateEvent { event, position } => {
            let copy = nbrs[*event].clone();
            nbrs.insert(*position, copy);
        }
        MergeDuplicateEvent { duplicate, .. } => {
            nbrs.remove(*duplicate);
        }
        DeleteEdge { event, variable } => nbrs[*event].retain(|x| x != variable),
        InsertEdge { event, variable } => nbrs[*event].push(*variable),
        DeleteEvent { event } => {
            nbrs.remove(*event);
        }
        InsertEvent { position, variables } => nbrs.insert(*position, variables.clone()),
    }
    let out = Bigraph::from_neighborhoods(m, &nbrs)?;
    if matches!(op, DeleteEdge { .. } | InsertEdge { .. }) && out.base_graph() != h.base_graph() {
        return Err(Error::invalid("edge operation would change the base graph"));
    }
    Ok(out)
}

/// Result of [`normalize`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Normalized {
    pub normal: Bigraph,
    pub trace: Vec<ReductionOp>,
}

/// Fixpoint of: delete variables of degree at most one, merge variables
/// whose neighborhood is contained in another's, merge duplicate events.
pub fn normalize(h: &Bigraph) -> Normalized {
    let mut cur = h.clone();
    let mut trace = Vec::new();
    while let Some(op) = next_normalizing_op(&cur) {
        cur = apply_reduction(&cur, &op).expect("normalizing operations are applicable");
        trace.push(op);
    }
    Normalized { normal: cur, trace }
}

fn next_normalizing_op(h: &Bigraph) -> Option<ReductionOp> {
    let m = h.n_variables();
    if let Some(j) = (0..m).find(|&j| h.variable_degree(j) <= 1) {
        return Some(ReductionOp::DeleteVariable { variable: j });
    }
    for j in 0..m {
        let nj = h.variable_neighbors(j);
        for k in 0..m {
            if k == j {
                continue;
            }
            let nk = h.variable_neighbors(k);
            let contained = nj.iter().all(|x| nk.binary_search(x).is_ok());
            // Equal neighborhoods: keep the lower index.
            if contained && (nj.len() < nk.len() || j > k) {
                return Some(ReductionOp::MergeVariable { variable: j, into: k });
            }
        }
    }
    let n = h.n_events();
    for d in 0..n {
        for e in 0..d {
            if h.event_neighbors(e) == h.event_neighbors(d) {
                return Some(ReductionOp::MergeDuplicateEvent { event: e, duplicate: d });
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_combinatorial_bigraph, make_cycle_bigraph};
    use proptest::prelude::*;

    fn h4_plus_pendant() -> Bigraph {
        Bigraph::from_neighborhoods(5, &[vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0, 4]]).unwrap()
    }

    #[test]
    fn delete_pendant_variable() {
        let out = apply_reduction(&h4_plus_pendant(), &ReductionOp::DeleteVariable { variable: 4 }).unwrap();
        assert_eq!(out, make_cycle_bigraph(4).unwrap());
        assert!(apply_reduction(&out, &ReductionOp::DeleteVariable { variable: 0 }).is_err());
    }

    #[test]
    fn merge_contained_variable() {
        let h = make_cycle_bigraph(4).unwrap();
        let dup = ReductionOp::DuplicateVariable {
            variable: 1,
            position: 4,
            events: vec![1],
        };
        let h2 = apply_reduction(&h, &dup).unwrap();
        assert_eq!(h2.n_variables(), 5);
        assert_eq!(h2.base_graph(), h.base_graph());
        let back = apply_reduction(&h2, &dup.inverse_on(&h).unwrap()).unwrap();
        assert_eq!(back, h);
    }

    #[test]
    fn duplicate_event_copies_neighborhood() {
        let h = make_cycle_bigraph(4).unwrap();
        let h2 = apply_reduction(&h, &ReductionOp::DuplicateEvent { event: 3, position: 4 }).unwrap();
        assert_eq!(h2.event_neighbors(4), h.event_neighbors(3));
    }

    #[test]
    fn delete_edge_guard() {
        let h = make_cycle_bigraph(4).unwrap();
        assert!(apply_reduction(&h, &ReductionOp::DeleteEdge { event: 0, variable: 0 }).is_err());
        let h43 = make_combinatorial_bigraph(4, 3).unwrap();
        assert!(apply_reduction(&h43, &ReductionOp::DeleteEdge { event: 0, variable: 0 }).is_ok());
    }

    #[test]
    fn normalize_examples() {
        let h = make_cycle_bigraph(4).unwrap();
        let mut doubled = h.clone();
        for j in 0..4 {
            let op = ReductionOp::DuplicateVariable {
                variable: j,
                position: doubled.n_variables(),
                events: h.variable_neighbors(j).to_vec(),
            };
            doubled = apply_reduction(&doubled, &op).unwrap();
        }
        assert_eq!(normalize(&doubled).normal, h);
        let isolated = Bigraph::from_neighborhoods(3, &[vec![0, 1], vec![1]]).unwrap();
        let n = normalize(&isolated);
        assert_eq!((n.normal.n_events(), n.normal.n_variables()), (1, 0));
        let h43 = make_combinatorial_bigraph(4, 3).unwrap();
        let n43 = normalize(&h43);
        assert_eq!(n43.normal, h43);
        assert!(n43.trace.is_empty());
    }

    fn arb_bigraph() -> impl Strategy<Value = Bigraph> {
        (1usize..6, 1usize..6).prop_flat_map(|(n, m)| {
            prop::collection::vec(prop::collection::vec(any::<bool>(), m), n).prop_map(move |rows| {
                let nbrs: Vec<Vec<usize>> = rows
                    .iter()
                    .map(|r| (0..m).filter(|&j| r[j]).collect())
                    .collect();
                Bigraph::from_neighborhoods(m, &nbrs).unwrap()
            })
        })
    }

    fn arb_op(h: &Bigraph, pick: &[usize]) -> ReductionOp {
        let n = h.n_events();
        let m = h.n_variables();
        let a = pick[0];
        let b = pick[1];
        match pick[2] % 10 {
            0 => ReductionOp::DeleteVariable { variable: a % m },
            1 => ReductionOp::InsertVariable {
                position: a % (m + 1),
                events: vec![b % n],
            },
            2 => ReductionOp::DuplicateEvent {
                event: a % n,
                position: b % (n + 1),
            },
            3 => ReductionOp::MergeDuplicateEvent {
                event: a % n,
                duplicate: b % n,
            },
            4 => ReductionOp::DuplicateVariable {
                variable: a % m,
                position: b % (m + 1),
                events: h.variable_neighbors(a % m).iter().copied().step_by(2).collect(),
            },
            5 => ReductionOp::MergeVariable {
                variable: a % m,
                into: b % m,
            },
            6 => ReductionOp::DeleteEdge {
                event: a % n,
                variable: b % m,
            },
            7 => ReductionOp::InsertEdge {
                event: a % n,
                variable: b % m,
            },
            8 => ReductionOp::DeleteEvent { event: a % n },
            _ => ReductionOp::InsertEvent {
                position: a % (n + 1),
                variables: h.event_neighbors(b % n).to_vec(),
            },
        }
    }

    proptest! {
        #[test]
        fn inverse_round_trip(h in arb_bigraph(), pick in prop::collection::vec(0usize..100, 3)) {
            let op = arb_op(&h, &pick);
            if let Ok(out) = apply_reduction(&h, &op) {
                let inv = op.inverse_on(&h).unwrap();
                prop_assert_eq!(inv.kind(), op.kind());
                prop_assert_ne!(inv.is_inverse(), op.is_inverse());
                prop_assert_eq!(apply_reduction(&out, &inv).unwrap(), h);
            }
        }

        #[test]
        fn normalize_is_idempotent(h in arb_bigraph()) {
            let n = normalize(&h).normal;
            prop_assert!(normalize(&n).trace.is_empty());
            prop_assert!(n.n_events() <= h.n_events());
            prop_assert!((0..n.n_variables()).all(|j| n.variable_degree(j) >= 2));
        }
    }
}
