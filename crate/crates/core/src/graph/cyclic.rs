use serde::{Deserialize, Serialize};

use super::Bigraph;

/// An embedding of the canonical cyclic bigraph `H_L` into a bigraph.
///
/// Cycle position `k` is event `event_map[k]`; cycle variable `k` (shared by
/// positions `k - 1` and `k`) is `variable_map[k]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclicEmbedding {
    pub event_map: Vec<usize>,
    pub variable_map: Vec<usize>,
    pub cycle_length: usize,
}

impl CyclicEmbedding {
    /// Checks both containment conditions against `h`.
    pub fn is_valid_for(&self, h: &Bigraph) -> bool {
        let l = self.cycle_length;
        if l < 3 || self.event_map.len() != l || self.variable_map.len() != l {
            return false;
        }
        if !injective(&self.event_map, h.n_events()) || !injective(&self.variable_map, h.n_variables()) {
            return false;
        }
        // Condition 1: image variable k touches image event i iff i ∈ {k-1, k}.
        for (k, &v) in self.variable_map.iter().enumerate() {
            for (i, &e) in self.event_map.iter().enumerate() {
                let expected = i == k || (i + 1) % l == k;
                if h.has_edge(e, v) != expected {
                    return false;
                }
            }
        }
        // Condition 2: no other variable is shared by two image events.
        for v in 0..h.n_variables() {
            if self.variable_map.contains(&v) {
                continue;
            }
            let hits = self.event_map.iter().filter(|&&e| h.has_edge(e, v)).count();
            if hits >= 2 {
                return false;
            }
        }
        true
    }
}

fn injective(map: &[usize], bound: usize) -> bool {
    let mut seen = vec![false; bound];
    map.iter().all(|&x| x < bound && !std::mem::replace(&mut seen[x], true))
}

/// Searches for an embedded canonical cyclic bigraph, trying cycle lengths
/// from 3 upwards. The first embedding in index order is returned.
pub fn contains_cyclic(h: &Bigraph) -> Option<CyclicEmbedding> {
    let n = h.n_events();
    for len in 3..=n {
        for start in 0..n {
            let mut path = vec![start];
            let mut vars = Vec::new();
            if let Some(emb) = extend_embedding(h, len, &mut path, &mut vars) {
                return Some(emb);
            }
        }
    }
    None
}

/// The unique variable shared by `a` and `b`, if they share exactly one.
fn single_shared(h: &Bigraph, a: usize, b: usize) -> Option<usize> {
    let shared = h.shared_variables(a, b);
    (shared.len() == 1).then(|| shared[0])
}

fn extend_embedding(
    h: &Bigraph,
    len: usize,
    path: &mut Vec<usize>,
    vars: &mut Vec<usize>,
) -> Option<CyclicEmbedding> {
    let k = path.len();
    let start = path[0];
    if k == len {
        let closing = single_shared(h, path[k - 1], start)?;
        let mut variable_map = Vec::with_capacity(len);
        variable_map.push(closing);
        variable_map.extend_from_slice(vars);
        let emb = CyclicEmbedding {
            event_map: path.clone(),
            variable_map,
            cycle_length: len,
        };
        return emb.is_valid_for(h).then_some(emb);
    }
    let prev = path[k - 1];
    for next in start + 1..h.n_events() {
        if path.contains(&next) {
            continue;
        }
        // Reflection symmetry: the second event is below the last one.
        if k == len - 1 && len > 2 && next < path[1] {
            continue;
        }
        let Some(v) = single_shared(h, prev, next) else { continue };
        let closes_now = k == len - 1;
        let clash = path[..k - 1].iter().enumerate().any(|(idx, &e)| {
            let allowed = closes_now && idx == 0;
            !allowed && !h.shared_variables(e, next).is_empty()
        });
        if clash || vars.contains(&v) {
            continue;
        }
        path.push(next);
        vars.push(v);
        if let Some(emb) = extend_embedding(h, len, path, vars) {
            return Some(emb);
        }
        path.pop();
        vars.pop();
    }
    None
}

/// Finds events whose restriction is a cyclic bigraph: an induced cycle of
/// length at least four in the base graph, or a triangle whose three events
/// have no common variable. Cycle lengths are tried in increasing order.
pub fn cyclic_event_subset(h: &Bigraph) -> Option<Vec<usize>> {
    let g = h.base_graph();
    let n = g.n_vertices();
    for a in 0..n {
        for &b in g.neighbors(a).iter().filter(|&&b| b > a) {
            for &c in g.neighbors(b).iter().filter(|&&c| c > a && c != b) {
                if g.has_edge(a, c) {
                    let common = h
                        .event_neighbors(a)
                        .iter()
                        .any(|v| h.has_edge(b, *v) && h.has_edge(c, *v));
                    if !common {
                        return Some(vec![a, b, c]);
                    }
                }
            }
        }
    }
    for len in 4..=n {
        for start in 0..n {
            let mut path = vec![start];
            if extend_induced(&g, len, &mut path) {
                return Some(path);
            }
        }
    }
    None
}

fn extend_induced(g: &super::DependencyGraph, len: usize, path: &mut Vec<usize>) -> bool {
    let k = path.len();
    let start = path[0];
    if k == len {
        return g.has_edge(path[k - 1], start);
    }
    let prev = path[k - 1];
    for &next in g.neighbors(prev) {
        if next <= start || path.contains(&next) {
            continue;
        }
        let closes = k == len - 1;
        let chord = path[..k - 1]
            .iter()
            .enumerate()
            .any(|(idx, &e)| !(closes && idx == 0) && g.has_edge(e, next));
        if chord {
            continue;
        }
        path.push(next);
        if extend_induced(g, len, path) {
            return true;
        }
        path.pop();
    }
    false
}
