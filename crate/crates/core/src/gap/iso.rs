//! Bigraph isomorphism and sparsification matching for catalog lookups.

use crate::error::{Error, Result};
use crate::graph::Bigraph;

/// Events above which isomorphism testing is refused.
pub const ISO_EVENT_CAP: usize = 40;

fn var_masks(h: &Bigraph) -> Vec<u64> {
    (0..h.n_variables())
        .map(|j| h.variable_neighbors(j).iter().fold(0u64, |m, &i| m | 1 << i))
        .collect()
}

fn sorted_degrees(h: &Bigraph) -> (Vec<usize>, Vec<usize>) {
    let mut e: Vec<usize> = (0..h.n_events()).map(|i| h.event_neighbors(i).len()).collect();
    let mut v: Vec<usize> = (0..h.n_variables()).map(|j| h.variable_degree(j)).collect();
    e.sort_unstable();
    v.sort_unstable();
    (e, v)
}

/// Whether `a` and `b` are isomorphic as bigraphs (event and variable
/// relabelings preserving incidence).
pub fn bigraph_isomorphic(a: &Bigraph, b: &Bigraph) -> Result<bool> {
    if a.n_events() != b.n_events() || a.n_variables() != b.n_variables() || a.edges().len() != b.edges().len() {
        return Ok(false);
    }
    if a.n_events() > ISO_EVENT_CAP {
        return Err(Error::CapExceeded {
            what: "events for isomorphism",
            limit: ISO_EVENT_CAP as u64,
            needed: a.n_events() as u64,
        });
    }
    if sorted_degrees(a) != sorted_degrees(b) {
        return Ok(false);
    }
    let va = var_masks(a);
    let vb = var_masks(b);
    let n = a.n_events();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    Ok(extend(a, b, &va, &vb, 0, &mut map, &mut used))
}

/// Multisets of variable neighborhoods restricted to the mapped events agree.
fn consistent(va: &[u64], vb: &[u64], map: &[usize], depth: usize) -> bool {
    let mut ra: Vec<u64> = va
        .iter()
        .map(|&m| (0..depth).filter(|&i| m >> i & 1 == 1).fold(0u64, |acc, i| acc | 1 << map[i]))
        .collect();
    let mask_b: u64 = (0..depth).fold(0u64, |acc, i| acc | 1 << map[i]);
    let mut rb: Vec<u64> = vb.iter().map(|&m| m & mask_b).collect();
    ra.sort_unstable();
    rb.sort_unstable();
    ra == rb
}

fn extend(a: &Bigraph, b: &Bigraph, va: &[u64], vb: &[u64], depth: usize, map: &mut [usize], used: &mut [bool]) -> bool {
    if depth == map.len() {
        return true;
    }
    let deg = a.event_neighbors(depth).len();
    for t in 0..map.len() {
        if used[t] || b.event_neighbors(t).len() != deg {
            continue;
        }
        map[depth] = t;
        used[t] = true;
        if consistent(va, vb, map, depth + 1) && extend(a, b, va, vb, depth + 1, map, used) {
            return true;
        }
        used[t] = false;
    }
    map[depth] = usize::MAX;
    false
}

/// Whether `h` is a sparsification of `target` up to relabeling: same events,
/// an injective variable map, edges mapped into edges, equal base graphs.
/// Both base graphs must be complete, which reduces the event map to a
/// bipartite matching. `variable_symmetric` lets the variable map be fixed
/// to the identity when `target` is invariant under variable permutations.
pub fn is_complete_sparsification(h: &Bigraph, target: &Bigraph, variable_symmetric: bool) -> bool {
    let n = h.n_events();
    let m = h.n_variables();
    let mt = target.n_variables();
    if n != target.n_events() || m > mt {
        return false;
    }
    let complete = |g: &crate::graph::DependencyGraph| g.n_edges() == n * (n - 1) / 2;
    if !complete(&h.base_graph()) || !complete(&target.base_graph()) {
        return false;
    }
    let targets: Vec<Vec<usize>> = (0..n).map(|i| target.event_neighbors(i).to_vec()).collect();
    let try_map = |tau: &[usize]| -> bool {
        let allowed: Vec<Vec<usize>> = (0..n)
            .map(|i| {
                let img: Vec<usize> = h.event_neighbors(i).iter().map(|&j| tau[j]).collect();
                (0..n)
                    .filter(|&t| img.iter().all(|x| targets[t].binary_search(x).is_ok()))
                    .collect()
            })
            .collect();
        perfect_matching(&allowed, n)
    };
    if variable_symmetric {
        let tau: Vec<usize> = (0..m).collect();
        return try_map(&tau);
    }
    let mut tau = Vec::with_capacity(m);
    let mut used = vec![false; mt];
    injections(m, mt, &mut tau, &mut used, &try_map)
}

fn injections(m: usize, mt: usize, tau: &mut Vec<usize>, used: &mut [bool], f: &dyn Fn(&[usize]) -> bool) -> bool {
    if tau.len() == m {
        return f(tau);
    }
    for t in 0..mt {
        if !used[t] {
            used[t] = true;
            tau.push(t);
            let ok = injections(m, mt, tau, used, f);
            tau.pop();
            used[t] = false;
            if ok {
                return true;
            }
        }
    }
    false
}

/// Kuhn's augmenting-path matching; true when every left vertex is matched.
fn perfect_matching(allowed: &[Vec<usize>], n_right: usize) -> bool {
    fn augment(u: usize, allowed: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &v in &allowed[u] {
            if !seen[v] {
                seen[v] = true;
                if owner[v].is_none_or(|w| augment(w, allowed, seen, owner)) {
                    owner[v] = Some(u);
                    return true;
                }
            }
        }
        false
    }
    let mut owner = vec![None; n_right];
    (0..allowed.len()).all(|u| {
        let mut seen = vec![false; n_right];
        augment(u, allowed, &mut seen, &mut owner)
    })
}
