//! Exact variable boundary for bigraphs whose base graph is a tree.

use serde::{Deserialize, Serialize};

use crate::boundary::{bisect_last_true, BoundaryResult, Method};
use crate::error::{Error, Result};
use crate::graph::{Bigraph, DependencyGraph};
use crate::probvec::ProbVec;
use crate::witness::{BoxSpec, BoxWitness, Interval};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const RESIDUAL_TOL: f64 = 1e-12;
const MAX_ITER: usize = 200;
/// Root-equation residual accepted when building a witness.
pub const WITNESS_TOL: f64 = 1e-9;

/// A tree with a designated root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootedTree {
    pub root: usize,
    pub parent: Vec<Option<usize>>,
    pub children: Vec<Vec<usize>>,
    /// Vertices with every child before its parent.
    pub post_order: Vec<usize>,
}

impl RootedTree {
    pub fn new(g: &DependencyGraph, root: usize) -> Result<Self> {
        if !g.is_connected() {
            return Err(Error::Disconnected);
        }
        if !g.is_tree() {
            return Err(Error::NotApplicable("base graph is not a tree".into()));
        }
        if root >= g.n_vertices() {
            return Err(Error::invalid(format!("root {root} out of range")));
        }
        let n = g.n_vertices();
        let mut parent = vec![None; n];
        let mut children = vec![Vec::new(); n];
        let mut pre = vec![root];
        let mut stack = vec![root];
        let mut seen = vec![false; n];
        seen[root] = true;
        while let Some(v) = stack.pop() {
            for &w in g.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(v);
                    children[v].push(w);
                    pre.push(w);
                    stack.push(w);
                }
            }
        }
        pre.reverse();
        Ok(RootedTree {
            root,
            parent,
            children,
            post_order: pre,
        })
    }

    /// Rooted at the maximum-degree vertex, lowest index on ties.
    pub fn default_root(g: &DependencyGraph) -> Result<Self> {
        let n = g.n_vertices();
        let root = (0..n).max_by_key(|&v| (g.degree(v), std::cmp::Reverse(v))).unwrap_or(0);
        Self::new(g, root)
    }
}

/// Forward-recursion values at a given scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeSolveState {
    /// `q[root]` is `λ p_root / ∏(1 - q_child)`, which equals 1 on the boundary.
    pub q: Vec<f64>,
    pub lambda: f64,
    /// `∏_{children of root}(1 - q_k) - λ p_root`.
    pub root_residual: f64,
}

/// Runs the recursion bottom-up; `None` once some non-root `q_i` leaves `(0, 1)`.
pub fn tree_solve_state(tree: &RootedTree, direction: &[f64], lambda: f64) -> Option<TreeSolveState> {
    let mut q = vec![0.0; direction.len()];
    for &v in &tree.post_order {
        let prod: f64 = tree.children[v].iter().map(|&k| 1.0 - q[k]).product();
        q[v] = lambda * direction[v] / prod;
        if v != tree.root && !(q[v] > 0.0 && q[v] < 1.0) {
            return None;
        }
    }
    let r = tree.root;
    let prod: f64 = tree.children[r].iter().map(|&k| 1.0 - q[k]).product();
    Some(TreeSolveState {
        root_residual: prod - lambda * direction[r],
        q,
        lambda,
    })
}

/// `λ*` with `λ* · direction` on the variable boundary of a treelike bigraph.
pub fn tree_boundary_lambda(h: &Bigraph, direction: &ProbVec, tol: f64) -> Result<BoundaryResult> {
    let g = h.base_graph();
    let tree = RootedTree::default_root(&g)?;
    tree_boundary_lambda_rooted(&tree, direction, tol)
}

/// Same as [`tree_boundary_lambda`] with an explicit rooting.
pub fn tree_boundary_lambda_rooted(tree: &RootedTree, direction: &ProbVec, tol: f64) -> Result<BoundaryResult> {
    direction.expect_len(tree.parent.len())?;
    let d = direction.as_slice();
    let valid = |lambda: f64| tree_solve_state(tree, d, lambda).is_some_and(|s| s.root_residual > 0.0);
    let residual = |lambda: f64| {
        tree_solve_state(tree, d, lambda)
            .map(|s| s.root_residual.abs())
            .unwrap_or(f64::INFINITY)
    };
    let hi = 1.0 / direction.max();
    let mut lo = 0.5 / direction.sum();
    while !valid(lo) {
        lo *= 0.5;
        if lo < 1e-300 {
            return Err(Error::NonConvergence {
                iterations: 0,
                detail: "no valid lower bracket".into(),
            });
        }
    }
    let (lo, _) = bisect_last_true(lo, hi, tol, RESIDUAL_TOL, MAX_ITER, valid, residual)?;
    BoundaryResult::new(direction, lo, Method::Tree, residual(lo))
}

/// The exclusive box construction realising a boundary vector.
///
/// Each child `k` owns the variable on its parent edge: event `k` takes
/// `x ≤ q_k` there and its parent takes `x > q_k`. The root is shrunk along
/// its first child axis when its measure slightly exceeds the target.
pub fn tree_witness(h: &Bigraph, boundary: &ProbVec) -> Result<BoxWitness> {
    let g = h.base_graph();
    let tree = RootedTree::default_root(&g)?;
    boundary.expect_len(h.n_events())?;
    let state = tree_solve_state(&tree, boundary.as_slice(), 1.0)
        .ok_or_else(|| Error::invalid("boundary vector leaves the recursion domain"))?;
    if state.root_residual.abs() > WITNESS_TOL {
        return Err(Error::invalid(format!(
            "not a boundary vector: root residual {}",
            state.root_residual
        )));
    }
    let q = &state.q;
    let edge_var = |k: usize| -> usize {
        let p = tree.parent[k].expect("non-root");
        h.shared_variables(k, p)[0]
    };
    let mut events: Vec<BoxSpec> = vec![BoxSpec::new(); h.n_events()];
    for v in 0..h.n_events() {
        if tree.parent[v].is_some() {
            events[v].insert(edge_var(v), Interval::closed(0.0, q[v]));
        }
        for &k in &tree.children[v] {
            events[v].insert(edge_var(k), Interval::left_open(q[k], 1.0));
        }
    }
    let r = tree.root;
    let target = boundary[r];
    if let Some(&k0) = tree.children[r].first() {
        let rest: f64 = tree.children[r][1..].iter().map(|&k| 1.0 - q[k]).product();
        let hi = q[k0] + target / rest;
        if hi < 1.0 {
            events[r].insert(edge_var(k0), Interval::left_open(q[k0], hi));
        }
    } else if target < 1.0 {
        let j = *h
            .event_neighbors(r)
            .first()
            .ok_or_else(|| Error::invalid("single event without variables cannot be shrunk"))?;
        events[r].insert(j, Interval::closed(0.0, target));
    }
    Ok(BoxWitness {
        n_variables: h.n_variables(),
        events: events.into_iter().map(|b| vec![b]).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::random_tree_bigraph;
    use crate::shearer::abstract_boundary_lambda;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn path3() -> Bigraph {
        Bigraph::from_neighborhoods(2, &[vec![0], vec![0, 1], vec![1]]).unwrap()
    }

    fn star3() -> Bigraph {
        Bigraph::from_neighborhoods(3, &[vec![0, 1, 2], vec![0], vec![1], vec![2]]).unwrap()
    }

    #[test]
    fn shared_pair() {
        let h = Bigraph::new(2, 1, vec![(0, 0), (1, 0)]).unwrap();
        let r = tree_boundary_lambda(&h, &ProbVec::uniform(2, 1.0).unwrap(), DEFAULT_TOL).unwrap();
        assert_abs_diff_eq!(r.lambda, 0.5, epsilon = 1e-10);
        let w = tree_witness(&h, &r.boundary_vector).unwrap();
        let ev = w.evaluate(&h).unwrap();
        assert!(ev.exclusive && w.adjacent_overlap_free(&h));
        assert_abs_diff_eq!(ev.union, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn path_matches_quadratic_root() {
        let r = tree_boundary_lambda(&path3(), &ProbVec::uniform(3, 1.0).unwrap(), DEFAULT_TOL).unwrap();
        assert_abs_diff_eq!(r.lambda, 0.3819660112501051, epsilon = 1e-10);
        assert!(r.residual <= RESIDUAL_TOL);
        assert_eq!(r.method, Method::Tree);
    }

    #[test]
    fn star_matches_scalar_root() {
        let r = tree_boundary_lambda(&star3(), &ProbVec::uniform(4, 1.0).unwrap(), DEFAULT_TOL).unwrap();
        assert_abs_diff_eq!(r.lambda, 0.31767219617198067, epsilon = 1e-10);
    }

    #[test]
    fn rejects_non_tree() {
        let h = crate::graph::make_cycle_bigraph(4).unwrap();
        let err = tree_boundary_lambda(&h, &ProbVec::uniform(4, 1.0).unwrap(), DEFAULT_TOL).unwrap_err();
        assert!(matches!(err, Error::NotApplicable(_)));
        let split = Bigraph::new(2, 2, vec![(0, 0), (1, 1)]).unwrap();
        assert_eq!(
            tree_boundary_lambda(&split, &ProbVec::uniform(2, 1.0).unwrap(), DEFAULT_TOL).unwrap_err(),
            Error::Disconnected
        );
    }

    #[test]
    fn path_witness_is_exclusive_cover() {
        let h = path3();
        let r = tree_boundary_lambda(&h, &ProbVec::uniform(3, 1.0).unwrap(), DEFAULT_TOL).unwrap();
        let w = tree_witness(&h, &r.boundary_vector).unwrap();
        assert!(w.adjacent_overlap_free(&h));
        let ev = w.evaluate(&h).unwrap();
        for (m, t) in ev.measures.iter().zip(r.boundary_vector.as_slice()) {
            assert_abs_diff_eq!(m, t, epsilon = 1e-9);
        }
        assert_abs_diff_eq!(ev.union, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn witness_rejects_interior_vector() {
        assert!(tree_witness(&path3(), &ProbVec::uniform(3, 0.2).unwrap()).is_err());
    }

    #[test]
    fn single_event() {
        let h = Bigraph::new(1, 1, vec![(0, 0)]).unwrap();
        let r = tree_boundary_lambda(&h, &ProbVec::new(vec![0.5]).unwrap(), DEFAULT_TOL).unwrap();
        assert_abs_diff_eq!(r.lambda, 2.0, epsilon = 1e-9);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn tree_equals_shearer(n in 2usize..10, seed in any::<u64>(), dir in prop::collection::vec(0.05f64..1.0, 10)) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let h = random_tree_bigraph(n, &mut rng);
            let d = ProbVec::new(dir[..n].to_vec()).unwrap();
            let t = tree_boundary_lambda(&h, &d, DEFAULT_TOL).unwrap();
            let s = abstract_boundary_lambda(&h.base_graph(), &d, 1e-12).unwrap();
            prop_assert!((t.lambda - s.lambda).abs() <= 1e-9);
        }

        #[test]
        fn root_invariance(n in 2usize..9, seed in any::<u64>(), root in 0usize..9) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let h = random_tree_bigraph(n, &mut rng);
            let g = h.base_graph();
            let d = ProbVec::uniform(n, 1.0).unwrap();
            let a = tree_boundary_lambda(&h, &d, DEFAULT_TOL).unwrap();
            let b = tree_boundary_lambda_rooted(&RootedTree::new(&g, root % n).unwrap(), &d, DEFAULT_TOL).unwrap();
            prop_assert!((a.lambda - b.lambda).abs() <= 1e-9);
        }

        #[test]
        fn homogeneity_and_interiority(n in 2usize..9, seed in any::<u64>(), c in 0.2f64..5.0) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let h = random_tree_bigraph(n, &mut rng);
            let d = ProbVec::uniform(n, 1.0).unwrap();
            let a = tree_boundary_lambda(&h, &d, DEFAULT_TOL).unwrap();
            let b = tree_boundary_lambda(&h, &d.scaled(c).unwrap(), DEFAULT_TOL).unwrap();
            prop_assert!((a.lambda - c * b.lambda).abs() <= 1e-8);
            let tree = RootedTree::default_root(&h.base_graph()).unwrap();
            let st = tree_solve_state(&tree, d.as_slice(), a.lambda - 1e-8).unwrap();
            prop_assert!(st.q.iter().enumerate().all(|(v, &x)| v == tree.root || (x > 0.0 && x < 1.0)));
        }

        #[test]
        fn witness_exclusive(n in 2usize..9, seed in any::<u64>(), dir in prop::collection::vec(0.05f64..1.0, 9)) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let h = random_tree_bigraph(n, &mut rng);
            let d = ProbVec::new(dir[..n].to_vec()).unwrap();
            let r = tree_boundary_lambda(&h, &d, DEFAULT_TOL).unwrap();
            let w = tree_witness(&h, &r.boundary_vector).unwrap();
            prop_assert!(w.adjacent_overlap_free(&h));
            let ev = w.evaluate(&h).unwrap();
            prop_assert!(ev.exclusive);
            for (m, t) in ev.measures.iter().zip(r.boundary_vector.as_slice()) {
                prop_assert!((m - t).abs() <= 1e-9);
            }
        }
    }
}
