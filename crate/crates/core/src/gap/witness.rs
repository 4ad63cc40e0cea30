//! Exclusive cylinder constructions used as gap witnesses.

use crate::discrete::DiscreteCylinderSet;
use crate::error::{Error, Result};
use crate::graph::{make_combinatorial_bigraph, Bigraph};
use crate::probvec::ProbVec;

/// `A_i = {(i-1)/n ≤ x_j < i/n for all j ∈ N(i)}`: pairwise disjoint for
/// events sharing a variable, with `μ(A_i) = n^{-|N(i)|}`.
pub fn small_exclusive_witness(h: &Bigraph) -> DiscreteCylinderSet {
    let n = h.n_events();
    let partitions = vec![vec![1.0 / n as f64; n]; h.n_variables()];
    DiscreteCylinderSet::from_fn(h, partitions, |i, idx| idx.iter().all(|&k| k == i))
}

const SUM_TOL: f64 = 1e-9;

/// Exclusive covering cylinder set on `H_{4,3}` with measures `p`, `Σp = 1`.
///
/// With `p` sorted decreasingly into roles 1..4 on axes `X1..X4`:
/// role 3 is `X4 > 1/2, X1 ≤ 2p3`; role 4 is `X4 ≤ 1/2, X2 ≤ 2p4`; role 1 is
/// `(X4 ≤ 1/2, X2 > 2p4, X1 ≤ 2p3) ∪ (X4 > 1/2, X2 ≤ 2p4, X1 > 2p3)` padded
/// by a strip of `{X1 > 2p3, X2 > 2p4}`; role 2 is the rest of that region.
pub fn h43_witness(p: &ProbVec) -> Result<DiscreteCylinderSet> {
    p.expect_len(4)?;
    if (p.sum() - 1.0).abs() > SUM_TOL {
        return Err(Error::invalid(format!("probabilities must sum to 1, got {}", p.sum())));
    }
    let h = make_combinatorial_bigraph(4, 3)?;
    // Events in lexicographic order miss variables 3, 2, 1, 0.
    let missing = |e: usize| 3 - e;
    let mut order: Vec<usize> = (0..4).collect();
    order.sort_by(|&a, &b| p[b].total_cmp(&p[a]).then(a.cmp(&b)));
    let role_of_event = {
        let mut r = [0usize; 4];
        for (role, &e) in order.iter().enumerate() {
            r[e] = role;
        }
        r
    };
    let (p1, p3, p4) = (p[order[0]], p[order[2]], p[order[3]]);
    let strip = (p1 + 4.0 * p3 * p4 - p3 - p4).max(0.0);
    // Role axis (0-based X1..X4) -> variable: each role's missing axis is
    // the variable its event misses.
    let mut axis_var = [0usize; 4];
    axis_var[2] = missing(order[0]);
    axis_var[3] = missing(order[1]);
    axis_var[1] = missing(order[2]);
    axis_var[0] = missing(order[3]);
    let mut partitions = vec![Vec::new(); 4];
    partitions[axis_var[0]] = vec![2.0 * p3, strip / (1.0 - 2.0 * p4), 0.0];
    let used: f64 = partitions[axis_var[0]].iter().sum();
    partitions[axis_var[0]][2] = (1.0 - used).max(0.0);
    partitions[axis_var[1]] = vec![2.0 * p4, 1.0 - 2.0 * p4];
    partitions[axis_var[2]] = vec![1.0];
    partitions[axis_var[3]] = vec![0.5, 0.5];
    Ok(DiscreteCylinderSet::from_fn(&h, partitions, |e, idx| {
        let vars = h.event_neighbors(e);
        let at = |axis: usize| vars.binary_search(&axis_var[axis]).map(|a| idx[a]).unwrap_or(0);
        let (k1, k2, k4) = (at(0), at(1), at(3));
        match role_of_event[e] {
            0 => (k4 == 0 && k2 == 1 && k1 == 0) || (k4 == 1 && k2 == 0 && k1 >= 1) || (k1 == 1 && k2 == 1),
            1 => k1 == 2 && k2 == 1,
            2 => k4 == 1 && k1 == 0,
            _ => k4 == 0 && k2 == 0,
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_cycle_bigraph, make_hstar};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn small_witness_triangle() {
        let h = make_cycle_bigraph(3).unwrap();
        let ev = small_exclusive_witness(&h).evaluate(&h).unwrap();
        assert!(ev.exclusive);
        for m in ev.measures {
            assert_abs_diff_eq!(m, 1.0 / 9.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn small_witness_shared_pair_and_hstar() {
        let h = Bigraph::new(2, 1, vec![(0, 0), (1, 0)]).unwrap();
        let ev = small_exclusive_witness(&h).evaluate(&h).unwrap();
        assert_eq!(ev.measures, vec![0.5, 0.5]);
        assert!(ev.exclusive);
        let hs = make_hstar();
        let ev = small_exclusive_witness(&hs).evaluate(&hs).unwrap();
        assert!(ev.exclusive);
        for (i, m) in ev.measures.iter().enumerate() {
            assert_abs_diff_eq!(*m, 5f64.powi(-(hs.event_neighbors(i).len() as i32)), epsilon = 1e-15);
        }
    }

    #[test]
    fn h43_uniform_and_skewed() {
        let h = make_combinatorial_bigraph(4, 3).unwrap();
        for p in [[0.25; 4], [0.4, 0.3, 0.2, 0.1], [0.1, 0.2, 0.3, 0.4]] {
            let pv = ProbVec::new(p.to_vec()).unwrap();
            let ev = h43_witness(&pv).unwrap().evaluate(&h).unwrap();
            assert!(ev.exclusive);
            assert_abs_diff_eq!(ev.union, 1.0, epsilon = 1e-12);
            for (m, t) in ev.measures.iter().zip(&p) {
                assert_abs_diff_eq!(m, t, epsilon = 1e-12);
            }
        }
        assert!(h43_witness(&ProbVec::new(vec![0.3; 4]).unwrap()).is_err());
    }

    #[test]
    fn h43_core_measure_never_exceeds_largest() {
        let p = [0.4, 0.3, 0.2, 0.1];
        let core = p[2] + p[3] - 4.0 * p[2] * p[3];
        assert_abs_diff_eq!(core, 0.22, epsilon = 1e-15);
        assert!(core <= p[0]);
    }

    proptest! {
        #[test]
        fn h43_random(raw in prop::collection::vec(0.01f64..1.0, 4)) {
            let s: f64 = raw.iter().sum();
            let p: Vec<f64> = raw.iter().map(|x| x / s).collect();
            let h = make_combinatorial_bigraph(4, 3).unwrap();
            let ev = h43_witness(&ProbVec::new(p.clone()).unwrap()).unwrap().evaluate(&h).unwrap();
            prop_assert!(ev.exclusive);
            prop_assert!((ev.union - 1.0).abs() <= 1e-9);
            for (m, t) in ev.measures.iter().zip(&p) {
                prop_assert!((m - t).abs() <= 1e-9);
            }
        }

        #[test]
        fn small_witness_always_exclusive(rows in prop::collection::vec(prop::collection::vec(any::<bool>(), 4), 1..6)) {
            let nbrs: Vec<Vec<usize>> = rows.iter().map(|r| (0..4).filter(|&j| r[j]).collect()).collect();
            let h = Bigraph::from_neighborhoods(4, &nbrs).unwrap();
            prop_assert!(small_exclusive_witness(&h).evaluate(&h).unwrap().exclusive);
        }
    }
}
