//! Shearer's criterion for dependency graphs.
//!
//! For an independent set `S`, the alternating sum
//! `q_S = Σ_{T ⊇ S, T independent} (-1)^{|T|-|S|} Π_{i∈T} p_i`
//! equals `Π_{i∈S} p_i · Z(V \ N⁺(S))`, where `Z(U)` is the independence
//! polynomial of the induced subgraph on `U` evaluated at `-p`. A vector
//! lies in the abstract interior iff every `q_S` is positive.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::boundary::{bisect_last_true, BoundaryResult, Method};
use crate::error::{Error, Result};
use crate::graph::{mask_to_vec, DependencyGraph, DEFAULT_VERTEX_CAP};
use crate::probvec::ProbVec;

/// Default bracket tolerance for the abstract boundary scalar.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Default residual tolerance (`|min_S q_S|` at the returned scalar).
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-10;
pub const MAX_ITER: usize = 200;
/// Largest graph the quadratic superset-sum route accepts.
pub const DIRECT_VERTEX_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetValue {
    pub set: Vec<usize>,
    pub q: f64,
}

/// Alternating sums `q_S` for every independent set `S`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShearerReport {
    pub values: Vec<SetValue>,
    pub min_value: f64,
    pub min_set: Vec<usize>,
}

impl ShearerReport {
    fn from_masks(values: Vec<(u64, f64)>) -> Self {
        let (min_mask, min_value) = values
            .iter()
            .copied()
            .fold((0, f64::INFINITY), |acc, (m, q)| if q < acc.1 { (m, q) } else { acc });
        ShearerReport {
            values: values
                .into_iter()
                .map(|(m, q)| SetValue { set: mask_to_vec(m), q })
                .collect(),
            min_value,
            min_set: mask_to_vec(min_mask),
        }
    }

    pub fn q_empty(&self) -> f64 {
        self.values.iter().find(|v| v.set.is_empty()).map(|v| v.q).unwrap_or(f64::NAN)
    }

    /// `Σ_S q_S`, which telescopes to one.
    pub fn total(&self) -> f64 {
        compensated_sum(self.values.iter().map(|v| v.q))
    }

    pub fn is_interior(&self) -> bool {
        self.min_value > 0.0
    }
}

/// Neumaier compensated summation.
pub(crate) fn compensated_sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut c = 0.0f64;
    for x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            c += (sum - t) + x;
        } else {
            c += (x - t) + sum;
        }
        sum = t;
    }
    sum + c
}

/// Memoized evaluation of the independence polynomial at `-p` on vertex
/// subsets, via `Z(U) = Z(U - v) - p_v Z(U - N⁺(v))`.
struct IndependencePoly<'a> {
    masks: Vec<u64>,
    p: &'a [f64],
    memo: HashMap<u64, f64>,
}

impl<'a> IndependencePoly<'a> {
    fn new(g: &DependencyGraph, p: &'a [f64]) -> Result<Self> {
        Ok(IndependencePoly {
            masks: g.neighbor_masks()?,
            p,
            memo: HashMap::new(),
        })
    }

    fn eval(&mut self, u: u64) -> f64 {
        if u == 0 {
            return 1.0;
        }
        if let Some(&z) = self.memo.get(&u) {
            return z;
        }
        let v = u.trailing_zeros() as usize;
        let without = u & !(1 << v);
        let z = self.eval(without) - self.p[v] * self.eval(without & !self.masks[v]);
        self.memo.insert(u, z);
        z
    }
}

fn check_dims(g: &DependencyGraph, p: &ProbVec, cap: usize) -> Result<()> {
    p.expect_len(g.n_vertices())?;
    if g.n_vertices() > cap {
        return Err(Error::CapExceeded {
            what: "vertex count for Shearer evaluation",
            limit: cap as u64,
            needed: g.n_vertices() as u64,
        });
    }
    Ok(())
}

/// Alternating sums for every independent set via the recurrence.
pub fn shearer_values(g: &DependencyGraph, p: &ProbVec) -> Result<ShearerReport> {
    shearer_values_capped(g, p, DEFAULT_VERTEX_CAP)
}

pub fn shearer_values_capped(g: &DependencyGraph, p: &ProbVec, cap: usize) -> Result<ShearerReport> {
    check_dims(g, p, cap)?;
    let n = g.n_vertices();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let sets = g.independent_set_masks(cap)?;
    let mut poly = IndependencePoly::new(g, p.as_slice())?;
    let masks = poly.masks.clone();
    let values = sets
        .into_iter()
        .map(|s| {
            let closed = mask_to_vec(s).into_iter().fold(s, |m, v| m | masks[v]);
            let weight: f64 = mask_to_vec(s).into_iter().map(|v| p[v]).product();
            (s, weight * poly.eval(all & !closed))
        })
        .collect();
    Ok(ShearerReport::from_masks(values))
}

/// Alternating sums by direct summation over independent supersets, with
/// compensated accumulation. Quadratic in the number of independent sets.
pub fn shearer_values_direct(g: &DependencyGraph, p: &ProbVec) -> Result<ShearerReport> {
    check_dims(g, p, DIRECT_VERTEX_CAP)?;
    let sets = g.independent_set_masks(DIRECT_VERTEX_CAP)?;
    let weights: Vec<f64> = sets
        .iter()
        .map(|&t| mask_to_vec(t).into_iter().map(|v| p[v]).product())
        .collect();
    let values = sets
        .iter()
        .map(|&s| {
            let terms = sets.iter().zip(&weights).filter(|(&t, _)| t & s == s).map(|(&t, &w)| {
                if (t.count_ones() - s.count_ones()) % 2 == 0 {
                    w
                } else {
                    -w
                }
            });
            (s, compensated_sum(terms))
        })
        .collect();
    Ok(ShearerReport::from_masks(values))
}

/// Shearer's criterion: `p` is in the abstract interior iff all `q_S > 0`.
pub fn in_abstract_interior(g: &DependencyGraph, p: &ProbVec) -> Result<bool> {
    Ok(shearer_values(g, p)?.is_interior())
}

/// The unique `λ > 0` with `λ · direction` on the abstract boundary.
pub fn abstract_boundary_lambda(g: &DependencyGraph, direction: &ProbVec, tol: f64) -> Result<BoundaryResult> {
    check_dims(g, direction, DEFAULT_VERTEX_CAP)?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let d = direction.as_slice();
    let interior_at = |lambda: f64| -> bool {
        let p: Vec<f64> = d.iter().map(|x| x * lambda).collect();
        if p.iter().any(|&x| x >= 1.0) {
            return false;
        }
        in_abstract_interior(g, &ProbVec::new(p).unwrap()).unwrap_or(false)
    };
    let residual_at = |lambda: f64| -> f64 {
        let p = direction.scaled(lambda).unwrap();
        shearer_values(g, &p).map(|r| r.min_value.abs()).unwrap_or(f64::INFINITY)
    };
    let lo = 0.5 / direction.sum();
    let hi = d.iter().map(|x| 1.0 / x).fold(f64::INFINITY, f64::min);
    if !interior_at(lo) {
        return Err(Error::NonConvergence {
            iterations: 0,
            detail: "lower bracket is not interior".into(),
        });
    }
    let (lo, _) = bisect_last_true(lo, hi, tol, DEFAULT_RESIDUAL_TOL, MAX_ITER, interior_at, residual_at)?;
    BoundaryResult::new(direction, lo, Method::Shearer, residual_at(lo))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn pv(v: &[f64]) -> ProbVec {
        ProbVec::new(v.to_vec()).unwrap()
    }

    #[test]
    fn triangle_third_is_on_boundary() {
        let r = shearer_values(&DependencyGraph::complete(3), &pv(&[1.0 / 3.0; 3])).unwrap();
        assert_abs_diff_eq!(r.q_empty(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.total(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn square_quarter() {
        let r = shearer_values(&DependencyGraph::cycle(4).unwrap(), &pv(&[0.25; 4])).unwrap();
        assert_abs_diff_eq!(r.q_empty(), 0.125, epsilon = 1e-15);
        assert_eq!(r.values.len(), 7);
    }

    #[test]
    fn interior_examples() {
        let single = DependencyGraph::empty(1);
        assert!(in_abstract_interior(&single, &pv(&[0.5])).unwrap());
        assert!(!in_abstract_interior(&single, &pv(&[1.0])).unwrap());
        let c4 = DependencyGraph::cycle(4).unwrap();
        assert!(in_abstract_interior(&c4, &pv(&[0.29; 4])).unwrap());
        assert!(!in_abstract_interior(&c4, &pv(&[0.30; 4])).unwrap());
        let k5 = DependencyGraph::complete(5);
        assert!(in_abstract_interior(&k5, &pv(&[0.1, 0.2, 0.3, 0.15, 0.24])).unwrap());
        assert!(!in_abstract_interior(&k5, &pv(&[0.1, 0.2, 0.3, 0.15, 0.26])).unwrap());
    }

    #[test]
    fn boundary_scalars() {
        let tol = DEFAULT_TOL;
        let c4 = abstract_boundary_lambda(&DependencyGraph::cycle(4).unwrap(), &pv(&[1.0; 4]), tol).unwrap();
        assert_abs_diff_eq!(c4.lambda, 1.0 - 2f64.sqrt() / 2.0, epsilon = 1e-9);
        assert!(c4.residual <= DEFAULT_RESIDUAL_TOL);
        let c5 = abstract_boundary_lambda(&DependencyGraph::cycle(5).unwrap(), &pv(&[1.0; 5]), tol).unwrap();
        assert_abs_diff_eq!(c5.lambda, (5.0 - 5f64.sqrt()) / 10.0, epsilon = 1e-9);
        let k3 = abstract_boundary_lambda(&DependencyGraph::complete(3), &pv(&[1.0; 3]), tol).unwrap();
        assert_abs_diff_eq!(k3.lambda, 1.0 / 3.0, epsilon = 1e-9);
        assert_eq!(k3.method, Method::Shearer);
    }

    #[test]
    fn errors() {
        let c4 = DependencyGraph::cycle(4).unwrap();
        assert!(matches!(shearer_values(&c4, &pv(&[0.1; 3])), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(
            abstract_boundary_lambda(&DependencyGraph::empty(2), &pv(&[1.0; 2]), 1e-10),
            Err(Error::Disconnected)
        ));
        assert!(matches!(
            shearer_values(&DependencyGraph::empty(26), &ProbVec::uniform(26, 0.01).unwrap()),
            Err(Error::CapExceeded { .. })
        ));
        assert!(abstract_boundary_lambda(&c4, &pv(&[1.0; 4]), 0.0).is_err());
    }

    #[test]
    fn direct_route_matches_recurrence() {
        let g = DependencyGraph::new(6, [(0, 1), (1, 2), (2, 3), (3, 0), (3, 4), (4, 5), (1, 5)]).unwrap();
        let p = pv(&[0.1, 0.15, 0.2, 0.05, 0.12, 0.3]);
        let a = shearer_values(&g, &p).unwrap();
        let b = shearer_values_direct(&g, &p).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            assert_eq!(x.set, y.set);
            assert_abs_diff_eq!(x.q, y.q, epsilon = 1e-14);
        }
    }
}
