//! Exact variable boundary for cyclic bigraphs via the chain recurrence.

use serde::{Deserialize, Serialize};

use crate::boundary::{bisect_last_true, BoundaryResult, Method};
use crate::discrete::DiscreteCylinderSet;
use crate::error::{Error, Result};
use crate::graph::{make_cycle_bigraph, Bigraph};
use crate::probvec::ProbVec;

pub const DEFAULT_TOL: f64 = 1e-12;
pub const RESIDUAL_TOL: f64 = 1e-12;
const MAX_ITER: usize = 200;
/// Relative offset of the left probe certifying the smallest root.
const LEFT_PROBE: f64 = 1e-6;
/// Terminal residual accepted when building a witness.
pub const WITNESS_TOL: f64 = 1e-9;

/// Chain values for one rotation at one scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleChain {
    pub rotation: usize,
    /// `b_1, ..., b_{n-1}`.
    pub b: Vec<f64>,
    pub lambda: f64,
    /// `b_{n-1} - (1 - λ p_{rotation-1})`.
    pub residual: f64,
}

/// Chain for rotation `i`; `None` once some `b_k` leaves `(0, 1)`.
pub fn cycle_chain(p: &[f64], i: usize, lambda: f64) -> Option<CycleChain> {
    let n = p.len();
    let r = |k: usize| p[(i + k) % n];
    let mut b = Vec::with_capacity(n - 1);
    let mut prev = 0.0;
    for k in 0..n - 1 {
        let v = lambda * r(k) / (1.0 - prev);
        if !(v > 0.0 && v < 1.0) {
            return None;
        }
        b.push(v);
        prev = v;
    }
    let residual = prev - (1.0 - lambda * r(n - 1));
    Some(CycleChain {
        rotation: i,
        b,
        lambda,
        residual,
    })
}

fn check_cycle_len(p: &ProbVec) -> Result<()> {
    if p.len() < 3 {
        return Err(Error::invalid("cyclic bigraphs need n >= 3"));
    }
    Ok(())
}

/// Smallest `λ > 0` solving the chain for rotation `i`, if one exists with
/// every `b_k` in `(0, 1)`.
pub fn cycle_chain_solve(p: &ProbVec, i: usize, tol: f64) -> Option<f64> {
    if p.len() < 3 || i >= p.len() || tol.is_nan() || tol <= 0.0 {
        return None;
    }
    let d = p.as_slice();
    let valid = |lambda: f64| cycle_chain(d, i, lambda).is_some_and(|c| c.residual < 0.0);
    let residual = |lambda: f64| cycle_chain(d, i, lambda).map_or(f64::INFINITY, |c| c.residual.abs());
    let hi = 1.0 / p.max();
    let mut lo = 0.5 / p.sum();
    while !valid(lo) {
        lo *= 0.5;
        if lo < 1e-300 {
            return None;
        }
    }
    let (lo, _) = bisect_last_true(lo, hi, tol, RESIDUAL_TOL, MAX_ITER, valid, residual).ok()?;
    // The residual increases with λ, so a negative left probe certifies that
    // no smaller root exists.
    if !valid(lo * (1.0 - LEFT_PROBE)) || residual(lo) > RESIDUAL_TOL {
        return None;
    }
    Some(lo)
}

/// `λ₀ = min_i λ_i` over all rotations; lowest rotation wins ties.
pub fn cycle_boundary_lambda(p: &ProbVec, tol: f64) -> Result<BoundaryResult> {
    check_cycle_len(p)?;
    let mut best: Option<(usize, f64)> = None;
    for i in 0..p.len() {
        if let Some(l) = cycle_chain_solve(p, i, tol) {
            if best.is_none_or(|(_, b)| l < b) {
                best = Some((i, l));
            }
        }
    }
    let (rot, lambda) = best.ok_or_else(|| Error::NonConvergence {
        iterations: MAX_ITER,
        detail: "no rotation admits a chain solution".into(),
    })?;
    let residual = cycle_chain(p.as_slice(), rot, lambda).map_or(f64::INFINITY, |c| c.residual.abs());
    let mut r = BoundaryResult::new(p, lambda, Method::Cycle, residual)?;
    r.rotation = Some(rot);
    Ok(r)
}

/// Boundary of a bigraph whose normal form is a cycle, in its event order.
pub fn cycle_boundary_lambda_bigraph(h: &Bigraph, direction: &ProbVec, tol: f64) -> Result<BoundaryResult> {
    direction.expect_len(h.n_events())?;
    let g = h.base_graph();
    let order = g
        .cycle_order()
        .filter(|_| (0..h.n_variables()).all(|j| h.variable_degree(j) <= 2))
        .ok_or_else(|| Error::NotApplicable("bigraph is not cyclic".into()))?;
    let permuted = ProbVec::new(order.iter().map(|&v| direction[v]).collect())?;
    let r = cycle_boundary_lambda(&permuted, tol)?;
    let mut out = BoundaryResult::new(direction, r.lambda, Method::Cycle, r.residual)?;
    out.rotation = r.rotation.map(|k| order[k]);
    Ok(out)
}

/// The three-cycle closed form `min_i 2 / (s + sqrt(s² - 4 p_i p_{i-1}))`
/// with `s = p_1 + p_2 + p_3`.
pub fn triangle_closed_form(p: &ProbVec) -> Result<f64> {
    p.expect_len(3)?;
    let s = p.sum();
    let mut best = f64::INFINITY;
    for i in 0..3 {
        let x = p[i] * p[(i + 2) % 3];
        let disc = s * s - 4.0 * x;
        if disc < 0.0 {
            return Err(Error::invalid(format!("negative discriminant {disc} at rotation {i}")));
        }
        best = best.min(2.0 / (s + disc.sqrt()));
    }
    Ok(best)
}

/// Cylinder set on `H_n` attaining `λ₀ p` with union 1.
///
/// The variable shared by events `i-1` and `i` is dropped (one interval).
/// Going round the chain from event `i`, each consecutive shared axis is cut
/// at `b_k`; event `i` takes the low part of the first cut, the last event
/// the high part of the last cut, and every other event the high part of
/// its left cut times the low part of its right cut.
pub fn cycle_boundary_witness(p: &ProbVec, result: &BoundaryResult) -> Result<DiscreteCylinderSet> {
    check_cycle_len(p)?;
    let n = p.len();
    let rot = result
        .rotation
        .ok_or_else(|| Error::invalid("boundary result carries no rotation"))?;
    let chain = cycle_chain(p.as_slice(), rot, result.lambda)
        .filter(|c| c.residual.abs() <= WITNESS_TOL)
        .ok_or_else(|| Error::invalid("boundary result does not solve the chain"))?;
    let h = make_cycle_bigraph(n)?;
    // Chain position of each event and cut of each variable.
    let pos = |e: usize| (e + n - rot) % n;
    let mut partitions = vec![vec![1.0]; n];
    for (k, &b) in chain.b.iter().enumerate() {
        partitions[(rot + k + 1) % n] = vec![b, 1.0 - b];
    }
    Ok(DiscreteCylinderSet::from_fn(&h, partitions, |e, idx| {
        // Event e uses variables e and e+1; in chain position t the left
        // variable is cut t-1 (absent for t = 0) and the right one is cut t.
        let vars = h.event_neighbors(e);
        let at = |j: usize| idx[vars.binary_search(&j).expect("own variable")];
        let t = pos(e);
        let left_ok = t == 0 || at(e) == 1;
        let right_ok = t == n - 1 || at((e + 1) % n) == 0;
        left_ok && right_ok
    }))
}

/// The exclusive `p = 1/4` construction
/// `A_i = {x_i ≥ 1/2, x_{i+1} < 1/2}` on `H_n`.
pub fn cycle_gapful_witness(n: usize) -> Result<DiscreteCylinderSet> {
    let h = make_cycle_bigraph(n)?;
    let partitions = vec![vec![0.5, 0.5]; n];
    Ok(DiscreteCylinderSet::from_fn(&h, partitions, |e, idx| {
        let vars = h.event_neighbors(e);
        let at = |j: usize| idx[vars.binary_search(&j).expect("own variable")];
        at(e) == 1 && at((e + 1) % n) == 0
    }))
}
