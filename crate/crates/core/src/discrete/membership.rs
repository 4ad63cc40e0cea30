use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boundary::{BoundaryResult, Method};
use crate::error::{Error, Result};
use crate::graph::Bigraph;
use crate::probvec::ProbVec;
use crate::shearer::{abstract_boundary_lambda, DEFAULT_TOL};

use super::cylinder::DiscreteCylinderSet;
use super::search::{for_each_canonical, resolutions, Compiled, Layout, LengthMap};
use super::{check_caps, pattern_seed, SearchConfig};

/// A covering cylinder set whose event measures stay below `q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipCertificate {
    pub cylinder_set: DiscreteCylinderSet,
    /// `q_i - measure_i` per event.
    pub slack: Vec<f64>,
    pub coverage_ok: bool,
}

/// Outcome of an exterior-membership search with the budget spent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipSearch {
    pub certificate: Option<MembershipCertificate>,
    /// Minimal covering patterns polished.
    pub patterns_examined: u64,
    pub starts_per_pattern: usize,
    /// Resolution caps per variable.
    pub resolution_caps: Vec<usize>,
}

/// Searches for a certificate that `q` lies in the exterior of `h`.
///
/// `None` means no certificate was found at resolution `deg(j)` per axis
/// within the polish budget; it is not a proof of interior membership.
pub fn exterior_membership(h: &Bigraph, q: &ProbVec, cfg: &SearchConfig) -> Result<Option<MembershipCertificate>> {
    Ok(exterior_membership_search(h, q, cfg)?.certificate)
}

pub fn exterior_membership_search(h: &Bigraph, q: &ProbVec, cfg: &SearchConfig) -> Result<MembershipSearch> {
    cfg.validate()?;
    q.expect_len(h.n_events())?;
    let caps: Vec<usize> = (0..h.n_variables()).map(|j| h.variable_degree(j).max(1)).collect();
    let mut out = MembershipSearch {
        certificate: None,
        patterns_examined: 0,
        starts_per_pattern: cfg.starts,
        resolution_caps: caps.clone(),
    };
    let qs = q.as_slice();
    if let Some(i) = qs.iter().position(|&x| x >= 1.0) {
        let partitions = vec![vec![1.0]; h.n_variables()];
        let set = DiscreteCylinderSet::from_fn(h, partitions, |e, _| e == i);
        out.certificate = Some(certify(h, set, qs)?);
        return Ok(out);
    }
    if q.sum() < 1.0 {
        return Ok(out);
    }
    check_caps(h, &caps, cfg)?;
    let nm = cfg.nelder_mead();
    for (ri, e) in resolutions(&caps).into_iter().enumerate() {
        let layout = Layout::new(h, &e)?;
        let mut patterns = Vec::new();
        for_each_canonical(h, &layout, &|_, _, _| true, &mut |t| {
            let c = Compiled::new(h, &e, t);
            if c.all_covered && c.is_minimal(h) {
                patterns.push(c);
            }
        });
        out.patterns_examined += patterns.len() as u64;
        let lm = LengthMap::new(&e, 0.0);
        let found = patterns.par_iter().enumerate().find_map_first(|(pi, c)| {
            let mut rng = ChaCha8Rng::seed_from_u64(pattern_seed(cfg.seed, ri, pi));
            let mut m = vec![0.0; qs.len()];
            let mut excess = |x: &[f64]| -> f64 {
                c.measures(&lm.lengths(x), &mut m);
                m.iter().zip(qs).map(|(a, b)| a - b).fold(f64::NEG_INFINITY, f64::max)
            };
            for s in 0..cfg.starts {
                let x0: Vec<f64> = if s == 0 {
                    vec![1.0; lm.dim]
                } else {
                    (0..lm.dim).map(|_| rng.gen_range(0.05..1.0)).collect()
                };
                let (x, v) = nm.minimize(&mut excess, &x0, 0.0);
                if v <= cfg.tol {
                    return Some(c.to_cylinder_set(h, lm.lengths(&x)));
                }
            }
            None
        });
        if let Some(set) = found {
            out.certificate = Some(certify(h, set, qs)?);
            return Ok(out);
        }
    }
    Ok(out)
}

fn certify(h: &Bigraph, set: DiscreteCylinderSet, q: &[f64]) -> Result<MembershipCertificate> {
    let ev = set.evaluate(h)?;
    Ok(MembershipCertificate {
        slack: q.iter().zip(&ev.measures).map(|(a, b)| a - b).collect(),
        coverage_ok: ev.union >= 1.0 - 1e-12,
        cylinder_set: set,
    })
}

/// Variable boundary along `direction` by bisection on exterior membership.
pub fn vlll_boundary_lambda_bruteforce(h: &Bigraph, direction: &ProbVec, cfg: &SearchConfig) -> Result<BoundaryResult> {
    cfg.validate()?;
    direction.expect_len(h.n_events())?;
    let g = h.base_graph();
    // Abstract interior points are interior for every conforming bigraph.
    let mut lo = if g.is_connected() {
        abstract_boundary_lambda(&g, direction, DEFAULT_TOL)?.lambda
    } else {
        0.5 / direction.sum()
    };
    let mut hi = 1.0 / direction.max();
    let member = |lambda: f64| -> Result<bool> {
        Ok(exterior_membership(h, &direction.scaled(lambda)?, cfg)?.is_some())
    };
    if !member(hi)? {
        return Err(Error::NonConvergence {
            iterations: 0,
            detail: "upper bracket is not exterior".into(),
        });
    }
    let mut iterations = 0;
    while hi - lo > cfg.lambda_tol {
        iterations += 1;
        if iterations > 64 {
            return Err(Error::NonConvergence {
                iterations,
                detail: "bisection bracket did not shrink".into(),
            });
        }
        let mid = 0.5 * (lo + hi);
        if member(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    BoundaryResult::new(direction, 0.5 * (lo + hi), Method::Discrete, hi - lo)
}
