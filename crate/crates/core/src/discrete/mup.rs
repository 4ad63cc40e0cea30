use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Bigraph;
use crate::probvec::ProbVec;

use super::cylinder::DiscreteCylinderSet;
use super::search::{for_each_canonical, resolutions, Compiled, Layout, LengthMap};
use super::{check_caps, pattern_seed, SearchConfig};

/// Non-exclusive patterns polished to report a concrete margin.
const NON_EXCLUSIVE_SAMPLE: usize = 32;
const CHUNK: usize = 64;
const PENALTIES: [f64; 2] = [10.0, 1000.0];

/// Worst-case union search outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MupReport {
    /// Best union found among feasible candidates.
    pub value: f64,
    pub cylinder_set: DiscreteCylinderSet,
    pub attained_by_exclusive: bool,
    pub exclusive_patterns: u64,
    pub non_exclusive_patterns: u64,
    pub polished_patterns: u64,
    /// Non-exclusive patterns discarded because `union <= sum(p) - overlap`
    /// and the incumbent already reaches `sum(p)`.
    pub pruned_by_bound: u64,
    /// Best union over polished non-exclusive candidates with positive overlap.
    pub best_non_exclusive: Option<f64>,
    /// `value - best_non_exclusive`.
    pub margin: Option<f64>,
}

/// `max μ(∪A)` over conforming cylinder sets with `μ(A) = p`.
pub fn mup_bruteforce(h: &Bigraph, p: &ProbVec, cfg: &SearchConfig) -> Result<f64> {
    Ok(mup_bruteforce_report(h, p, cfg)?.value)
}

struct Candidate {
    value: f64,
    overlap: f64,
    lengths: Vec<Vec<f64>>,
}

pub fn mup_bruteforce_report(h: &Bigraph, p: &ProbVec, cfg: &SearchConfig) -> Result<MupReport> {
    cfg.validate()?;
    p.expect_len(h.n_events())?;
    if !p.is_probability() {
        return Err(Error::invalid("event probabilities must not exceed 1"));
    }
    let caps: Vec<usize> = (0..h.n_variables()).map(|j| h.variable_degree(j) + 1).collect();
    check_caps(h, &caps, cfg)?;
    let ps = p.as_slice();
    let adjacent = h.base_graph().edges();
    let mut exclusive = Vec::new();
    let mut non_exclusive = Vec::new();
    let mut non_exclusive_count = 0u64;
    for (ri, e) in resolutions(&caps).into_iter().enumerate() {
        if e.iter().any(|&k| k as f64 * cfg.min_interval >= 1.0) {
            continue;
        }
        let layout = Layout::new(h, &e)?;
        let keep = |i: usize, t: u64, c: usize| -> bool {
            let full = if c == 64 { u64::MAX } else { (1u64 << c) - 1 };
            t != 0 && (ps[i] >= 1.0 || t != full)
        };
        let mut pi = 0usize;
        for_each_canonical(h, &layout, &keep, &mut |t| {
            let c = Compiled::new(h, &e, t);
            let seed = pattern_seed(cfg.seed, ri, pi);
            pi += 1;
            if c.is_exclusive(&adjacent) {
                exclusive.push((seed, c));
            } else {
                non_exclusive_count += 1;
                if (non_exclusive.len() as u64) <= cfg.polish_cap {
                    non_exclusive.push((seed, e.clone(), t.to_vec()));
                }
            }
        });
    }
    let n = ps.len();
    let sum_p = p.sum();
    let upper = sum_p.min(1.0);
    let reached = |v: f64| v >= upper - n as f64 * cfg.feasibility_tol - 1e-12;

    let mut polished = 0u64;
    let mut best: Option<(Candidate, usize, bool)> = None;
    for (ci, chunk) in exclusive.chunks(CHUNK).enumerate() {
        polished += chunk.len() as u64;
        let results: Vec<Option<Candidate>> = chunk.par_iter().map(|(s, c)| polish(c, ps, *s, upper, cfg)).collect();
        for (k, r) in results.into_iter().enumerate() {
            if let Some(cand) = r {
                if best.as_ref().is_none_or(|b| cand.value > b.0.value) {
                    best = Some((cand, ci * CHUNK + k, true));
                }
            }
        }
        if best.as_ref().is_some_and(|b| reached(b.0.value)) {
            break;
        }
    }

    let bound_decides = sum_p <= 1.0 && best.as_ref().is_some_and(|b| reached(b.0.value));
    let (to_polish, pruned) = if bound_decides {
        (NON_EXCLUSIVE_SAMPLE.min(non_exclusive.len()), non_exclusive_count)
    } else {
        if non_exclusive_count > cfg.polish_cap {
            return Err(Error::CapExceeded {
                what: "non-exclusive patterns to polish",
                limit: cfg.polish_cap,
                needed: non_exclusive_count,
            });
        }
        (non_exclusive.len(), 0)
    };
    polished += to_polish as u64;
    let results: Vec<Option<Candidate>> = non_exclusive[..to_polish]
        .par_iter()
        .map(|(s, e, t)| polish(&Compiled::new(h, e, t), ps, *s, upper, cfg))
        .collect();
    let mut best_non_exclusive: Option<f64> = None;
    for (k, r) in results.into_iter().enumerate() {
        if let Some(cand) = r {
            if cand.overlap > 0.0 {
                best_non_exclusive = Some(best_non_exclusive.map_or(cand.value, |b: f64| b.max(cand.value)));
            }
            if !bound_decides && best.as_ref().is_none_or(|b| cand.value > b.0.value) {
                best = Some((cand, k, false));
            }
        }
    }

    let (cand, idx, is_excl) = best.ok_or_else(|| Error::NonConvergence {
        iterations: polished as usize,
        detail: "no pattern reached the prescribed measures".into(),
    })?;
    let compiled = if is_excl {
        exclusive[idx].1.to_cylinder_set(h, cand.lengths)
    } else {
        let (_, e, t) = &non_exclusive[idx];
        Compiled::new(h, e, t).to_cylinder_set(h, cand.lengths)
    };
    Ok(MupReport {
        value: cand.value,
        cylinder_set: compiled,
        attained_by_exclusive: is_excl,
        exclusive_patterns: exclusive.len() as u64,
        non_exclusive_patterns: non_exclusive_count,
        polished_patterns: polished,
        pruned_by_bound: pruned,
        best_non_exclusive,
        margin: best_non_exclusive.map(|b| cand.value - b),
    })
}

/// Maximises the union subject to `measure = p` for one pattern.
fn polish(c: &Compiled, p: &[f64], seed: u64, upper: f64, cfg: &SearchConfig) -> Option<Candidate> {
    let lm = LengthMap::new(&c.resolution, cfg.min_interval);
    let nm = cfg.nelder_mead();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = p.len();
    let mut m = vec![0.0; n];
    let mut best: Option<(f64, Vec<f64>)> = None;
    for s in 0..cfg.starts {
        let mut x: Vec<f64> = if s == 0 {
            vec![1.0; lm.dim]
        } else {
            (0..lm.dim).map(|_| rng.gen_range(0.05..1.0)).collect()
        };
        for mu in PENALTIES {
            let f = |y: &[f64]| -> f64 {
                let mut mm = vec![0.0; n];
                let u = c.measures(&lm.lengths(y), &mut mm);
                -u + mu * mm.iter().zip(p).map(|(a, b)| (a - b).abs()).sum::<f64>()
            };
            x = nm.minimize(f, &x, f64::NEG_INFINITY).0;
        }
        if !refine(c, &lm, p, &mut x, cfg.feasibility_tol) {
            continue;
        }
        let u = c.measures(&lm.lengths(&x), &mut m);
        if best.as_ref().is_none_or(|b| u > b.0) {
            best = Some((u, x));
        }
        if best.as_ref().is_some_and(|b| b.0 >= upper - 1e-12) {
            break;
        }
    }
    let (value, x) = best?;
    let lengths = lm.lengths(&x);
    c.measures(&lengths, &mut m);
    let overlap = m.iter().sum::<f64>() - value;
    Some(Candidate { value, overlap, lengths })
}

/// Gauss–Newton on `measure(x) = p` with minimum-norm steps.
fn refine(c: &Compiled, lm: &LengthMap, p: &[f64], x: &mut [f64], tol: f64) -> bool {
    let n = p.len();
    let mut m = vec![0.0; n];
    let residual = |y: &[f64], m: &mut Vec<f64>| -> Vec<f64> {
        c.measures(&lm.lengths(y), m);
        m.iter().zip(p).map(|(a, b)| a - b).collect()
    };
    for _ in 0..30 {
        let r = residual(x, &mut m);
        let err = r.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        if err <= tol {
            return true;
        }
        let dim = x.len();
        let mut jac = vec![vec![0.0; dim]; n];
        for k in 0..dim {
            let step = 1e-7 * x[k].abs().max(1e-3);
            let mut y = x.to_vec();
            y[k] += step;
            let rk = residual(&y, &mut m);
            for i in 0..n {
                jac[i][k] = (rk[i] - r[i]) / step;
            }
        }
        let mut gram = vec![vec![0.0; n]; n];
        for a in 0..n {
            for b in 0..n {
                gram[a][b] = (0..dim).map(|k| jac[a][k] * jac[b][k]).sum::<f64>();
            }
            gram[a][a] += 1e-14;
        }
        let Some(y) = solve(gram, r) else {
            return false;
        };
        for k in 0..dim {
            x[k] -= (0..n).map(|i| jac[i][k] * y[i]).sum::<f64>();
        }
    }
    let r = residual(x, &mut m);
    r.iter().all(|v| v.abs() <= tol)
}

/// Gaussian elimination with partial pivoting.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let (top, bottom) = a.split_at_mut(row);
            let (pivot_row, cur) = (&top[col], &mut bottom[0]);
            let f = cur[col] / pivot_row[col];
            for (x, p) in cur[col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= f * p;
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}
