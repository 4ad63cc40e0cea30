//! Discretized program: cylinder-set evaluation, exterior membership by
//! exhaustive indicator search, boundary bisection and worst-case union.

mod cylinder;
mod membership;
mod mup;
mod optimize;
mod search;

pub use cylinder::{DiscreteCylinderSet, EventIndicator, Evaluation, EVAL_CELL_CAP, OVERLAP_TOL};
pub use membership::{
    exterior_membership, exterior_membership_search, vlll_boundary_lambda_bruteforce, MembershipCertificate,
    MembershipSearch,
};
pub use mup::{mup_bruteforce, mup_bruteforce_report, MupReport};
pub use optimize::NelderMead;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Bigraph;

/// Budget and tolerances for the discrete search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchConfig {
    /// Cap on the number of grid cells at the finest resolution.
    pub cell_cap: u64,
    /// Cap on the unpruned indicator space, summed over resolutions.
    pub space_cap: u64,
    /// Multi-start count for the continuous polish.
    pub starts: usize,
    /// Acceptance tolerance on `max_i (measure_i - q_i)`.
    pub tol: f64,
    /// Acceptance tolerance on `|measure_i - p_i|` for the union search.
    pub feasibility_tol: f64,
    /// Absolute bracket width at which boundary bisection stops.
    pub lambda_tol: f64,
    /// Function evaluations per polish start.
    pub max_evals: usize,
    /// Cap on the number of patterns polished in one union search.
    pub polish_cap: u64,
    /// Smallest interval length in the union search.
    pub min_interval: f64,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            cell_cap: 4096,
            space_cap: 1 << 32,
            starts: 16,
            tol: 1e-9,
            feasibility_tol: 1e-10,
            lambda_tol: 1e-3,
            max_evals: 4000,
            polish_cap: 200_000,
            min_interval: 1e-3,
            seed: 0x5eed,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.cell_cap == 0 || self.space_cap == 0 || self.starts == 0 || self.max_evals == 0 || self.polish_cap == 0 {
            return Err(Error::invalid("search caps must be positive"));
        }
        for (name, t) in [
            ("tol", self.tol),
            ("feasibility_tol", self.feasibility_tol),
            ("lambda_tol", self.lambda_tol),
        ] {
            if !(t > 0.0 && t <= 1e-2) {
                return Err(Error::invalid(format!("{name} must lie in (0, 1e-2]")));
            }
        }
        if !(self.min_interval >= 0.0 && self.min_interval < 1e-2) {
            return Err(Error::invalid("min_interval must lie in [0, 1e-2)"));
        }
        Ok(())
    }

    pub(crate) fn nelder_mead(&self) -> NelderMead {
        NelderMead {
            max_evals: self.max_evals,
            ..NelderMead::default()
        }
    }
}

/// Checks the per-axis resolution caps against the cell and space budgets.
pub(crate) fn check_caps(h: &Bigraph, caps: &[usize], cfg: &SearchConfig) -> Result<()> {
    if h.n_events() > 64 {
        return Err(Error::CapExceeded {
            what: "events in discrete search",
            limit: 64,
            needed: h.n_events() as u64,
        });
    }
    let cells = caps.iter().fold(1u64, |a, &e| a.saturating_mul(e as u64));
    if cells > cfg.cell_cap {
        return Err(Error::CapExceeded {
            what: "grid cells",
            limit: cfg.cell_cap,
            needed: cells,
        });
    }
    let space = search::raw_space(h, caps);
    if space > cfg.space_cap as f64 {
        return Err(Error::CapExceeded {
            what: "indicator search space",
            limit: cfg.space_cap,
            needed: if space >= u64::MAX as f64 { u64::MAX } else { space as u64 },
        });
    }
    Ok(())
}

/// Per-pattern RNG seed, independent of scheduling.
pub(crate) fn pattern_seed(base: u64, resolution_index: usize, pattern_index: usize) -> u64 {
    base ^ ((resolution_index as u64) << 40) ^ (pattern_index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}
