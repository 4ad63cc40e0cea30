use std::path::Path;

use lll_core::{Error, Result, SearchConfig};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Run settings shared by all subcommands. Flags override the config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Tolerance for the exact boundary solvers.
    pub tol: f64,
    /// Acceptance tolerance of the discrete search.
    pub search_tol: f64,
    pub lambda_tol: f64,
    pub cells_cap: u64,
    pub starts: usize,
    pub max_evals: usize,
    pub subset_cap: u64,
    pub format: Option<Format>,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let s = SearchConfig::default();
        RunConfig {
            tol: 1e-12,
            search_tol: s.tol,
            lambda_tol: s.lambda_tol,
            cells_cap: s.cell_cap,
            starts: s.starts,
            max_evals: s.max_evals,
            subset_cap: 100_000,
            format: None,
            seed: s.seed,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
        let cfg: RunConfig = match path.extension().and_then(|e| e.to_str()) {
            Some("toml") => toml::from_str(&text).map_err(|e| Error::InvalidInput(format!("config: {e}")))?,
            Some("json") => serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("config: {e}")))?,
            _ => return Err(Error::InvalidInput("config file must end in .toml or .json".into())),
        };
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.cells_cap == 0 || self.starts == 0 || self.max_evals == 0 || self.subset_cap == 0 {
            return Err(Error::InvalidInput("caps must be positive".into()));
        }
        for (name, t) in [("tol", self.tol), ("search_tol", self.search_tol), ("lambda_tol", self.lambda_tol)] {
            if !(t > 0.0 && t <= 1e-2) {
                return Err(Error::InvalidInput(format!("{name} must lie in (0, 1e-2]")));
            }
        }
        Ok(())
    }

    pub fn search(&self) -> Result<SearchConfig> {
        let s = SearchConfig {
            cell_cap: self.cells_cap,
            starts: self.starts,
            max_evals: self.max_evals,
            lambda_tol: self.lambda_tol,
            tol: self.search_tol,
            seed: self.seed,
            ..SearchConfig::default()
        };
        s.validate()?;
        Ok(s)
    }
}
