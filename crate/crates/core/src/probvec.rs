use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A vector of strictly positive reals.
///
/// Used both for probability vectors (entries in `(0, 1]`) and for search
/// directions, whose entries may exceed one before they are scaled.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ProbVec(Vec<f64>);

impl ProbVec {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::invalid("empty vector"));
        }
        if let Some(bad) = entries.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
            return Err(Error::invalid(format!(
                "entries must be finite and positive, found {bad}"
            )));
        }
        Ok(ProbVec(entries))
    }

    pub fn uniform(n: usize, value: f64) -> Result<Self> {
        Self::new(vec![value; n])
    }

    /// Parses a comma-separated list such as `"0.25,0.25,0.5"`.
    pub fn parse(s: &str) -> Result<Self> {
        let entries = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::invalid(format!("bad number {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(f64::MIN, f64::max)
    }

    /// Entrywise `factor * self`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.0.iter().map(|x| x * factor).collect())
    }

    /// Maps every entry to `min(1, x)`.
    pub fn clamped(&self) -> Self {
        ProbVec(self.0.iter().map(|x| x.min(1.0)).collect())
    }

    /// True when every entry lies in `(0, 1]`.
    pub fn is_probability(&self) -> bool {
        self.0.iter().all(|x| *x <= 1.0)
    }

    pub fn expect_len(&self, n: usize) -> Result<()> {
        if self.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: self.len(),
            });
        }
        Ok(())
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl std::ops::Index<usize> for ProbVec {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl TryFrom<Vec<f64>> for ProbVec {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        ProbVec::new(v)
    }
}

impl From<ProbVec> for Vec<f64> {
    fn from(p: ProbVec) -> Vec<f64> {
        p.0
    }
}
