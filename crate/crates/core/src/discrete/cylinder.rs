use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Bigraph;

/// Default cap on grid cells for pure evaluation.
pub const EVAL_CELL_CAP: u64 = 10_000_000;
/// Overlap mass below which two adjacent events count as disjoint.
pub const OVERLAP_TOL: f64 = 1e-12;
const PARTITION_SUM_TOL: f64 = 1e-12;

/// Per-event indicator over the grid cells of the event's own variables.
///
/// `shape` lists the interval counts of the event's variables in increasing
/// variable order; `cells` is row-major with the last variable fastest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "IndicatorJson", into = "IndicatorJson")]
pub struct EventIndicator {
    pub event: usize,
    pub shape: Vec<usize>,
    pub cells: Vec<bool>,
}

#[derive(Serialize, Deserialize)]
struct IndicatorJson {
    event: usize,
    shape: Vec<usize>,
    cells: Vec<u8>,
}

impl TryFrom<IndicatorJson> for EventIndicator {
    type Error = Error;
    fn try_from(j: IndicatorJson) -> Result<Self> {
        if j.event == 0 {
            return Err(Error::invalid("event indices are 1-based"));
        }
        let cells = j
            .cells
            .iter()
            .map(|&c| match c {
                0 => Ok(false),
                1 => Ok(true),
                _ => Err(Error::invalid("indicator cells must be 0 or 1")),
            })
            .collect::<Result<_>>()?;
        Ok(EventIndicator {
            event: j.event - 1,
            shape: j.shape,
            cells,
        })
    }
}

impl From<EventIndicator> for IndicatorJson {
    fn from(e: EventIndicator) -> Self {
        IndicatorJson {
            event: e.event + 1,
            shape: e.shape,
            cells: e.cells.iter().map(|&b| b as u8).collect(),
        }
    }
}

/// A cylinder set that is piecewise constant on an axis-aligned grid: axis
/// `j` is cut into intervals of the given lengths, and each event is a union
/// of grid cells over its own variables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteCylinderSet {
    pub partitions: Vec<Vec<f64>>,
    pub indicators: Vec<EventIndicator>,
}

/// Measures of the events, of their union, and whether adjacent events are
/// pairwise disjoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub measures: Vec<f64>,
    pub union: f64,
    pub exclusive: bool,
    /// Largest overlap mass over base-graph-adjacent pairs.
    pub max_overlap: f64,
}

impl DiscreteCylinderSet {
    /// Builds a set whose event `i` contains the cell with local interval
    /// indices `idx` (over the event's variables, ascending) iff
    /// `member(i, idx)`.
    pub fn from_fn(h: &Bigraph, partitions: Vec<Vec<f64>>, mut member: impl FnMut(usize, &[usize]) -> bool) -> Self {
        let indicators = (0..h.n_events())
            .map(|i| {
                let shape: Vec<usize> = h.event_neighbors(i).iter().map(|&j| partitions[j].len()).collect();
                let total: usize = shape.iter().product();
                let mut idx = vec![0; shape.len()];
                let mut cells = Vec::with_capacity(total);
                for _ in 0..total {
                    cells.push(member(i, &idx));
                    advance(&mut idx, &shape);
                }
                EventIndicator { event: i, shape, cells }
            })
            .collect();
        DiscreteCylinderSet { partitions, indicators }
    }

    /// Checks partitions and indicator shapes against `h`.
    pub fn validate(&self, h: &Bigraph) -> Result<()> {
        if self.partitions.len() != h.n_variables() {
            return Err(Error::DimensionMismatch {
                expected: h.n_variables(),
                got: self.partitions.len(),
            });
        }
        for (j, part) in self.partitions.iter().enumerate() {
            if part.is_empty() || part.iter().any(|&x| !(x >= 0.0 && x.is_finite())) {
                return Err(Error::invalid(format!("axis {j}: lengths must be nonnegative")));
            }
            let s: f64 = part.iter().sum();
            if (s - 1.0).abs() > PARTITION_SUM_TOL {
                return Err(Error::invalid(format!("axis {j}: lengths sum to {s}")));
            }
        }
        if self.indicators.len() != h.n_events() {
            return Err(Error::DimensionMismatch {
                expected: h.n_events(),
                got: self.indicators.len(),
            });
        }
        for (i, ind) in self.indicators.iter().enumerate() {
            let expected: Vec<usize> = h.event_neighbors(i).iter().map(|&j| self.partitions[j].len()).collect();
            if ind.event != i || ind.shape != expected || ind.cells.len() != expected.iter().product::<usize>() {
                return Err(Error::invalid(format!("indicator of event {i} does not match its neighborhood")));
            }
        }
        Ok(())
    }

    pub fn n_cells(&self) -> u64 {
        self.partitions
            .iter()
            .map(|p| p.len() as u64)
            .fold(1u64, |a, b| a.saturating_mul(b))
    }

    /// Interval counts per axis.
    pub fn resolution(&self) -> Vec<usize> {
        self.partitions.iter().map(Vec::len).collect()
    }

    /// Exact cell-decomposition evaluation over the full product grid.
    pub fn evaluate(&self, h: &Bigraph) -> Result<Evaluation> {
        self.evaluate_capped(h, EVAL_CELL_CAP)
    }

    pub fn evaluate_capped(&self, h: &Bigraph, cell_cap: u64) -> Result<Evaluation> {
        self.validate(h)?;
        let total = self.n_cells();
        if total > cell_cap {
            return Err(Error::CapExceeded {
                what: "grid cells for evaluation",
                limit: cell_cap,
                needed: total,
            });
        }
        let n = h.n_events();
        let shape = self.resolution();
        let strides: Vec<Vec<usize>> = (0..n).map(|i| local_strides(h.event_neighbors(i), &shape)).collect();
        let adjacent = h.base_graph().edges();
        let mut measures = vec![0.0; n];
        let mut overlaps = vec![0.0; adjacent.len()];
        let mut union = 0.0;
        let mut inside = vec![false; n];
        let mut idx = vec![0usize; shape.len()];
        for _ in 0..total {
            let w: f64 = idx.iter().enumerate().map(|(j, &k)| self.partitions[j][k]).product();
            let mut any = false;
            for i in 0..n {
                let local: usize = h.event_neighbors(i).iter().zip(&strides[i]).map(|(&j, &s)| idx[j] * s).sum();
                inside[i] = self.indicators[i].cells[local];
                if inside[i] {
                    measures[i] += w;
                    any = true;
                }
            }
            if any {
                union += w;
                for (o, &(a, b)) in overlaps.iter_mut().zip(&adjacent) {
                    if inside[a] && inside[b] {
                        *o += w;
                    }
                }
            }
            advance(&mut idx, &shape);
        }
        let max_overlap = overlaps.iter().copied().fold(0.0, f64::max);
        Ok(Evaluation {
            measures,
            union,
            exclusive: max_overlap <= OVERLAP_TOL,
            max_overlap,
        })
    }
}

/// Row-major strides of an event's local tensor.
pub(crate) fn local_strides(vars: &[usize], shape: &[usize]) -> Vec<usize> {
    let mut strides = vec![0; vars.len()];
    let mut s = 1;
    for (k, &j) in vars.iter().enumerate().rev() {
        strides[k] = s;
        s *= shape[j];
    }
    strides
}

/// Mixed-radix increment, last coordinate fastest.
pub(crate) fn advance(idx: &mut [usize], shape: &[usize]) {
    for k in (0..idx.len()).rev() {
        idx[k] += 1;
        if idx[k] < shape[k] {
            return;
        }
        idx[k] = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_full_event() {
        let h = Bigraph::new(1, 1, vec![(0, 0)]).unwrap();
        let s = DiscreteCylinderSet::from_fn(&h, vec![vec![0.3, 0.7]], |_, _| true);
        let e = s.evaluate(&h).unwrap();
        assert_eq!(e.measures, vec![1.0]);
        assert_eq!(e.union, 1.0);
        assert!(e.exclusive);
    }

    #[test]
    fn overlap_detected() {
        let h = Bigraph::new(2, 1, vec![(0, 0), (1, 0)]).unwrap();
        let s = DiscreteCylinderSet::from_fn(&h, vec![vec![0.5, 0.5]], |i, idx| i == 0 || idx[0] == 1);
        let e = s.evaluate(&h).unwrap();
        assert!(!e.exclusive);
        assert!((e.max_overlap - 0.5).abs() < 1e-15);
        assert!((e.union - 1.0).abs() < 1e-15);
    }

    #[test]
    fn shape_mismatch_and_caps() {
        let h = Bigraph::new(2, 1, vec![(0, 0), (1, 0)]).unwrap();
        let mut s = DiscreteCylinderSet::from_fn(&h, vec![vec![0.5, 0.5]], |_, _| false);
        assert!(s.evaluate_capped(&h, 1).is_err());
        s.indicators[1].shape = vec![3];
        assert!(s.evaluate(&h).is_err());
        s.partitions[0] = vec![0.5, 0.6];
        assert!(s.validate(&h).is_err());
    }

    #[test]
    fn json_layout() {
        let h = Bigraph::new(1, 1, vec![(0, 0)]).unwrap();
        let s = DiscreteCylinderSet::from_fn(&h, vec![vec![0.25, 0.75]], |_, idx| idx[0] == 0);
        let js = serde_json::to_string(&s).unwrap();
        assert_eq!(js, r#"{"partitions":[[0.25,0.75]],"indicators":[{"event":1,"shape":[2],"cells":[1,0]}]}"#);
        let back: DiscreteCylinderSet = serde_json::from_str(&js).unwrap();
        assert_eq!(back, s);
    }
}
