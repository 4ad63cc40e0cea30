//! Axis-aligned box witnesses for event systems.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::discrete::{DiscreteCylinderSet, Evaluation};
use crate::error::{Error, Result};
use crate::graph::Bigraph;

/// A subinterval of `[0, 1]` with explicit endpoint openness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl Interval {
    pub fn closed(lo: f64, hi: f64) -> Self {
        Interval {
            lo,
            hi,
            lo_open: false,
            hi_open: false,
        }
    }

    /// `(lo, hi]`.
    pub fn left_open(lo: f64, hi: f64) -> Self {
        Interval {
            lo,
            hi,
            lo_open: true,
            hi_open: false,
        }
    }

    pub fn length(&self) -> f64 {
        (self.hi - self.lo).max(0.0)
    }

    /// The intersection with `other` has Lebesgue measure zero, decided by
    /// exact comparison of the endpoints.
    pub fn null_intersection(&self, other: &Interval) -> bool {
        self.hi <= other.lo || other.hi <= self.lo || self.lo >= self.hi || other.lo >= other.hi
    }
}

/// One box: the variables it constrains, each with an interval. Variables
/// not listed range over all of `[0, 1]`.
pub type BoxSpec = BTreeMap<usize, Interval>;

/// Events given as finite unions of boxes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "json::Witness", into = "json::Witness")]
pub struct BoxWitness {
    pub n_variables: usize,
    /// `events[i]` is the list of boxes whose union is event `i`.
    pub events: Vec<Vec<BoxSpec>>,
}

impl BoxWitness {
    /// Checks that each box lives on its event's neighborhood inside `[0, 1]`.
    pub fn validate(&self, h: &Bigraph) -> Result<()> {
        if self.events.len() != h.n_events() || self.n_variables != h.n_variables() {
            return Err(Error::invalid("witness dimensions do not match the bigraph"));
        }
        for (i, boxes) in self.events.iter().enumerate() {
            for b in boxes {
                for (&j, iv) in b {
                    if !h.has_edge(i, j) {
                        return Err(Error::invalid(format!("event {i} constrains foreign variable {j}")));
                    }
                    if !(0.0 <= iv.lo && iv.lo <= iv.hi && iv.hi <= 1.0) {
                        return Err(Error::invalid(format!("interval [{}, {}] outside [0, 1]", iv.lo, iv.hi)));
                    }
                }
            }
        }
        Ok(())
    }

    /// Exact check that base-graph-adjacent events meet in a null set.
    pub fn adjacent_overlap_free(&self, h: &Bigraph) -> bool {
        h.base_graph().edges().into_iter().all(|(a, b)| {
            self.events[a].iter().all(|ba| {
                self.events[b].iter().all(|bb| {
                    let empty_a = ba.values().any(|iv| iv.lo >= iv.hi);
                    let empty_b = bb.values().any(|iv| iv.lo >= iv.hi);
                    empty_a
                        || empty_b
                        || ba
                            .iter()
                            .any(|(j, iv)| bb.get(j).is_some_and(|jv| iv.null_intersection(jv)))
                })
            })
        })
    }

    /// Common grid refinement of all boxes as a discrete cylinder set.
    pub fn to_cylinder_set(&self, h: &Bigraph) -> Result<DiscreteCylinderSet> {
        self.validate(h)?;
        let mut cuts: Vec<Vec<f64>> = vec![vec![0.0, 1.0]; self.n_variables];
        for boxes in &self.events {
            for b in boxes {
                for (&j, iv) in b {
                    cuts[j].push(iv.lo);
                    cuts[j].push(iv.hi);
                }
            }
        }
        for c in &mut cuts {
            c.sort_by(f64::total_cmp);
            c.dedup();
        }
        let partitions: Vec<Vec<f64>> = cuts.iter().map(|c| c.windows(2).map(|w| w[1] - w[0]).collect()).collect();
        Ok(DiscreteCylinderSet::from_fn(h, partitions, |i, idx| {
            let vars = h.event_neighbors(i);
            self.events[i].iter().any(|b| {
                b.iter().all(|(j, iv)| {
                    let a = vars.binary_search(j).expect("validated");
                    let k = idx[a];
                    iv.lo <= cuts[*j][k] && cuts[*j][k + 1] <= iv.hi
                })
            })
        }))
    }

    pub fn evaluate(&self, h: &Bigraph) -> Result<Evaluation> {
        self.to_cylinder_set(h)?.evaluate(h)
    }
}

mod json {
    use serde::{Deserialize, Serialize};

    use super::{BoxSpec, Interval};
    use crate::error::Error;

    #[derive(Serialize, Deserialize)]
    pub struct Axis {
        variable: usize,
        lo: String,
        hi: String,
        lo_open: bool,
        hi_open: bool,
    }

    #[derive(Serialize, Deserialize)]
    pub struct Event {
        event: usize,
        boxes: Vec<Vec<Axis>>,
    }

    #[derive(Serialize, Deserialize)]
    pub struct Witness {
        variables: usize,
        events: Vec<Event>,
    }

    fn parse(s: &str) -> Result<f64, Error> {
        s.parse::<f64>()
            .map_err(|_| Error::invalid(format!("not a decimal number: {s}")))
    }

    impl TryFrom<Witness> for super::BoxWitness {
        type Error = Error;
        fn try_from(w: Witness) -> Result<Self, Error> {
            let mut events = vec![Vec::new(); w.events.len()];
            for e in w.events {
                if e.event == 0 || e.event > events.len() {
                    return Err(Error::invalid(format!("event index {} out of range", e.event)));
                }
                let mut boxes = Vec::new();
                for b in e.boxes {
                    let mut spec = BoxSpec::new();
                    for a in b {
                        if a.variable == 0 || a.variable > w.variables {
                            return Err(Error::invalid(format!("variable index {} out of range", a.variable)));
                        }
                        spec.insert(
                            a.variable - 1,
                            Interval {
                                lo: parse(&a.lo)?,
                                hi: parse(&a.hi)?,
                                lo_open: a.lo_open,
                                hi_open: a.hi_open,
                            },
                        );
                    }
                    boxes.push(spec);
                }
                events[e.event - 1] = boxes;
            }
            Ok(super::BoxWitness {
                n_variables: w.variables,
                events,
            })
        }
    }

    impl From<super::BoxWitness> for Witness {
        fn from(w: super::BoxWitness) -> Self {
            Witness {
                variables: w.n_variables,
                events: w
                    .events
                    .into_iter()
                    .enumerate()
                    .map(|(i, boxes)| Event {
                        event: i + 1,
                        boxes: boxes
                            .into_iter()
                            .map(|b| {
                                b.into_iter()
                                    .map(|(j, iv)| Axis {
                                        variable: j + 1,
                                        lo: iv.lo.to_string(),
                                        hi: iv.hi.to_string(),
                                        lo_open: iv.lo_open,
                                        hi_open: iv.hi_open,
                                    })
                                    .collect()
                            })
                            .collect(),
                    })
                    .collect(),
            }
        }
    }
}
