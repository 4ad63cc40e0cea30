use serde::{Deserialize, Serialize};

use super::DependencyGraph;
use crate::error::{Error, Result};

/// Event–variable incidence structure `([n], [m], E)`.
///
/// Indices are 0-based. The JSON form uses 1-based indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "BigraphJson", into = "BigraphJson")]
pub struct Bigraph {
    n_events: usize,
    n_variables: usize,
    edges: Vec<(usize, usize)>,
    #[serde(skip)]
    event_nbrs: Vec<Vec<usize>>,
    #[serde(skip)]
    var_nbrs: Vec<Vec<usize>>,
}

impl Bigraph {
    /// Builds a bigraph from `(event, variable)` pairs. Duplicate edges and
    /// out-of-range indices are rejected.
    pub fn new(n_events: usize, n_variables: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if n_events == 0 {
            return Err(Error::invalid("a bigraph needs at least one event"));
        }
        let mut edges = edges;
        for &(i, j) in &edges {
            if i >= n_events || j >= n_variables {
                return Err(Error::invalid(format!(
                    "edge ({i}, {j}) outside [{n_events}] x [{n_variables}]"
                )));
            }
        }
        edges.sort_unstable();
        if edges.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("duplicate edge"));
        }
        let mut event_nbrs = vec![Vec::new(); n_events];
        let mut var_nbrs = vec![Vec::new(); n_variables];
        for &(i, j) in &edges {
            event_nbrs[i].push(j);
            var_nbrs[j].push(i);
        }
        Ok(Bigraph {
            n_events,
            n_variables,
            edges,
            event_nbrs,
            var_nbrs,
        })
    }

    /// Builds a bigraph from per-event variable lists.
    pub fn from_neighborhoods(n_variables: usize, nbrs: &[Vec<usize>]) -> Result<Self> {
        let edges = nbrs
            .iter()
            .enumerate()
            .flat_map(|(i, vs)| vs.iter().map(move |&j| (i, j)))
            .collect();
        Self::new(nbrs.len(), n_variables, edges)
    }

    pub fn n_events(&self) -> usize {
        self.n_events
    }

    pub fn n_variables(&self) -> usize {
        self.n_variables
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Sorted variables the event depends on.
    pub fn event_neighbors(&self, event: usize) -> &[usize] {
        &self.event_nbrs[event]
    }

    /// Sorted events depending on the variable.
    pub fn variable_neighbors(&self, var: usize) -> &[usize] {
        &self.var_nbrs[var]
    }

    pub fn has_edge(&self, event: usize, var: usize) -> bool {
        self.event_nbrs[event].binary_search(&var).is_ok()
    }

    pub fn variable_degree(&self, var: usize) -> usize {
        self.var_nbrs[var].len()
    }

    /// Variables shared by two events.
    pub fn shared_variables(&self, a: usize, b: usize) -> Vec<usize> {
        let (x, y) = (&self.event_nbrs[a], &self.event_nbrs[b]);
        x.iter().filter(|v| y.binary_search(v).is_ok()).copied().collect()
    }

    /// The dependency graph on events: two events are adjacent iff they
    /// share a variable.
    pub fn base_graph(&self) -> DependencyGraph {
        let mut edges = Vec::new();
        for nbrs in &self.var_nbrs {
            for (k, &a) in nbrs.iter().enumerate() {
                for &b in &nbrs[k + 1..] {
                    edges.push((a, b));
                }
            }
        }
        DependencyGraph::new(self.n_events, edges).expect("base graph edges are valid")
    }

    /// Restriction to a subset of events; variables keep their indices.
    pub fn restrict_events(&self, keep: &[usize]) -> Bigraph {
        let nbrs: Vec<Vec<usize>> = keep.iter().map(|&i| self.event_nbrs[i].clone()).collect();
        Bigraph::from_neighborhoods(self.n_variables, &nbrs).expect("restriction is valid")
    }

    /// Splits the bigraph into the sub-bigraphs spanned by the connected
    /// components of its base graph. Each part keeps the original variable
    /// indexing; the returned event lists map part indices back.
    pub fn split_components(&self) -> Vec<(Vec<usize>, Bigraph)> {
        self.base_graph()
            .components()
            .into_iter()
            .map(|events| {
                let part = self.restrict_events(&events);
                (events, part)
            })
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
struct BigraphJson {
    events: usize,
    variables: usize,
    edges: Vec<[usize; 2]>,
}

impl TryFrom<BigraphJson> for Bigraph {
    type Error = Error;
    fn try_from(j: BigraphJson) -> Result<Self> {
        let edges = j
            .edges
            .iter()
            .map(|&[i, v]| {
                if i == 0 || v == 0 {
                    Err(Error::invalid("indices are 1-based"))
                } else {
                    Ok((i - 1, v - 1))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Bigraph::new(j.events, j.variables, edges)
    }
}

impl From<Bigraph> for BigraphJson {
    fn from(h: Bigraph) -> Self {
        BigraphJson {
            events: h.n_events,
            variables: h.n_variables,
            edges: h.edges.iter().map(|&(i, j)| [i + 1, j + 1]).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_edges() {
        assert!(Bigraph::new(2, 1, vec![(2, 0)]).is_err());
        assert!(Bigraph::new(2, 1, vec![(0, 1)]).is_err());
        assert!(Bigraph::new(2, 1, vec![(0, 0), (0, 0)]).is_err());
        assert!(Bigraph::new(0, 1, vec![]).is_err());
    }

    #[test]
    fn edge_order_is_canonical() {
        let a = Bigraph::new(2, 2, vec![(1, 1), (0, 0), (1, 0)]).unwrap();
        let b = Bigraph::new(2, 2, vec![(0, 0), (1, 0), (1, 1)]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.variable_neighbors(0), &[0, 1]);
    }

    #[test]
    fn json_is_one_based() {
        let h = Bigraph::new(2, 1, vec![(0, 0), (1, 0)]).unwrap();
        let s = serde_json::to_string(&h).unwrap();
        assert_eq!(s, r#"{"events":2,"variables":1,"edges":[[1,1],[2,1]]}"#);
        let back: Bigraph = serde_json::from_str(&s).unwrap();
        assert_eq!(back, h);
        assert!(serde_json::from_str::<Bigraph>(r#"{"events":1,"variables":1,"edges":[[0,1]]}"#).is_err());
    }

    #[test]
    fn split_components_keeps_variables() {
        let h = Bigraph::new(3, 2, vec![(0, 0), (1, 0), (2, 1)]).unwrap();
        let parts = h.split_components();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0].0, vec![0, 1]);
        assert_eq!(parts[1].1.event_neighbors(0), &[1]);
    }
}
