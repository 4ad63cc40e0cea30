use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on vertex count for independent-set enumeration.
pub const DEFAULT_VERTEX_CAP: usize = 25;

/// Undirected simple graph on events.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GraphJson", into = "GraphJson")]
pub struct DependencyGraph {
    n: usize,
    adj: Vec<Vec<usize>>,
}

impl DependencyGraph {
    /// Builds a graph from an edge list. Duplicate edges collapse; self-loops
    /// and out-of-range endpoints are rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::invalid(format!("edge ({u}, {v}) outside [{n}]")));
            }
            if u == v {
                return Err(Error::invalid(format!("self-loop at {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
            a.dedup();
        }
        Ok(DependencyGraph { n, adj })
    }

    pub fn empty(n: usize) -> Self {
        DependencyGraph {
            n,
            adj: vec![Vec::new(); n],
        }
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Self::new(n, edges).unwrap()
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::invalid("a cycle needs at least 3 vertices"));
        }
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    pub fn path(n: usize) -> Self {
        Self::new(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    pub fn star(leaves: usize) -> Self {
        Self::new(leaves + 1, (1..=leaves).map(|i| (0, i))).unwrap()
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn n_edges(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (u, a) in self.adj.iter().enumerate() {
            out.extend(a.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut k = 0;
            while k < comp.len() {
                let u = comp[k];
                k += 1;
                for &v in &self.adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n > 0 && self.components().len() == 1
    }

    pub fn is_tree(&self) -> bool {
        self.is_connected() && self.n_edges() + 1 == self.n
    }

    /// True iff the graph is a single cycle through all vertices.
    pub fn is_cycle(&self) -> bool {
        self.n >= 3 && self.is_connected() && self.adj.iter().all(|a| a.len() == 2)
    }

    /// Vertices of a cycle graph in traversal order starting at vertex 0 and
    /// continuing to its smaller neighbor.
    pub fn cycle_order(&self) -> Option<Vec<usize>> {
        if !self.is_cycle() {
            return None;
        }
        let mut order = vec![0, self.adj[0][0]];
        while order.len() < self.n {
            let (prev, cur) = (order[order.len() - 2], order[order.len() - 1]);
            let next = if self.adj[cur][0] == prev {
                self.adj[cur][1]
            } else {
                self.adj[cur][0]
            };
            order.push(next);
        }
        Some(order)
    }

    pub fn induced_subgraph(&self, vertices: &[usize]) -> DependencyGraph {
        let mut index = vec![usize::MAX; self.n];
        for (k, &v) in vertices.iter().enumerate() {
            index[v] = k;
        }
        let mut edges = Vec::new();
        for (k, &u) in vertices.iter().enumerate() {
            for &v in &self.adj[u] {
                if index[v] != usize::MAX && index[v] > k {
                    edges.push((k, index[v]));
                }
            }
        }
        DependencyGraph::new(vertices.len(), edges).unwrap()
    }

    /// Maximum cardinality search order (ties broken by lowest index).
    pub fn mcs_order(&self) -> Vec<usize> {
        let mut weight = vec![0usize; self.n];
        let mut done = vec![false; self.n];
        let mut order = Vec::with_capacity(self.n);
        for _ in 0..self.n {
            let v = (0..self.n)
                .filter(|&v| !done[v])
                .max_by(|&a, &b| weight[a].cmp(&weight[b]).then(b.cmp(&a)))
                .unwrap();
            done[v] = true;
            order.push(v);
            for &u in &self.adj[v] {
                if !done[u] {
                    weight[u] += 1;
                }
            }
        }
        order
    }

    /// Chordality via maximum cardinality search: the reverse MCS order is a
    /// perfect elimination ordering iff the graph is chordal.
    pub fn is_chordal(&self) -> bool {
        let order = self.mcs_order();
        let mut pos = vec![0; self.n];
        for (k, &v) in order.iter().enumerate() {
            pos[v] = k;
        }
        // For each v, its earlier neighbors must form a clique; it suffices to
        // check they are all adjacent to the latest of them.
        for &v in &order {
            let earlier: Vec<usize> = self.adj[v].iter().copied().filter(|&u| pos[u] < pos[v]).collect();
            if let Some(&parent) = earlier.iter().max_by_key(|&&u| pos[u]) {
                if earlier
                    .iter()
                    .any(|&u| u != parent && !self.has_edge(u, parent))
                {
                    return false;
                }
            }
        }
        true
    }

    /// Neighborhood bitmasks. Requires at most 64 vertices.
    pub fn neighbor_masks(&self) -> Result<Vec<u64>> {
        if self.n > 64 {
            return Err(Error::CapExceeded {
                what: "vertex count for bitmask operations",
                limit: 64,
                needed: self.n as u64,
            });
        }
        Ok(self
            .adj
            .iter()
            .map(|a| a.iter().fold(0u64, |m, &v| m | (1 << v)))
            .collect())
    }

    /// All independent sets (including the empty set) as bitmasks, in
    /// increasing numeric order.
    pub fn independent_set_masks(&self, cap: usize) -> Result<Vec<u64>> {
        if self.n > cap {
            return Err(Error::CapExceeded {
                what: "vertex count for independent-set enumeration",
                limit: cap as u64,
                needed: self.n as u64,
            });
        }
        let masks = self.neighbor_masks()?;
        let mut out = Vec::new();
        // Branch on the lowest undecided vertex; `allowed` holds vertices that
        // may still be added.
        fn rec(v: usize, n: usize, cur: u64, allowed: u64, masks: &[u64], out: &mut Vec<u64>) {
            if v == n {
                out.push(cur);
                return;
            }
            rec(v + 1, n, cur, allowed, masks, out);
            if allowed >> v & 1 == 1 {
                rec(v + 1, n, cur | 1 << v, allowed & !masks[v], masks, out);
            }
        }
        let all = if self.n == 64 { u64::MAX } else { (1u64 << self.n) - 1 };
        rec(0, self.n, 0, all, &masks, &mut out);
        out.sort_unstable();
        Ok(out)
    }

    /// All independent sets as sorted vertex lists.
    pub fn independent_sets(&self, cap: usize) -> Result<Vec<Vec<usize>>> {
        Ok(self
            .independent_set_masks(cap)?
            .into_iter()
            .map(mask_to_vec)
            .collect())
    }

    /// Maximal cliques by Bron–Kerbosch with pivoting, each sorted, listed in
    /// lexicographic order.
    pub fn maximal_cliques(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut r = Vec::new();
        let p: Vec<usize> = (0..self.n).collect();
        self.bron_kerbosch(&mut r, p, Vec::new(), &mut out);
        for c in &mut out {
            c.sort_unstable();
        }
        out.sort();
        out
    }

    fn bron_kerbosch(&self, r: &mut Vec<usize>, p: Vec<usize>, x: Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if p.is_empty() {
            if x.is_empty() {
                out.push(r.clone());
            }
            return;
        }
        let pivot = p
            .iter()
            .chain(&x)
            .copied()
            .max_by_key(|&u| p.iter().filter(|&&v| self.has_edge(u, v)).count())
            .unwrap();
        let candidates: Vec<usize> = p.iter().copied().filter(|&v| !self.has_edge(pivot, v)).collect();
        let (mut p, mut x) = (p, x);
        for v in candidates {
            let np = p.iter().copied().filter(|&u| self.has_edge(v, u)).collect();
            let nx = x.iter().copied().filter(|&u| self.has_edge(v, u)).collect();
            r.push(v);
            self.bron_kerbosch(r, np, nx, out);
            r.pop();
            p.retain(|&u| u != v);
            x.push(v);
        }
    }
}

pub(crate) fn mask_to_vec(mut m: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(m.count_ones() as usize);
    while m != 0 {
        out.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    out
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    vertices: usize,
    edges: Vec<[usize; 2]>,
}

impl TryFrom<GraphJson> for DependencyGraph {
    type Error = Error;
    fn try_from(j: GraphJson) -> Result<Self> {
        let edges = j
            .edges
            .iter()
            .map(|&[u, v]| {
                if u == 0 || v == 0 {
                    Err(Error::invalid("indices are 1-based"))
                } else {
                    Ok((u - 1, v - 1))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        DependencyGraph::new(j.vertices, edges)
    }
}

impl From<DependencyGraph> for GraphJson {
    fn from(g: DependencyGraph) -> Self {
        GraphJson {
            vertices: g.n,
            edges: g.edges().into_iter().map(|(u, v)| [u + 1, v + 1]).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_predicate() {
        assert!(DependencyGraph::path(3).is_tree());
        assert!(!DependencyGraph::cycle(4).unwrap().is_tree());
        assert!(DependencyGraph::empty(1).is_tree());
        assert!(!DependencyGraph::empty(2).is_tree());
    }

    #[test]
    fn chordal_predicate() {
        assert!(!DependencyGraph::cycle(4).unwrap().is_chordal());
        assert!(DependencyGraph::complete(4).is_chordal());
        assert!(DependencyGraph::star(4).is_chordal());
        assert!(DependencyGraph::cycle(3).unwrap().is_chordal());
    }

    #[test]
    fn independent_sets_small() {
        let c4 = DependencyGraph::cycle(4).unwrap();
        let sets = c4.independent_sets(DEFAULT_VERTEX_CAP).unwrap();
        assert_eq!(sets.len(), 7);
        assert!(sets.contains(&vec![0, 2]) && sets.contains(&vec![1, 3]));
        assert_eq!(DependencyGraph::complete(3).independent_sets(25).unwrap().len(), 4);
        assert_eq!(DependencyGraph::empty(2).independent_sets(25).unwrap().len(), 4);
        assert!(DependencyGraph::empty(26).independent_sets(25).is_err());
    }

    #[test]
    fn cliques() {
        assert_eq!(DependencyGraph::complete(3).maximal_cliques(), vec![vec![0, 1, 2]]);
        assert_eq!(DependencyGraph::path(3).maximal_cliques(), vec![vec![0, 1], vec![1, 2]]);
        assert_eq!(DependencyGraph::cycle(4).unwrap().maximal_cliques().len(), 4);
        assert_eq!(DependencyGraph::empty(2).maximal_cliques(), vec![vec![0], vec![1]]);
    }

    #[test]
    fn cycle_order_walks_cycle() {
        let g = DependencyGraph::new(4, [(0, 2), (2, 1), (1, 3), (3, 0)]).unwrap();
        assert_eq!(g.cycle_order().unwrap(), vec![0, 2, 1, 3]);
        assert!(DependencyGraph::path(4).cycle_order().is_none());
    }

    #[test]
    fn rejects_self_loops() {
        assert!(DependencyGraph::new(2, [(1, 1)]).is_err());
        assert!(DependencyGraph::new(2, [(0, 2)]).is_err());
    }
}
