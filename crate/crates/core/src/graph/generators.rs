use rand::Rng;

use super::{Bigraph, DependencyGraph};
use crate::error::{Error, Result};

/// Canonical cyclic bigraph `H_n`: event `i` depends on variables `i` and
/// `i + 1 (mod n)`.
pub fn make_cycle_bigraph(n: usize) -> Result<Bigraph> {
    if n < 3 {
        return Err(Error::invalid("cyclic bigraphs need n >= 3"));
    }
    let nbrs: Vec<Vec<usize>> = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
    Bigraph::from_neighborhoods(n, &nbrs)
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            if n - v < k - cur.len() {
                break;
            }
            cur.push(v);
            rec(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Combinatorial bigraph `H_{n,m}`: one event per `m`-subset of the `n`
/// variables, adjacent to exactly its subset.
pub fn make_combinatorial_bigraph(n: usize, m: usize) -> Result<Bigraph> {
    if m < 1 || m >= n {
        return Err(Error::invalid(format!("need 1 <= m < n, got n={n}, m={m}")));
    }
    Bigraph::from_neighborhoods(n, &k_subsets(n, m))
}

/// Upper combinatorial bigraph: one event per subset of size at least `m`,
/// ordered by size and then lexicographically.
pub fn make_upper_combinatorial(n: usize, m: usize) -> Result<Bigraph> {
    if m < 1 || m > n {
        return Err(Error::invalid(format!("need 1 <= m <= n, got n={n}, m={m}")));
    }
    let nbrs: Vec<Vec<usize>> = (m..=n).flat_map(|t| k_subsets(n, t)).collect();
    Bigraph::from_neighborhoods(n, &nbrs)
}

/// The 5×5 bigraph whose base graph is `K_5` and which is gapful without
/// containing any cyclic bigraph.
pub fn make_hstar() -> Bigraph {
    let nbrs = vec![
        vec![0, 3, 4],
        vec![1, 3, 4],
        vec![2, 3, 4],
        vec![0, 1, 2, 3],
        vec![0, 1, 2, 4],
    ];
    Bigraph::from_neighborhoods(5, &nbrs).unwrap()
}

/// Canonical bigraph `H_G`: one variable per maximal clique of `g`.
pub fn make_canonical_bigraph(g: &DependencyGraph) -> Bigraph {
    let cliques = g.maximal_cliques();
    let edges = cliques
        .iter()
        .enumerate()
        .flat_map(|(j, c)| c.iter().map(move |&i| (i, j)))
        .collect();
    Bigraph::new(g.n_vertices(), cliques.len(), edges).unwrap()
}

/// Uniform random labelled tree via a random Prüfer sequence.
pub fn random_tree<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DependencyGraph {
    if n <= 2 {
        return DependencyGraph::path(n);
    }
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &s in &seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &s in &seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
        edges.push((leaf, s));
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    DependencyGraph::new(n, edges).unwrap()
}

/// Treelike bigraph with one variable per edge of a random tree.
pub fn random_tree_bigraph<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Bigraph {
    make_canonical_bigraph(&random_tree(n, rng))
}
