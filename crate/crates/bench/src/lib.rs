//! Benchmark fixtures shared by the criterion benches.

use lll_core::graph::{make_cycle_bigraph, random_tree_bigraph, Bigraph};

/// Deterministic treelike bigraph on `n` events.
pub fn fixed_tree(n: usize) -> Bigraph {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(n as u64);
    random_tree_bigraph(n, &mut rng)
}

pub fn cycle(n: usize) -> Bigraph {
    make_cycle_bigraph(n).expect("n >= 3")
}
