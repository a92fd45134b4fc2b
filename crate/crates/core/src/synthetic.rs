//! Deterministic random instances for tests and benchmarks.

use rand::distributions::{Distribution, Uniform};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ground::{ElementId, ElementSet};
use crate::objectives::domset::Graph;
use crate::objectives::exemplar::VectorDataset;
use crate::objectives::tabular::TabularObjective;
use crate::oracle::Objective;

/// Connected-ish undirected random graph: every node `v >= 1` attaches to a
/// uniformly random earlier node, then `extra_edges` random pairs are
/// added. No node is isolated.
pub fn random_graph(n: usize, extra_edges: usize, seed: u64) -> Graph {
    assert!(n >= 2, "need at least two nodes");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(u32, u32)> = Vec::with_capacity(n - 1 + extra_edges);
    for v in 1..n as u32 {
        let u = rng.gen_range(0..v);
        edges.push((u, v));
    }
    let node = Uniform::from(0..n as u32);
    let mut added = 0;
    while added < extra_edges {
        let u = node.sample(&mut rng);
        let v = node.sample(&mut rng);
        if u != v {
            edges.push((u.min(v), u.max(v)));
            added += 1;
        }
    }
    Graph::from_edges(n, &edges, false).expect("edges are in range")
}

pub fn random_vectors(n: usize, dim: usize, seed: u64) -> VectorDataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data: Vec<f64> = (0..n * dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
    VectorDataset::new(n, dim, data).expect("shape is consistent")
}

/// Weighted set coverage: element `e` covers a fixed subset of a small
/// item universe and `f(S)` is the total weight of the items covered by
/// `S`. Normalized, monotone and submodular for non-negative weights.
#[derive(Clone, Debug)]
pub struct CoverageObjective {
    weights: Vec<f64>,
    covers: Vec<u64>,
}

impl Objective for CoverageObjective {
    fn ground_size(&self) -> usize {
        self.covers.len()
    }

    fn value(&self, s: &ElementSet) -> f64 {
        let covered = s.iter().fold(0u64, |acc, e| acc | self.covers[e.index()]);
        self.covered_weight(covered)
    }

    fn gain(&self, e: ElementId, s: &ElementSet) -> f64 {
        let covered = s.iter().fold(0u64, |acc, x| acc | self.covers[x.index()]);
        self.covered_weight(covered | self.covers[e.index()]) - self.covered_weight(covered)
    }
}

impl CoverageObjective {
    fn covered_weight(&self, covered: u64) -> f64 {
        self.weights
            .iter()
            .enumerate()
            .filter(|(item, _)| covered & (1 << item) != 0)
            .map(|(_, w)| w)
            .sum()
    }
}

/// A random coverage instance over a universe of at most 64 items.
pub fn random_coverage(n: usize, universe: usize, seed: u64) -> CoverageObjective {
    assert!(n >= 1);
    assert!((1..=64).contains(&universe));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights: Vec<f64> = (0..universe).map(|_| rng.gen_range(0.0..1.0)).collect();
    let covers: Vec<u64> = (0..n)
        .map(|_| {
            let mut c = 0u64;
            for item in 0..universe {
                if rng.gen_bool(0.4) {
                    c |= 1 << item;
                }
            }
            c
        })
        .collect();
    CoverageObjective { weights, covers }
}

/// A random monotone submodular function on `n` elements, tabulated from a
/// weighted coverage instance. Coverage functions are normalized, monotone
/// and submodular, so the table always passes construction validation.
pub fn random_tabular(n: usize, seed: u64) -> TabularObjective {
    assert!((1..=16).contains(&n), "tabulation limited to n <= 16");
    let coverage = random_coverage(n, n + 4, seed);
    let values: Vec<f64> = (0u64..(1 << n))
        .map(|mask| coverage.value(&ElementSet::from_mask(n, mask)))
        .collect();
    TabularObjective::new(n, values).expect("coverage tables are monotone submodular")
}
