//! Graphs and the dominating-set (one-hop influence coverage) objective
//! `f(S) = |S ∪ N(S)|`.

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::ground::{ElementId, ElementSet};
use crate::oracle::Objective;

/// Adjacency-list graph over dense node ids `0..n`. For directed graphs the
/// lists hold out-neighbors; undirected graphs are stored symmetrized.
/// Self-loops are never stored: a node always covers itself.
#[derive(Clone, Debug)]
pub struct Graph {
    adjacency: Vec<Vec<u32>>,
    directed: bool,
}

impl Graph {
    /// Builds a graph from an edge list over dense node ids. Undirected
    /// edges are symmetrized; duplicate edges and self-loops are dropped.
    pub fn from_edges(n: usize, edges: &[(u32, u32)], directed: bool) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("graph must have at least one node".into()));
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u as usize >= n || v as usize >= n {
                return Err(Error::Domain(format!(
                    "edge ({u}, {v}) out of range for {n} nodes"
                )));
            }
            if u == v {
                continue;
            }
            adjacency[u as usize].push(v);
            if !directed {
                adjacency[v as usize].push(u);
            }
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Graph {
            adjacency,
            directed,
        })
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    /// Number of distinct edges; undirected edges are counted once.
    pub fn edge_count(&self) -> usize {
        let total: usize = self.adjacency.iter().map(Vec::len).sum();
        if self.directed {
            total
        } else {
            total / 2
        }
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn neighbors(&self, node: u32) -> &[u32] {
        &self.adjacency[node as usize]
    }

    /// Directed edge pairs as stored; for undirected graphs each edge is
    /// reported once with `u < v`.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, list) in self.adjacency.iter().enumerate() {
            let u = u as u32;
            for &v in list {
                if self.directed || u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }
}

/// `f(S) = |S ∪ N(S)|` where `N(S)` is the union of out-neighborhoods.
/// Integer-valued, normalized, monotone and submodular.
#[derive(Clone, Debug)]
pub struct DomSetObjective {
    graph: Graph,
}

impl DomSetObjective {
    pub fn new(graph: Graph) -> Self {
        DomSetObjective { graph }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    fn coverage(&self, s: &ElementSet) -> FixedBitSet {
        let mut covered = FixedBitSet::with_capacity(self.graph.node_count());
        for e in s.iter() {
            covered.insert(e.index());
            for &v in self.graph.neighbors(e.0) {
                covered.insert(v as usize);
            }
        }
        covered
    }
}

impl Objective for DomSetObjective {
    fn ground_size(&self) -> usize {
        self.graph.node_count()
    }

    fn value(&self, s: &ElementSet) -> f64 {
        self.coverage(s).count_ones(..) as f64
    }

    fn gain(&self, e: ElementId, s: &ElementSet) -> f64 {
        let covered = self.coverage(s);
        let mut new = 0usize;
        if !covered.contains(e.index()) {
            new += 1;
        }
        for &v in self.graph.neighbors(e.0) {
            if !covered.contains(v as usize) {
                new += 1;
            }
        }
        new as f64
    }
}

/// Convenience wrapper: the dominating-set value of `S` in `graph`.
pub fn domset_value(graph: &Graph, s: &ElementSet) -> Result<f64> {
    if s.universe_size() != graph.node_count() {
        return Err(Error::Domain(format!(
            "set over universe {} queried against graph with {} nodes",
            s.universe_size(),
            graph.node_count()
        )));
    }
    let obj = DomSetObjective::new(graph.clone());
    Ok(obj.value(s))
}
