//! Brute-force reference implementations.
//!
//! Everything here favors obviousness over speed: plain maps, binary heaps,
//! explicit queues. The algorithm tests replay random workloads against
//! these oracles, so nothing in this module may depend on the slab store,
//! the engine, or any other code under test.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, VecDeque};

use crate::graph::DynamicGraph;

/// Unreachable distance marker, matching the algorithms' convention.
pub const INF: u32 = u32::MAX;

/// A directed adjacency-map graph with optional edge weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlainGraph {
    adj: Vec<BTreeMap<u32, Option<u32>>>,
}

impl PlainGraph {
    pub fn new(n: u32) -> Self {
        PlainGraph {
            adj: vec![BTreeMap::new(); n as usize],
        }
    }

    /// Snapshot of a slab-backed graph's current adjacency.
    pub fn from_graph(g: &DynamicGraph) -> Self {
        PlainGraph {
            adj: g.snapshot_adjacency(),
        }
    }

    pub fn n(&self) -> u32 {
        self.adj.len() as u32
    }

    pub fn insert(&mut self, u: u32, v: u32, w: Option<u32>) {
        self.adj[u as usize].insert(v, w);
    }

    pub fn insert_undirected(&mut self, u: u32, v: u32, w: Option<u32>) {
        self.insert(u, v, w);
        self.insert(v, u, w);
    }

    pub fn delete(&mut self, u: u32, v: u32) -> bool {
        self.adj[u as usize].remove(&v).is_some()
    }

    pub fn delete_undirected(&mut self, u: u32, v: u32) {
        self.delete(u, v);
        self.delete(v, u);
    }

    pub fn neighbors(&self, v: u32) -> &BTreeMap<u32, Option<u32>> {
        &self.adj[v as usize]
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|m| m.len()).sum()
    }
}

/// Single-source shortest paths by textbook Dijkstra; absent weights count
/// as 1. Distances at or above [`INF`] are reported unreachable.
pub fn oracle_dijkstra(g: &PlainGraph, src: u32) -> Vec<u32> {
    let n = g.n() as usize;
    let mut dist = vec![u64::from(INF); n];
    dist[src as usize] = 0;
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((0u64, src)));
    while let Some(Reverse((d, u))) = heap.pop() {
        if d > dist[u as usize] {
            continue;
        }
        for (&v, &w) in g.neighbors(u) {
            let cand = d + u64::from(w.unwrap_or(1));
            if cand < dist[v as usize] {
                dist[v as usize] = cand;
                heap.push(Reverse((cand, v)));
            }
        }
    }
    dist.into_iter()
        .map(|d| if d >= u64::from(INF) { INF } else { d as u32 })
        .collect()
}

/// Single-source hop distances by queue BFS.
pub fn oracle_bfs(g: &PlainGraph, src: u32) -> Vec<u32> {
    let mut dist = vec![INF; g.n() as usize];
    dist[src as usize] = 0;
    let mut queue = VecDeque::from([src]);
    while let Some(u) = queue.pop_front() {
        for &v in g.neighbors(u).keys() {
            if dist[v as usize] == INF {
                dist[v as usize] = dist[u as usize] + 1;
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Power-iteration PageRank over the *forward* graph. Dangling mass (from
/// vertices with no out-edges) is spread uniformly each round, scores start
/// at `1/N`, and iteration stops when the L1 step drops to `eps` or after
/// `max_iter` rounds.
pub fn oracle_pagerank(g: &PlainGraph, damping: f64, eps: f64, max_iter: u32) -> Vec<f64> {
    let n = g.n() as usize;
    if n == 0 {
        return Vec::new();
    }
    let nf = n as f64;
    let mut incoming = vec![Vec::new(); n];
    for u in 0..n {
        for &v in g.neighbors(u as u32).keys() {
            incoming[v as usize].push(u);
        }
    }
    let mut pr = vec![1.0 / nf; n];
    for _ in 0..max_iter {
        let contribution: Vec<f64> = (0..n)
            .map(|u| {
                let deg = g.neighbors(u as u32).len();
                if deg == 0 {
                    0.0
                } else {
                    pr[u] / deg as f64
                }
            })
            .collect();
        let dangling: f64 = (0..n)
            .filter(|&u| g.neighbors(u as u32).is_empty())
            .map(|u| pr[u])
            .sum();
        let base = (1.0 - damping) / nf + damping * dangling / nf;
        let next: Vec<f64> = (0..n)
            .map(|v| base + damping * incoming[v].iter().map(|&u| contribution[u]).sum::<f64>())
            .collect();
        let l1: f64 = next.iter().zip(&pr).map(|(a, b)| (a - b).abs()).sum();
        pr = next;
        if l1 <= eps {
            break;
        }
    }
    pr
}

/// Triangle count of a symmetric graph: per edge `u < v`, common neighbors
/// other than the endpoints; every triangle is seen from its three edges.
pub fn oracle_triangles(g: &PlainGraph) -> u64 {
    let mut total = 0u64;
    for u in 0..g.n() {
        for &v in g.neighbors(u).keys() {
            if u >= v {
                continue;
            }
            for &w in g.neighbors(u).keys() {
                if w != u && w != v && g.neighbors(v).contains_key(&w) {
                    total += 1;
                }
            }
        }
    }
    total / 3
}

/// Weakly connected components: each vertex labeled with its component's
/// minimum id. Edge direction is ignored.
pub fn oracle_wcc(g: &PlainGraph) -> Vec<u32> {
    let n = g.n() as usize;
    let mut undirected = vec![Vec::new(); n];
    for u in 0..n {
        for &v in g.neighbors(u as u32).keys() {
            undirected[u].push(v);
            undirected[v as usize].push(u as u32);
        }
    }
    let mut labels = vec![INF; n];
    for start in 0..n as u32 {
        if labels[start as usize] != INF {
            continue;
        }
        // `start` is the smallest unlabeled vertex, hence its component min.
        let mut stack = vec![start];
        labels[start as usize] = start;
        while let Some(u) = stack.pop() {
            for &v in &undirected[u as usize] {
                if labels[v as usize] == INF {
                    labels[v as usize] = start;
                    stack.push(v);
                }
            }
        }
    }
    labels
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: u32) -> PlainGraph {
        let mut g = PlainGraph::new(n);
        for u in 0..n {
            for v in 0..n {
                if u != v {
                    g.insert(u, v, None);
                }
            }
        }
        g
    }

    #[test]
    fn dijkstra_on_a_weighted_chain() {
        let mut g = PlainGraph::new(4);
        g.insert_undirected(0, 1, Some(2));
        g.insert_undirected(1, 2, Some(2));
        assert_eq!(oracle_dijkstra(&g, 0), vec![0, 2, 4, INF]);
        // A heavier direct edge loses to the two-hop path.
        g.insert_undirected(0, 2, Some(5));
        assert_eq!(oracle_dijkstra(&g, 0), vec![0, 2, 4, INF]);
    }

    #[test]
    fn bfs_counts_hops() {
        let mut g = PlainGraph::new(5);
        g.insert_undirected(0, 1, None);
        g.insert_undirected(1, 2, None);
        g.insert_undirected(2, 3, None);
        assert_eq!(oracle_bfs(&g, 0), vec![0, 1, 2, 3, INF]);
    }

    #[test]
    fn complete_graphs_have_binomial_triangles() {
        assert_eq!(oracle_triangles(&complete(4)), 4);
        assert_eq!(oracle_triangles(&complete(6)), 20);
        let mut g = complete(4);
        g.insert(2, 2, None); // self-loop must not count
        assert_eq!(oracle_triangles(&g), 4);
    }

    #[test]
    fn wcc_labels_are_component_minima() {
        let mut g = PlainGraph::new(6);
        g.insert(1, 0, None); // direction ignored
        g.insert_undirected(3, 2, None);
        assert_eq!(oracle_wcc(&g), vec![0, 0, 2, 2, 4, 5]);
    }

    #[test]
    fn pagerank_splits_a_two_cycle_evenly() {
        let mut g = PlainGraph::new(2);
        g.insert(0, 1, None);
        g.insert(1, 0, None);
        let pr = oracle_pagerank(&g, 0.85, 1e-12, 200);
        assert!((pr[0] - 0.5).abs() < 1e-9);
        assert!((pr[1] - 0.5).abs() < 1e-9);
    }

    #[test]
    fn pagerank_mass_is_conserved_with_dangling_vertices() {
        let mut g = PlainGraph::new(4);
        g.insert(0, 1, None);
        g.insert(1, 2, None); // 2 and 3 dangle
        let pr = oracle_pagerank(&g, 0.85, 1e-10, 500);
        let total: f64 = pr.iter().sum();
        assert!((total - 1.0).abs() < 1e-9, "mass drifted: {total}");
    }
}
