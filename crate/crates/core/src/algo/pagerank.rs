//! PageRank over a dynamic in-edge graph.
//!
//! The graph passed to [`pagerank`] stores *incoming* edges: the adjacency
//! list of `v` holds the vertices that link to `v`. Out-degrees live in a
//! caller-maintained side array because the in-edge store cannot answer them.
//! [`apply_directed_inserts`] keeps both in sync when a batch of forward
//! edges `u -> v` arrives.
//!
//! Every iteration first caches `contribution[u] = score[u] / out_degree[u]`
//! and folds the dangling mass sequentially, then scores all vertices in
//! parallel: each vertex walks its in-list slab by slab, loads one lane per
//! in-neighbor, and reduces the lane contributions left to right. Because
//! each vertex's sum always folds in storage order and every other float
//! operation is sequential, the result is bit-identical for any worker
//! count. A warm rerun on an existing state converges in few iterations and
//! costs exactly one iteration when nothing changed.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::engine::{group_dequeue, group_reduce_sum, Engine, MAX_WIDTH};
use crate::error::{Error, Result};
use crate::graph::{DynamicGraph, EdgeBatch, InsertOutcome};
use crate::store::{cell_load, is_valid_vertex, pair_load, StoreKind};

/// Scores plus the fixed solver parameters, reusable across reruns.
#[derive(Debug, Clone, PartialEq)]
pub struct PageRankState {
    /// Current score per vertex; sums to 1 across reachable mass.
    pub scores: Vec<f64>,
    damping: f64,
    eps: f64,
    max_iter: u32,
}

impl PageRankState {
    /// Uniform starting state. `damping` must lie in `[0, 1)` and `eps`
    /// must be a positive finite threshold on the L1 score change.
    pub fn new(vertex_n: u32, damping: f64, eps: f64, max_iter: u32) -> Result<Self> {
        if !(0.0..1.0).contains(&damping) {
            return Err(Error::BadDamping(damping));
        }
        if !(eps > 0.0) || !eps.is_finite() {
            return Err(Error::BadEpsilon(eps));
        }
        let scores = if vertex_n == 0 {
            Vec::new()
        } else {
            vec![1.0 / vertex_n as f64; vertex_n as usize]
        };
        Ok(PageRankState {
            scores,
            damping,
            eps,
            max_iter,
        })
    }

    /// Damping factor.
    pub fn damping(&self) -> f64 {
        self.damping
    }

    /// Convergence threshold.
    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Iteration budget per [`pagerank`] call.
    pub fn max_iter(&self) -> u32 {
        self.max_iter
    }
}

/// Runs PageRank until the L1 change drops to `eps` or the iteration budget
/// is spent, updating `state.scores` in place. Returns the iteration count.
pub fn pagerank(
    engine: &Engine,
    g_in: &DynamicGraph,
    out_degree: &[u32],
    state: &mut PageRankState,
) -> Result<u32> {
    let n = g_in.vertex_n() as usize;
    if out_degree.len() != n {
        return Err(Error::BadDegreeHints(out_degree.len(), g_in.vertex_n()));
    }
    if state.scores.len() != n {
        return Err(Error::BadDegreeHints(state.scores.len(), g_in.vertex_n()));
    }
    if n == 0 {
        return Ok(0);
    }

    let store = g_in.store();
    let geometry = store.geometry();
    let width = geometry.width() as usize;
    let capacity = geometry.capacity(store.kind()) as usize;
    let damping = state.damping;
    let inv_n = 1.0 / n as f64;

    let mut contribution = vec![0.0f64; n];
    let next: Vec<AtomicU64> = (0..n).map(|_| AtomicU64::new(0)).collect();

    let mut iterations = 0u32;
    while iterations < state.max_iter {
        // Sequential prologue: per-vertex contributions and dangling mass,
        // folded in vertex order so the totals are reproducible.
        let mut dangling = 0.0f64;
        for v in 0..n {
            if out_degree[v] == 0 {
                dangling += state.scores[v];
                contribution[v] = 0.0;
            } else {
                contribution[v] = state.scores[v] / out_degree[v] as f64;
            }
        }
        let base = (1.0 - damping) * inv_n + damping * dangling * inv_n;

        // Parallel scoring: stripes of `width` vertices elect group leaders;
        // each elected vertex folds its in-neighbor contributions slab by
        // slab and publishes the new score through an atomic bit store.
        let contribution = &contribution;
        let next = &next;
        let stripes = n.div_ceil(width);
        engine.run_indexed(stripes, |stripe| {
            let base_v = stripe * width;
            let count = width.min(n - base_v);
            let mut flags = [false; MAX_WIDTH];
            flags[..count].fill(true);
            while let Some(slot) = group_dequeue(&mut flags[..count]) {
                let v = (base_v + slot) as u32;
                let mut acc = 0.0f64;
                let mut lanes = [0.0f64; MAX_WIDTH];
                let mut cur = crate::cursor::SlabCursor::begin(g_in, v)?;
                while let Some(slab) = cur.slab() {
                    lanes[..capacity].fill(0.0);
                    let words = store.resolve(slab);
                    for (lane_slot, lane) in geometry.key_lanes(store.kind()).enumerate() {
                        if lane < cur.first_lane() {
                            continue;
                        }
                        let nbr = match store.kind() {
                            StoreKind::Set => cell_load(words, lane),
                            StoreKind::Map => pair_load(words, lane).0,
                        };
                        if is_valid_vertex(nbr) {
                            lanes[lane_slot] = contribution[nbr as usize];
                        }
                    }
                    acc += group_reduce_sum(&lanes[..capacity]);
                    cur.next(g_in)?;
                }
                let score = base + damping * acc;
                next[v as usize].store(score.to_bits(), Ordering::Release);
            }
            Ok(())
        })?;

        // Sequential epilogue: L1 delta and state swap.
        let mut l1 = 0.0f64;
        for v in 0..n {
            let new = f64::from_bits(next[v].load(Ordering::Acquire));
            l1 += (new - state.scores[v]).abs();
            state.scores[v] = new;
        }
        iterations += 1;
        if l1 <= state.eps {
            break;
        }
    }
    Ok(iterations)
}

/// Applies a batch of forward edges `u -> v` to the in-edge graph and the
/// out-degree array: each edge is stored reversed as `(v, u)` and bumps
/// `out_degree[u]` when it is new. Returns how many edges were new.
pub fn apply_directed_inserts(
    g_in: &DynamicGraph,
    out_degree: &mut [u32],
    batch: &EdgeBatch,
) -> Result<u64> {
    if out_degree.len() != g_in.vertex_n() as usize {
        return Err(Error::BadDegreeHints(out_degree.len(), g_in.vertex_n()));
    }
    let mut inserted = 0u64;
    for (u, v, w) in batch.oriented() {
        if g_in.insert_edge(v, u, w)? == InsertOutcome::Inserted {
            out_degree[u as usize] += 1;
            inserted += 1;
        }
    }
    Ok(inserted)
}

/// Removes a batch of forward edges `u -> v` from the in-edge graph and the
/// out-degree array: each edge is deleted as `(v, u)` and decrements
/// `out_degree[u]` when it was present. Returns how many edges were removed.
pub fn apply_directed_deletes(
    g_in: &DynamicGraph,
    out_degree: &mut [u32],
    batch: &EdgeBatch,
) -> Result<u64> {
    if out_degree.len() != g_in.vertex_n() as usize {
        return Err(Error::BadDegreeHints(out_degree.len(), g_in.vertex_n()));
    }
    let mut removed = 0u64;
    for (u, v, _) in batch.oriented() {
        if g_in.delete_edge(v, u)? {
            out_degree[u as usize] -= 1;
            removed += 1;
        }
    }
    Ok(removed)
}
