//! Exact triangle counting with batch deltas.
//!
//! The static count intersects adjacency lists over every directed edge of a
//! symmetric graph and divides by six (each triangle is found once per
//! ordered edge). The dynamic entry points apply an undirected batch and
//! compute the triangle delta from three sums over the *post-update* graph
//! `G` and the set `B` of edges that actually changed:
//!
//! * `s1`: over ordered changed edges `(u, v)`, neighbors `w` of `u` in `G`
//!   with `{v, w}` also in `G` — triangles touching at least one changed
//!   edge, counted with multiplicity.
//! * `s2`: the same walk but requiring `{v, w}` to be a changed edge —
//!   corrects for triangles touching two changed edges.
//! * `s3`: over ordered changed edges `(u, v)`, vertices `w` where both
//!   `{u, w}` and `{v, w}` are changed edges — triangles made of three
//!   changed edges.
//!
//! A triangle with one, two, or three changed edges contributes 2, 4 or 6 to
//! `s1`; 0, 2 or 6 to `s2`; and 0, 0 or 6 to `s3`. Hence insertions add
//! `s1/2 - s2/2 + s3/6` (each new triangle counted once no matter how many
//! of its edges are new) and deletions remove `s1/2 + s2/2 + s3/6` (the
//! walks run on the already-shrunk graph, so the missing co-changed edges
//! are added back). The parities those identities rely on are checked and
//! reported as [`Error::DivisibilityViolation`] rather than silently
//! truncated.

use std::collections::{HashMap, HashSet};
use std::sync::atomic::{AtomicU64, Ordering};

use crate::engine::{group_dequeue, group_reduce_sum, Engine, MAX_WIDTH};
use crate::error::{Error, Result};
use crate::graph::{DynamicGraph, EdgeBatch, InsertOutcome};
use crate::store::{cell_load, is_valid_vertex, pair_load, StoreKind};

/// The three batch sums and the signed triangle delta they produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TriangleDelta {
    /// Changed-edge × graph-neighbor matches.
    pub s1: u64,
    /// Changed-edge × graph-neighbor matches closed by a changed edge.
    pub s2: u64,
    /// Changed-edge wedges closed by two more changed edges.
    pub s3: u64,
    /// Net change in the triangle count.
    pub delta: i64,
}

#[inline]
fn normalized(u: u32, v: u32) -> (u32, u32) {
    (u.min(v), u.max(v))
}

/// Walks `N(u)` for every ordered edge `(u, v)` in `edges` and counts lanes
/// where `probe(u, v, w)` accepts the neighbor `w` (self partners already
/// filtered). Lane hits are reduced per slab group and each edge posts one
/// atomic add.
fn edge_walk_count<P>(
    engine: &Engine,
    g: &DynamicGraph,
    edges: &[(u32, u32)],
    probe: P,
) -> Result<u64>
where
    P: Fn(u32, u32, u32) -> Result<bool> + Sync,
{
    let store = g.store();
    let geometry = store.geometry();
    let width = geometry.width() as usize;
    let capacity = geometry.capacity(store.kind()) as usize;
    let total = AtomicU64::new(0);
    let stripes = edges.len().div_ceil(width);
    engine.run_indexed(stripes, |stripe| {
        let base = stripe * width;
        let count = width.min(edges.len() - base);
        let mut flags = [false; MAX_WIDTH];
        flags[..count].fill(true);
        while let Some(slot) = group_dequeue(&mut flags[..count]) {
            let (u, v) = edges[base + slot];
            let mut edge_sum = 0u64;
            let mut lanes = [0u64; MAX_WIDTH];
            let mut cur = crate::cursor::SlabCursor::begin(g, u)?;
            while let Some(slab) = cur.slab() {
                lanes[..capacity].fill(0);
                let words = store.resolve(slab);
                for (lane_slot, lane) in geometry.key_lanes(store.kind()).enumerate() {
                    if lane < cur.first_lane() {
                        continue;
                    }
                    let w = match store.kind() {
                        StoreKind::Set => cell_load(words, lane),
                        StoreKind::Map => pair_load(words, lane).0,
                    };
                    if !is_valid_vertex(w) || w == u || w == v {
                        continue;
                    }
                    if probe(u, v, w)? {
                        lanes[lane_slot] = 1;
                    }
                }
                edge_sum += group_reduce_sum(&lanes[..capacity]);
                cur.next(g)?;
            }
            total.fetch_add(edge_sum, Ordering::Relaxed);
        }
        Ok(())
    })?;
    Ok(total.load(Ordering::Acquire))
}

/// Sum over ordered `edges` of `|N_adj(u) ∩ N_probe(v)|`, excluding the
/// endpoints themselves. Both graphs may be the same instance.
pub fn tc_count(
    engine: &Engine,
    g_adj: &DynamicGraph,
    g_probe: &DynamicGraph,
    edges: &[(u32, u32)],
) -> Result<u64> {
    edge_walk_count(engine, g_adj, edges, |_, v, w| {
        Ok(g_probe.search_edge(v, w)?.0)
    })
}

/// Counts the triangles of a symmetric graph from scratch.
pub fn tc_static(engine: &Engine, g: &DynamicGraph) -> Result<u64> {
    super::require_symmetric(engine, g)?;
    let edges: Vec<(u32, u32)> = g
        .directed_edges()
        .into_iter()
        .filter(|&(u, v, _)| u != v)
        .map(|(u, v, _)| (u, v))
        .collect();
    let total = tc_count(engine, g, g, &edges)?;
    if total % 6 != 0 {
        return Err(Error::DivisibilityViolation(total, 0, 0));
    }
    Ok(total / 6)
}

/// Normalized unique endpoint pairs of an undirected batch, self-loops
/// dropped. Directed batches are rejected: triangle maintenance is defined
/// on symmetric graphs only.
fn logical_pairs(batch: &EdgeBatch) -> Result<Vec<(u32, u32)>> {
    if batch.is_directed() {
        let &(u, v) = batch.edges().first().unwrap_or(&(0, 0));
        return Err(Error::NotSymmetric(u, v));
    }
    let mut seen = HashSet::new();
    let mut pairs = Vec::new();
    for &(u, v) in batch.edges() {
        if u == v {
            continue;
        }
        let p = normalized(u, v);
        if seen.insert(p) {
            pairs.push(p);
        }
    }
    Ok(pairs)
}

struct BatchView {
    /// Both orientations of every changed pair.
    ordered: Vec<(u32, u32)>,
    /// Normalized changed pairs for O(1) membership tests.
    pair_set: HashSet<(u32, u32)>,
    /// Changed-edge adjacency, both directions.
    adj: HashMap<u32, Vec<u32>>,
}

impl BatchView {
    fn new(changed: &[(u32, u32)]) -> Self {
        let mut ordered = Vec::with_capacity(changed.len() * 2);
        let mut pair_set = HashSet::with_capacity(changed.len());
        let mut adj: HashMap<u32, Vec<u32>> = HashMap::new();
        for &(u, v) in changed {
            ordered.push((u, v));
            ordered.push((v, u));
            pair_set.insert(normalized(u, v));
            adj.entry(u).or_default().push(v);
            adj.entry(v).or_default().push(u);
        }
        BatchView {
            ordered,
            pair_set,
            adj,
        }
    }

    fn sums(&self, engine: &Engine, g: &DynamicGraph) -> Result<(u64, u64, u64)> {
        let s1 = edge_walk_count(engine, g, &self.ordered, |_, v, w| {
            Ok(g.search_edge(v, w)?.0)
        })?;
        let s2 = edge_walk_count(engine, g, &self.ordered, |_, v, w| {
            Ok(self.pair_set.contains(&normalized(v, w)))
        })?;
        let mut s3 = 0u64;
        for &(u, v) in &self.ordered {
            if let Some(ws) = self.adj.get(&u) {
                for &w in ws {
                    if w != u && w != v && self.pair_set.contains(&normalized(v, w)) {
                        s3 += 1;
                    }
                }
            }
        }
        Ok((s1, s2, s3))
    }
}

fn checked_sums(engine: &Engine, g: &DynamicGraph, view: &BatchView) -> Result<(u64, u64, u64)> {
    let (s1, s2, s3) = view.sums(engine, g)?;
    if s1 % 2 != 0 || s2 % 2 != 0 || s3 % 6 != 0 {
        return Err(Error::DivisibilityViolation(s1, s2, s3));
    }
    Ok((s1, s2, s3))
}

/// Inserts an undirected batch (both orientations of every pair) and returns
/// the resulting triangle delta. Pairs already present are left untouched
/// and excluded from the delta sums. On weighted graphs fresh pairs are
/// stored with weight 1 — triangle counting ignores weights.
pub fn tc_incremental(
    engine: &Engine,
    g: &DynamicGraph,
    batch: &EdgeBatch,
) -> Result<TriangleDelta> {
    let pairs = logical_pairs(batch)?;
    let weight = if g.weighted() { Some(1) } else { None };
    let mut changed = Vec::new();
    for &(u, v) in &pairs {
        if g.search_edge(u, v)?.0 {
            continue;
        }
        let fwd = g.insert_edge(u, v, weight)?;
        g.insert_edge(v, u, weight)?;
        if fwd == InsertOutcome::Inserted {
            changed.push((u, v));
        }
    }
    let view = BatchView::new(&changed);
    let (s1, s2, s3) = checked_sums(engine, g, &view)?;
    let delta = (s1 / 2) as i64 - (s2 / 2) as i64 + (s3 / 6) as i64;
    Ok(TriangleDelta { s1, s2, s3, delta })
}

/// Deletes an undirected batch (both orientations of every pair) and returns
/// the resulting triangle delta. Pairs that were not present are excluded.
pub fn tc_decremental(
    engine: &Engine,
    g: &DynamicGraph,
    batch: &EdgeBatch,
) -> Result<TriangleDelta> {
    let pairs = logical_pairs(batch)?;
    let mut changed = Vec::new();
    for &(u, v) in &pairs {
        let fwd = g.delete_edge(u, v)?;
        g.delete_edge(v, u)?;
        if fwd {
            changed.push((u, v));
        }
    }
    let view = BatchView::new(&changed);
    let (s1, s2, s3) = checked_sums(engine, g, &view)?;
    let delta = -(((s1 / 2) + (s2 / 2) + (s3 / 6)) as i64);
    Ok(TriangleDelta { s1, s2, s3, delta })
}
