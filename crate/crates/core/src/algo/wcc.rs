//! Weakly-connected components via sampled hooking and union-find.
//!
//! The static pass runs five phases:
//!
//! 1. **Min hooking** — every `(vertex, bucket)` list keeps a per-lane
//!    running minimum across its whole slab chain, reduces the lanes once at
//!    the end, and hooks the vertex toward that minimum neighbor with a
//!    `fetch_min` on its raw parent slot. This is a sampling step: a hook
//!    may overwrite an earlier link and drop it, so it can under-merge but
//!    never over-merge.
//! 2. **Union residue** — lists whose vertex is still its own parent run
//!    full unions over their edges.
//! 3. **Label census** — a histogram over raw parent slots picks the most
//!    frequent label (smallest label on ties).
//! 4. **Finish** — lists whose vertex does not carry that majority label run
//!    full unions; a list may be skipped only when the vertex's parent is
//!    the majority label, and every skipped edge either has both endpoints
//!    already linked to the majority component or is unioned from its other
//!    side.
//! 5. **Compress** — all parent chains are flattened, and labels become the
//!    component minima.
//!
//! The majority-label skip in phase 4 is sound only when every edge is
//! stored in both directions: a skipped list's edges must be reachable from
//! their other endpoint's list. The static pass therefore requires a
//! symmetric graph and rejects one-directional storage with
//! [`Error::NotSymmetric`]; weak connectivity of a directed graph is
//! obtained by symmetrizing it at ingestion.
//!
//! The incremental pass inserts a batch into an update-tracking graph and
//! replays only the updated slab suffixes of the endpoints' lists, unioning
//! each replayed edge — no skip is involved, so batch direction does not
//! matter there. Component labels are minima in both passes, so the results
//! are directly comparable to the static oracle.

use crate::engine::{expand_bucket_pairs, group_reduce_min, Engine, MAX_WIDTH};
use crate::error::{Error, Result};
use crate::graph::{DynamicGraph, EdgeBatch};
use crate::store::{cell_load, is_valid_vertex, pair_load, StoreKind};
use crate::union_find::UnionFind;

fn check_len(g: &DynamicGraph, uf: &UnionFind) -> Result<()> {
    if uf.len() != g.vertex_n() {
        return Err(Error::VertexOutOfRange(uf.len(), g.vertex_n()));
    }
    Ok(())
}

/// Phase 1: per-lane minima over each list's whole chain, one reduce per
/// list, one raw-parent `fetch_min` per non-empty list.
fn min_hooking(engine: &Engine, g: &DynamicGraph, uf: &UnionFind) -> Result<()> {
    let store = g.store();
    let geometry = store.geometry();
    let capacity = geometry.capacity(store.kind()) as usize;
    engine.for_each_bucket(g, |v, bucket| {
        let mut lane_mins = [u32::MAX; MAX_WIDTH];
        let mut cur = crate::cursor::SlabCursor::begin_at(g, v, bucket)?;
        while let Some(slab) = cur.slab() {
            let words = store.resolve(slab);
            for (slot, lane) in geometry.key_lanes(store.kind()).enumerate() {
                if lane < cur.first_lane() {
                    continue;
                }
                let nbr = match store.kind() {
                    StoreKind::Set => cell_load(words, lane),
                    StoreKind::Map => pair_load(words, lane).0,
                };
                if is_valid_vertex(nbr) && nbr < lane_mins[slot] {
                    lane_mins[slot] = nbr;
                }
            }
            cur.next(g)?;
        }
        if let Some(min) = group_reduce_min(&lane_mins[..capacity]) {
            if min != u32::MAX {
                uf.hook_min(v, min);
            }
        }
        Ok(())
    })
}

/// Phases 2 and 4: full unions over a filtered set of lists.
fn union_lists(
    engine: &Engine,
    g: &DynamicGraph,
    uf: &UnionFind,
    bucket_vertex: &[u32],
    bucket_index: &[u32],
) -> Result<()> {
    let store = g.store();
    let geometry = store.geometry();
    engine.for_each_bucket_in(g, bucket_vertex, bucket_index, |v, bucket| {
        let mut cur = crate::cursor::SlabCursor::begin_at(g, v, bucket)?;
        while let Some(slab) = cur.slab() {
            let words = store.resolve(slab);
            for lane in geometry.key_lanes(store.kind()) {
                if lane < cur.first_lane() {
                    continue;
                }
                let nbr = match store.kind() {
                    StoreKind::Set => cell_load(words, lane),
                    StoreKind::Map => pair_load(words, lane).0,
                };
                if is_valid_vertex(nbr) {
                    uf.union_async(v, nbr);
                }
            }
            cur.next(g)?;
        }
        Ok(())
    })
}

/// Phase 3: the most frequent raw parent, smallest on ties.
fn majority_label(uf: &UnionFind) -> u32 {
    let mut histogram = vec![0u64; uf.len() as usize];
    for v in 0..uf.len() {
        histogram[uf.parent(v) as usize] += 1;
    }
    let mut best = 0u32;
    for label in 1..histogram.len() as u32 {
        if histogram[label as usize] > histogram[best as usize] {
            best = label;
        }
    }
    best
}

/// Computes component labels from scratch into a fresh union-find.
/// Labels are component minima.
pub fn wcc_static(engine: &Engine, g: &DynamicGraph) -> Result<Vec<u32>> {
    let uf = UnionFind::new(g.vertex_n());
    wcc_static_with(engine, g, &uf)
}

/// [`wcc_static`] into a caller-owned union-find, so later incremental
/// batches can continue from the same structure. When the graph tracks
/// updates, the pass seals them afterwards: the static result already
/// accounts for every stored edge, so only newer insertions remain pending.
pub fn wcc_static_with(engine: &Engine, g: &DynamicGraph, uf: &UnionFind) -> Result<Vec<u32>> {
    check_len(g, uf)?;
    if g.vertex_n() == 0 {
        return Ok(Vec::new());
    }
    super::require_symmetric(engine, g)?;

    min_hooking(engine, g, uf)?;

    let (bucket_vertex, bucket_index) = expand_bucket_pairs(g);
    let mut residue_v = Vec::new();
    let mut residue_b = Vec::new();
    for i in 0..bucket_vertex.len() {
        let v = bucket_vertex[i];
        if uf.parent(v) == v {
            residue_v.push(v);
            residue_b.push(bucket_index[i]);
        }
    }
    union_lists(engine, g, uf, &residue_v, &residue_b)?;

    let majority = majority_label(uf);

    let mut finish_v = Vec::new();
    let mut finish_b = Vec::new();
    for i in 0..bucket_vertex.len() {
        let v = bucket_vertex[i];
        if uf.parent(v) != majority {
            finish_v.push(v);
            finish_b.push(bucket_index[i]);
        }
    }
    union_lists(engine, g, uf, &finish_v, &finish_b)?;

    uf.compress_all();
    if g.store().tracking() {
        g.seal_updates();
    }
    Ok(uf.labels())
}

/// Inserts `batch` into an update-tracking graph, unions exactly the
/// replayed updated cells of the endpoints' lists, and reseals. Returns the
/// refreshed labels (component minima).
pub fn wcc_incremental(
    engine: &Engine,
    g: &DynamicGraph,
    uf: &UnionFind,
    batch: &EdgeBatch,
) -> Result<Vec<u32>> {
    if !g.store().tracking() {
        return Err(Error::TrackingDisabled);
    }
    check_len(g, uf)?;
    g.insert_edges(batch)?;
    let mut endpoints: Vec<u32> = batch.oriented().iter().map(|&(u, _, _)| u).collect();
    endpoints.sort_unstable();
    endpoints.dedup();
    engine.for_each_updated_cell_in(g, &endpoints, |visit| {
        uf.union_async(visit.vertex, visit.neighbor);
        Ok(())
    })?;
    uf.compress_all();
    g.seal_updates();
    Ok(uf.labels())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphConfig;
    use crate::oracle::{oracle_wcc, PlainGraph};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn graph(n: u32, width: u32, tracking: bool) -> DynamicGraph {
        DynamicGraph::new(&GraphConfig {
            vertex_n: n,
            group_width: width,
            update_tracking: tracking,
            ..GraphConfig::default()
        })
        .unwrap()
    }

    fn insert_sym(g: &DynamicGraph, u: u32, v: u32) {
        g.insert_edge(u, v, None).unwrap();
        g.insert_edge(v, u, None).unwrap();
    }

    #[test]
    fn two_pairs_label_by_minimum() {
        let g = graph(5, 32, false);
        insert_sym(&g, 0, 1);
        insert_sym(&g, 2, 3);
        let engine = Engine::new(1);
        assert_eq!(wcc_static(&engine, &g).unwrap(), vec![0, 0, 2, 2, 4]);
    }

    #[test]
    fn empty_and_single_vertex_graphs_work() {
        let engine = Engine::new(1);
        let g = graph(0, 32, false);
        assert_eq!(wcc_static(&engine, &g).unwrap(), Vec::<u32>::new());
        let g = graph(1, 32, false);
        assert_eq!(wcc_static(&engine, &g).unwrap(), vec![0]);
    }

    #[test]
    fn one_directional_storage_is_rejected() {
        // The phase-4 skip is unsound on directed storage, so the static
        // pass refuses it; symmetrized, the same edges label weakly.
        let g = graph(4, 32, false);
        g.insert_edge(1, 0, None).unwrap();
        g.insert_edge(1, 2, None).unwrap();
        let engine = Engine::new(2);
        assert!(matches!(
            wcc_static(&engine, &g).unwrap_err(),
            Error::NotSymmetric(1, _)
        ));
        g.insert_edge(0, 1, None).unwrap();
        g.insert_edge(2, 1, None).unwrap();
        assert_eq!(wcc_static(&engine, &g).unwrap(), vec![0, 0, 0, 3]);
    }

    #[test]
    fn giant_component_with_satellites_exercises_the_majority_skip() {
        // Vertices 0..50 form a chain (the majority component); pairs beyond
        // form satellites that must not be absorbed.
        let g = graph(60, 4, false);
        for v in 0..49 {
            insert_sym(&g, v, v + 1);
        }
        for v in (50..60).step_by(2) {
            insert_sym(&g, v, v + 1);
        }
        let engine = Engine::new(3);
        let labels = wcc_static(&engine, &g).unwrap();
        let mut want: Vec<u32> = vec![0; 50];
        for v in (50..60u32).step_by(2) {
            want.push(v);
            want.push(v);
        }
        assert_eq!(labels, want);
    }

    #[test]
    fn labels_are_component_minima() {
        let mut rng = StdRng::seed_from_u64(0x33);
        let g = graph(80, 4, false);
        for _ in 0..60 {
            let u = rng.random_range(0..80);
            let v = rng.random_range(0..80);
            if u != v {
                insert_sym(&g, u, v);
            }
        }
        let engine = Engine::new(4);
        let labels = wcc_static(&engine, &g).unwrap();
        for (v, &l) in labels.iter().enumerate() {
            assert_eq!(labels[l as usize], l);
            assert!(l as usize <= v);
        }
    }

    #[test]
    fn random_graphs_match_the_oracle() {
        for trial in 0..10u64 {
            for &(width, workers) in &[(4u32, 1usize), (32, 4)] {
                let mut rng = StdRng::seed_from_u64(0xcc0 + trial);
                let n = 100u32;
                let g = graph(n, width, false);
                let mut plain = PlainGraph::new(n);
                for _ in 0..rng.random_range(20..130) {
                    let u = rng.random_range(0..n);
                    let v = rng.random_range(0..n);
                    if u == v {
                        continue;
                    }
                    insert_sym(&g, u, v);
                    plain.insert_undirected(u, v, None);
                }
                let engine = Engine::new(workers);
                assert_eq!(wcc_static(&engine, &g).unwrap(), oracle_wcc(&plain));
            }
        }
    }

    #[test]
    fn incremental_batches_match_the_oracle() {
        for trial in 0..6u64 {
            let mut rng = StdRng::seed_from_u64(0x1cc + trial);
            let n = 120u32;
            let g = graph(n, 4, true);
            let mut plain = PlainGraph::new(n);
            for _ in 0..80 {
                let u = rng.random_range(0..n);
                let v = rng.random_range(0..n);
                if u != v {
                    insert_sym(&g, u, v);
                    plain.insert_undirected(u, v, None);
                }
            }
            let engine = Engine::new(2);
            let uf = UnionFind::new(n);
            assert_eq!(
                wcc_static_with(&engine, &g, &uf).unwrap(),
                oracle_wcc(&plain)
            );

            for _ in 0..5 {
                let mut edges = Vec::new();
                while edges.len() < 15 {
                    let u = rng.random_range(0..n);
                    let v = rng.random_range(0..n);
                    if u != v {
                        edges.push((u, v));
                    }
                }
                for &(u, v) in &edges {
                    plain.insert_undirected(u, v, None);
                }
                let batch = EdgeBatch::undirected(edges, None).unwrap();
                let labels = wcc_incremental(&engine, &g, &uf, &batch).unwrap();
                assert_eq!(labels, oracle_wcc(&plain));
            }
        }
    }

    #[test]
    fn incremental_requires_update_tracking() {
        let g = graph(4, 32, false);
        let engine = Engine::new(1);
        let uf = UnionFind::new(4);
        let batch = EdgeBatch::undirected(vec![(0, 1)], None).unwrap();
        assert_eq!(
            wcc_incremental(&engine, &g, &uf, &batch).unwrap_err(),
            Error::TrackingDisabled
        );
    }
}
