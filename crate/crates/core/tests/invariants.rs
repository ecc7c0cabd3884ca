//! Property tests for the structural invariants of the store, the update
//! iterator, the work-queue frontier, and the lane-group traversals.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Mutex;

use dyngraph_core::graph::GraphConfig;
use dyngraph_core::{DynamicGraph, Engine, Frontier, InsertOutcome};
use proptest::prelude::*;

const VERTS: u32 = 24;

/// One scripted mutation. `kind` buckets into insert / delete / seal.
#[derive(Debug, Clone, Copy)]
struct Op {
    kind: u8,
    u: u32,
    v: u32,
    w: u32,
}

fn op_strategy() -> impl Strategy<Value = Op> {
    (0u8..10, 0..VERTS, 0..VERTS, 1u32..9).prop_map(|(kind, u, v, w)| Op { kind, u, v, w })
}

fn build_graph(width: u32, weighted: bool, tracking: bool) -> DynamicGraph {
    let hints: Vec<u32> = (0..VERTS).map(|v| 1 + (v * 17) % 90).collect();
    DynamicGraph::with_degree_hints(
        &GraphConfig {
            vertex_n: VERTS,
            weighted,
            hashing: true,
            update_tracking: tracking,
            group_width: width,
            ..GraphConfig::default()
        },
        &hints,
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// After any script, every slab chain is acyclic, every key lives in
    /// exactly one cell of exactly its hash bucket, and the stored edge set
    /// equals the model.
    #[test]
    fn chains_stay_acyclic_and_keys_unique(script in prop::collection::vec(op_strategy(), 1..300)) {
        let g = build_graph(4, false, false);
        let mut model: BTreeSet<(u32, u32)> = BTreeSet::new();
        for op in script {
            if op.kind < 6 {
                g.insert_edge(op.u, op.v, None).unwrap();
                model.insert((op.u, op.v));
            } else {
                g.delete_edge(op.u, op.v).unwrap();
                model.remove(&(op.u, op.v));
            }
        }
        let store = g.store();
        prop_assert_eq!(g.edge_count(), model.len());
        for v in 0..VERTS {
            let mut keys = Vec::new();
            for bucket in 0..g.bucket_count_of(v).unwrap() {
                let list = g.list_index_at(v, bucket).unwrap();
                // Chain handles never repeat: the walk is finite and acyclic.
                let chain = store.chain_slabs(list);
                let unique: BTreeSet<_> = chain.iter().map(|s| s.handle_repr()).collect();
                prop_assert_eq!(unique.len(), chain.len(), "cycle in chain of list {}", list);
                for (key, weight) in store.list_valid_cells(list) {
                    prop_assert_eq!(weight, None);
                    prop_assert_eq!(g.bucket_of(v, key).unwrap(), bucket, "key {} in wrong bucket", key);
                    keys.push(key);
                }
            }
            let unique: BTreeSet<_> = keys.iter().copied().collect();
            prop_assert_eq!(unique.len(), keys.len(), "duplicate live cells at vertex {}", v);
            let want: BTreeSet<u32> =
                model.iter().filter(|&&(u, _)| u == v).map(|&(_, n)| n).collect();
            prop_assert_eq!(unique, want, "edge set of vertex {}", v);
        }
    }

    /// The update iterator reports exactly the keys freshly inserted since
    /// the last seal and still present, no matter how inserts, deletes, and
    /// seals interleave.
    #[test]
    fn update_iterator_reports_exactly_the_fresh_inserts(
        script in prop::collection::vec(op_strategy(), 1..300),
        weighted in any::<bool>(),
    ) {
        let g = build_graph(4, weighted, true);
        let engine = Engine::new(1);
        let mut fresh: BTreeSet<(u32, u32)> = BTreeSet::new();
        for op in script {
            let w = weighted.then_some(op.w);
            if op.kind < 5 {
                if g.insert_edge(op.u, op.v, w).unwrap() == InsertOutcome::Inserted {
                    fresh.insert((op.u, op.v));
                }
            } else if op.kind < 9 {
                if g.delete_edge(op.u, op.v).unwrap() {
                    fresh.remove(&(op.u, op.v));
                }
            } else {
                g.seal_updates();
                fresh.clear();
            }
        }
        let seen = Mutex::new(BTreeSet::new());
        engine
            .for_each_updated_cell(&g, |visit| {
                assert!(
                    seen.lock().unwrap().insert((visit.vertex, visit.neighbor)),
                    "updated cell visited twice"
                );
                Ok(())
            })
            .unwrap();
        prop_assert_eq!(seen.into_inner().unwrap(), fresh);
    }

    /// Every group enqueued into a frontier comes back complete, in lane
    /// order, and contiguous, even under concurrent appends.
    #[test]
    fn frontier_groups_survive_concurrent_appends(
        cap in 1usize..48,
        masks in prop::collection::vec(prop::collection::vec(any::<bool>(), 0..9), 0..40),
        threads in 1usize..4,
    ) {
        // Tag each present lane with a globally unique id so blocks can be
        // located in the drained output.
        let groups: Vec<Vec<Option<u32>>> = masks
            .iter()
            .enumerate()
            .map(|(gi, mask)| {
                mask.iter()
                    .enumerate()
                    .map(|(si, &on)| on.then_some((gi as u32) << 8 | si as u32))
                    .collect()
            })
            .collect();
        let frontier = Frontier::new(cap);
        let frontier_ref = &frontier;
        std::thread::scope(|scope| {
            for chunk in groups.chunks(groups.len().div_ceil(threads).max(1)) {
                scope.spawn(move || {
                    for group in chunk {
                        frontier_ref.enqueue_group(group);
                    }
                });
            }
        });
        let drained = frontier.into_vec();
        let mut expected: Vec<u32> = groups.iter().flatten().filter_map(|&x| x).collect();
        let mut got = drained.clone();
        got.sort_unstable();
        expected.sort_unstable();
        prop_assert_eq!(got, expected, "every committed element drains exactly once");
        // Per-group contiguity in lane order.
        for (gi, group) in groups.iter().enumerate() {
            let ids: Vec<u32> = group.iter().filter_map(|&x| x).collect();
            if ids.is_empty() {
                continue;
            }
            let start = drained.iter().position(|&x| x == ids[0]).unwrap();
            prop_assert_eq!(
                &drained[start..start + ids.len()],
                &ids[..],
                "group {} not contiguous in lane order",
                gi
            );
        }
    }

    /// Lane-group traversals visit exactly the stored cells — identical for
    /// any slab width and worker count, plain or bucket-major.
    #[test]
    fn traversal_census_is_layout_independent(
        script in prop::collection::vec(op_strategy(), 1..200),
        workers in 1usize..4,
        width in prop_oneof![Just(4u32), Just(32u32)],
    ) {
        let g = build_graph(width, true, false);
        let mut model: BTreeMap<(u32, u32), u32> = BTreeMap::new();
        for op in script {
            if op.kind < 6 {
                g.insert_edge(op.u, op.v, Some(op.w)).unwrap();
                model.insert((op.u, op.v), op.w);
            } else {
                g.delete_edge(op.u, op.v).unwrap();
                model.remove(&(op.u, op.v));
            }
        }
        let engine = Engine::new(workers);
        let want: Vec<(u32, u32, Option<u32>)> =
            model.iter().map(|(&(u, v), &w)| (u, v, Some(w))).collect();
        let census = |bucketed: bool| {
            let cells = Mutex::new(Vec::new());
            let walk = |visit: dyngraph_core::CellVisit| {
                cells.lock().unwrap().push((visit.vertex, visit.neighbor, visit.weight));
                Ok(())
            };
            if bucketed {
                engine.for_each_cell_bucketed(&g, walk).unwrap();
            } else {
                engine.for_each_cell(&g, walk).unwrap();
            }
            let mut cells = cells.into_inner().unwrap();
            cells.sort_unstable();
            cells
        };
        prop_assert_eq!(census(false), want.clone());
        prop_assert_eq!(census(true), want);
    }
}
