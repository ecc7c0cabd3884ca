//! Randomized replay of graph mutations against a hash-map model.
//!
//! Every configuration axis that changes the storage layout is exercised:
//! slab width, set vs map cells, hashed vs single-bucket lists, and update
//! tracking. Each operation's outcome must match the model exactly, full
//! adjacency sweeps run periodically, and on tracked graphs the update
//! iterator census is compared against the set of fresh insertions after
//! every seal window.

use std::collections::{BTreeSet, HashMap};
use std::sync::Mutex;

use dyngraph_core::graph::GraphConfig;
use dyngraph_core::{DynamicGraph, Engine, InsertOutcome};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const VERTS: u32 = 40;
const OPS: usize = 12_000;
const SWEEP_EVERY: usize = 3_000;

struct Model {
    edges: HashMap<(u32, u32), Option<u32>>,
}

impl Model {
    fn new() -> Self {
        Model {
            edges: HashMap::new(),
        }
    }

    fn insert(&mut self, u: u32, v: u32, w: Option<u32>, weighted: bool) -> InsertOutcome {
        match self.edges.insert((u, v), w) {
            None => InsertOutcome::Inserted,
            Some(_) if weighted => InsertOutcome::Updated,
            Some(_) => InsertOutcome::AlreadyPresent,
        }
    }

    fn delete(&mut self, u: u32, v: u32) -> bool {
        self.edges.remove(&(u, v)).is_some()
    }

    fn search(&self, u: u32, v: u32) -> (bool, Option<u32>) {
        match self.edges.get(&(u, v)) {
            Some(w) => (true, *w),
            None => (false, None),
        }
    }

    fn snapshot(&self) -> Vec<std::collections::BTreeMap<u32, Option<u32>>> {
        let mut out = vec![std::collections::BTreeMap::new(); VERTS as usize];
        for (&(u, v), &w) in &self.edges {
            out[u as usize].insert(v, w);
        }
        out
    }
}

fn sweep(g: &DynamicGraph, model: &Model) {
    assert_eq!(g.edge_count(), model.edges.len());
    let snap = model.snapshot();
    for v in 0..VERTS {
        let mut got = g.neighbors(v).unwrap();
        got.sort_unstable();
        let want: Vec<(u32, Option<u32>)> =
            snap[v as usize].iter().map(|(&n, &w)| (n, w)).collect();
        assert_eq!(got, want, "neighbors of {v}");
        assert_eq!(g.degree(v).unwrap(), want.len(), "degree of {v}");
    }
    assert_eq!(g.snapshot_adjacency(), snap, "full adjacency snapshot");
}

fn update_census(engine: &Engine, g: &DynamicGraph) -> BTreeSet<(u32, u32)> {
    let seen = Mutex::new(BTreeSet::new());
    engine
        .for_each_updated_cell(g, |visit| {
            assert!(
                seen.lock().unwrap().insert((visit.vertex, visit.neighbor)),
                "duplicate updated cell ({}, {})",
                visit.vertex,
                visit.neighbor
            );
            Ok(())
        })
        .unwrap();
    seen.into_inner().unwrap()
}

fn replay(width: u32, weighted: bool, hashing: bool, tracking: bool, seed: u64) {
    let mut rng = StdRng::seed_from_u64(seed);
    let hints: Vec<u32> = (0..VERTS).map(|_| rng.random_range(1..120)).collect();
    let g = DynamicGraph::with_degree_hints(
        &GraphConfig {
            vertex_n: VERTS,
            weighted,
            hashing,
            update_tracking: tracking,
            group_width: width,
            ..GraphConfig::default()
        },
        &hints,
    )
    .unwrap();
    let engine = Engine::new(1);
    let mut model = Model::new();
    let mut fresh: BTreeSet<(u32, u32)> = BTreeSet::new();

    for op in 0..OPS {
        let u = rng.random_range(0..VERTS);
        let v = rng.random_range(0..VERTS);
        match rng.random_range(0..10) {
            0..=4 => {
                let w = weighted.then(|| rng.random_range(1..10u32));
                let got = g.insert_edge(u, v, w).unwrap();
                let want = model.insert(u, v, w, weighted);
                assert_eq!(got, want, "insert ({u}, {v}) at op {op}");
                if tracking && got == InsertOutcome::Inserted {
                    fresh.insert((u, v));
                }
            }
            5..=7 => {
                let got = g.delete_edge(u, v).unwrap();
                let want = model.delete(u, v);
                assert_eq!(got, want, "delete ({u}, {v}) at op {op}");
                if tracking && got {
                    fresh.remove(&(u, v));
                }
            }
            _ => {
                let got = g.search_edge(u, v).unwrap();
                let want = model.search(u, v);
                assert_eq!(got, want, "search ({u}, {v}) at op {op}");
            }
        }
        if (op + 1) % SWEEP_EVERY == 0 {
            sweep(&g, &model);
            if tracking {
                assert_eq!(
                    update_census(&engine, &g),
                    fresh,
                    "update census at op {op}"
                );
                g.seal_updates();
                fresh.clear();
                assert!(update_census(&engine, &g).is_empty(), "census after seal");
            }
        }
    }
    sweep(&g, &model);
}

#[test]
fn replay_matches_the_model_across_all_layouts() {
    let mut seed = 0x5eed_0001u64;
    for &width in &[4u32, 32] {
        for &weighted in &[false, true] {
            for &hashing in &[true, false] {
                for &tracking in &[false, true] {
                    replay(width, weighted, hashing, tracking, seed);
                    seed += 1;
                }
            }
        }
    }
}

#[test]
fn deletes_free_whole_chains_for_reuse_when_untracked() {
    // With tracking off, tombstoned cells are reusable: inserting after a
    // full wipe must not grow the pool further.
    let g = DynamicGraph::new(&GraphConfig {
        vertex_n: 300,
        group_width: 4,
        ..GraphConfig::default()
    })
    .unwrap();
    for k in 100..160u32 {
        g.insert_edge(0, k, None).unwrap();
    }
    let high = g.store().pool().high_water();
    for k in 100..160u32 {
        assert!(g.delete_edge(0, k).unwrap());
    }
    for k in 200..260u32 {
        g.insert_edge(0, k, None).unwrap();
    }
    assert_eq!(
        g.store().pool().high_water(),
        high,
        "tombstone reuse must not allocate new slabs"
    );
    let mut got = g.neighbors(0).unwrap();
    got.sort_unstable();
    let want: Vec<(u32, Option<u32>)> = (200..260).map(|k| (k, None)).collect();
    assert_eq!(got, want);
}
