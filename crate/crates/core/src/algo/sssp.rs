//! Single-source shortest paths and breadth-first search over dynamic graphs.
//!
//! Both algorithms maintain an [`SsspTree`]: one atomic 64-bit word per
//! vertex packing `(distance, parent)` with the distance in the high half.
//! Relaxation is a `fetch_min` on that packed word, so concurrent workers
//! always converge to the lexicographically smallest `(distance, parent)`
//! pair — distances are exact and parent ties break toward the numerically
//! smallest parent, independent of worker count.
//!
//! The incremental kernels insert the batch and then re-relax outward from
//! the endpoints that improved. The decremental kernels delete the batch,
//! invalidate the subtree hanging off each severed tree edge (a rootward
//! walk with memoized verdicts), and then run relaxation to a fixpoint from
//! every vertex that still has a finite, provably correct distance.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::engine::{group_dequeue, Engine, Frontier, MAX_WIDTH};
use crate::error::{Error, Result};
use crate::graph::{DynamicGraph, EdgeBatch};
use crate::store::{cell_load, is_valid_vertex, pair_load, StoreKind, INVALID_VERTEX};

/// Distance value of an unreachable vertex.
pub const INF_DIST: u32 = u32::MAX;

#[inline]
fn pack(dist: u32, parent: u32) -> u64 {
    ((dist as u64) << 32) | parent as u64
}

#[inline]
fn unpack(word: u64) -> (u32, u32) {
    ((word >> 32) as u32, word as u32)
}

/// Counts reported by the decremental kernels: how many vertices lost their
/// distance because a tree edge was deleted outright, and how many more were
/// invalidated transitively because their tree path ran through one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct InvalidationStats {
    /// Vertices whose tree edge was in the deleted batch.
    pub direct: u64,
    /// Vertices invalidated because an ancestor was.
    pub propagated: u64,
}

/// A shortest-path tree rooted at a source vertex.
///
/// Every vertex stores `(distance, parent)` in one atomic word. Unreachable
/// vertices hold `(INF_DIST, INVALID_VERTEX)`; the source holds `(0, src)`.
#[derive(Debug)]
pub struct SsspTree {
    src: u32,
    nodes: Box<[AtomicU64]>,
}

impl SsspTree {
    /// Creates a tree over `vertex_n` vertices with only `src` settled.
    pub fn new(vertex_n: u32, src: u32) -> Result<Self> {
        if src >= vertex_n {
            return Err(Error::VertexOutOfRange(src, vertex_n));
        }
        let nodes: Box<[AtomicU64]> = (0..vertex_n)
            .map(|_| AtomicU64::new(pack(INF_DIST, INVALID_VERTEX)))
            .collect();
        nodes[src as usize].store(pack(0, src), Ordering::Relaxed);
        Ok(SsspTree { src, nodes })
    }

    /// The source vertex the tree is rooted at.
    pub fn src(&self) -> u32 {
        self.src
    }

    /// Number of vertices covered by the tree.
    pub fn len(&self) -> u32 {
        self.nodes.len() as u32
    }

    /// True when the tree covers no vertices (never the case for a valid tree).
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Current distance of `v`, `INF_DIST` when unreachable.
    pub fn dist(&self, v: u32) -> u32 {
        unpack(self.nodes[v as usize].load(Ordering::Acquire)).0
    }

    /// Current parent of `v`, `INVALID_VERTEX` when unreachable.
    pub fn parent(&self, v: u32) -> u32 {
        unpack(self.nodes[v as usize].load(Ordering::Acquire)).1
    }

    /// Snapshot of all distances.
    pub fn distances(&self) -> Vec<u32> {
        self.nodes
            .iter()
            .map(|n| unpack(n.load(Ordering::Acquire)).0)
            .collect()
    }

    /// Snapshot of all parents.
    pub fn parents(&self) -> Vec<u32> {
        self.nodes
            .iter()
            .map(|n| unpack(n.load(Ordering::Acquire)).1)
            .collect()
    }

    /// Offers `(dist, parent)` to `v`; returns true when it improved the
    /// stored pair. Equal distances keep the smaller parent and do not count
    /// as an improvement unless the parent shrank.
    pub(crate) fn relax(&self, v: u32, dist: u32, parent: u32) -> bool {
        let offer = pack(dist, parent);
        self.nodes[v as usize].fetch_min(offer, Ordering::AcqRel) > offer
    }

    /// Resets `v` to unreachable. Only used while invalidation holds the
    /// tree single-threaded, so a plain store is enough.
    fn invalidate(&self, v: u32) {
        self.nodes[v as usize].store(pack(INF_DIST, INVALID_VERTEX), Ordering::Release);
    }
}

/// Runs one cooperative relaxation round: every frontier vertex walks its
/// adjacency slab by slab, each slab's relaxations are gathered into a lane
/// array, and improved neighbors are appended to the next frontier one slab
/// group at a time. Returns the next frontier, sorted and deduplicated.
fn relax_round(
    engine: &Engine,
    g: &DynamicGraph,
    tree: &SsspTree,
    frontier: &[u32],
) -> Result<Vec<u32>> {
    let store = g.store();
    let geometry = store.geometry();
    let width = geometry.width() as usize;
    let next = Frontier::new(frontier.len().max(16));
    let stripes = frontier.len().div_ceil(width);

    engine.run_indexed(stripes, |stripe| {
        let base = stripe * width;
        let count = width.min(frontier.len() - base);
        let mut flags = [false; MAX_WIDTH];
        flags[..count].fill(true);
        while let Some(slot) = group_dequeue(&mut flags[..count]) {
            let u = frontier[base + slot];
            let du = tree.dist(u);
            if du == INF_DIST {
                continue;
            }
            let mut cur = crate::cursor::SlabCursor::begin(g, u)?;
            let mut improved: [Option<u32>; MAX_WIDTH] = [None; MAX_WIDTH];
            let group = geometry.capacity(store.kind()) as usize;
            while let Some(slab) = cur.slab() {
                improved.fill(None);
                let words = store.resolve(slab);
                for (slot, lane) in geometry.key_lanes(store.kind()).enumerate() {
                    if lane < cur.first_lane() {
                        continue;
                    }
                    let (nbr, w) = match store.kind() {
                        StoreKind::Set => (cell_load(words, lane), 1),
                        StoreKind::Map => pair_load(words, lane),
                    };
                    if !is_valid_vertex(nbr) {
                        continue;
                    }
                    let cand = du.saturating_add(w);
                    if cand == INF_DIST {
                        continue;
                    }
                    if tree.relax(nbr, cand, u) {
                        improved[slot] = Some(nbr);
                    }
                }
                next.enqueue_group(&improved[..group]);
                cur.next(g)?;
            }
        }
        Ok(())
    })?;

    let mut out = next.into_vec();
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Relaxes to a fixpoint starting from the given frontier.
fn run_to_fixpoint(
    engine: &Engine,
    g: &DynamicGraph,
    tree: &SsspTree,
    mut frontier: Vec<u32>,
) -> Result<()> {
    while !frontier.is_empty() {
        frontier = relax_round(engine, g, tree, &frontier)?;
    }
    Ok(())
}

fn from_scratch(engine: &Engine, g: &DynamicGraph, src: u32) -> Result<SsspTree> {
    let tree = SsspTree::new(g.vertex_n(), src)?;
    run_to_fixpoint(engine, g, &tree, vec![src])?;
    Ok(tree)
}

fn check_tree(g: &DynamicGraph, tree: &SsspTree) -> Result<()> {
    if tree.len() != g.vertex_n() {
        return Err(Error::VertexOutOfRange(tree.len(), g.vertex_n()));
    }
    Ok(())
}

/// Seeds the tree from freshly inserted edges and propagates improvements.
fn reseed_from_edges(
    engine: &Engine,
    g: &DynamicGraph,
    tree: &SsspTree,
    edges: &[(u32, u32, Option<u32>)],
) -> Result<()> {
    let mut seeds = Vec::new();
    for &(u, v, w) in edges {
        let du = tree.dist(u);
        if du == INF_DIST {
            continue;
        }
        let cand = du.saturating_add(w.unwrap_or(1));
        if cand == INF_DIST {
            continue;
        }
        if tree.relax(v, cand, u) {
            seeds.push(v);
        }
    }
    seeds.sort_unstable();
    seeds.dedup();
    run_to_fixpoint(engine, g, tree, seeds)
}

/// Deletes the batch, invalidates every vertex whose tree path was severed,
/// and repairs the tree by relaxing from all still-valid vertices.
fn repair_after_deletes(
    engine: &Engine,
    g: &DynamicGraph,
    tree: &SsspTree,
    batch: &EdgeBatch,
) -> Result<InvalidationStats> {
    let mut stats = InvalidationStats::default();

    // Vertices whose tree edge was deleted lose their distance outright.
    for (u, v, _) in batch.oriented() {
        if v != tree.src() && tree.dist(v) != INF_DIST && tree.parent(v) == u {
            tree.invalidate(v);
            stats.direct += 1;
        }
    }

    // Every other finite vertex walks rootward; if the walk reaches the
    // source (or a vertex already proven valid) the whole path is valid,
    // if it hits an invalidated vertex the whole path is invalid. Verdicts
    // are memoized so each vertex is classified once.
    const UNKNOWN: u8 = 0;
    const VALID: u8 = 1;
    const INVALID: u8 = 2;
    let n = g.vertex_n() as usize;
    let mut state = vec![UNKNOWN; n];
    state[tree.src() as usize] = VALID;
    let mut path = Vec::new();
    for v in 0..n as u32 {
        if tree.dist(v) == INF_DIST || state[v as usize] != UNKNOWN {
            continue;
        }
        path.clear();
        let mut cur = v;
        let mut hops = 0u32;
        let verdict = loop {
            match state[cur as usize] {
                VALID => break VALID,
                INVALID => break INVALID,
                _ => {}
            }
            if tree.dist(cur) == INF_DIST {
                break INVALID;
            }
            path.push(cur);
            cur = tree.parent(cur);
            hops += 1;
            if hops > g.vertex_n() {
                return Err(Error::CycleDetected(v));
            }
        };
        for &p in &path {
            state[p as usize] = verdict;
            if verdict == INVALID && tree.dist(p) != INF_DIST {
                tree.invalidate(p);
                stats.propagated += 1;
            }
        }
    }

    // Valid vertices keep exact distances (deletion can only lengthen paths
    // and their tree path survived), so relaxing from all of them repairs
    // every invalidated vertex that is still reachable.
    let frontier: Vec<u32> = (0..g.vertex_n())
        .filter(|&v| tree.dist(v) != INF_DIST)
        .collect();
    run_to_fixpoint(engine, g, tree, frontier)?;
    Ok(stats)
}

/// Computes a shortest-path tree from scratch on a weighted graph.
pub fn sssp_static(engine: &Engine, g: &DynamicGraph, src: u32) -> Result<SsspTree> {
    if !g.weighted() {
        return Err(Error::UnweightedGraph);
    }
    from_scratch(engine, g, src)
}

/// Inserts `batch` into the weighted graph and repairs `tree` in place.
pub fn sssp_incremental(
    engine: &Engine,
    g: &DynamicGraph,
    tree: &SsspTree,
    batch: &EdgeBatch,
) -> Result<()> {
    if !g.weighted() {
        return Err(Error::UnweightedGraph);
    }
    check_tree(g, tree)?;
    g.insert_edges(batch)?;
    reseed_from_edges(engine, g, tree, &batch.oriented())
}

/// Deletes `batch` from the weighted graph and repairs `tree` in place.
pub fn sssp_decremental(
    engine: &Engine,
    g: &DynamicGraph,
    tree: &SsspTree,
    batch: &EdgeBatch,
) -> Result<InvalidationStats> {
    if !g.weighted() {
        return Err(Error::UnweightedGraph);
    }
    check_tree(g, tree)?;
    g.delete_edges(batch)?;
    repair_after_deletes(engine, g, tree, batch)
}

/// Computes a hop-count tree from scratch on an unweighted graph. Rounds of
/// the underlying relaxation are level-synchronous: with unit weights a
/// vertex improves exactly once, when its level's frontier reaches it.
pub fn bfs_static(engine: &Engine, g: &DynamicGraph, src: u32) -> Result<SsspTree> {
    if g.weighted() {
        return Err(Error::WeightedGraph);
    }
    from_scratch(engine, g, src)
}

/// Inserts `batch` into the unweighted graph and repairs the hop-count tree.
pub fn bfs_incremental(
    engine: &Engine,
    g: &DynamicGraph,
    tree: &SsspTree,
    batch: &EdgeBatch,
) -> Result<()> {
    if g.weighted() {
        return Err(Error::WeightedGraph);
    }
    check_tree(g, tree)?;
    g.insert_edges(batch)?;
    reseed_from_edges(engine, g, tree, &batch.oriented())
}

/// Deletes `batch` from the unweighted graph and repairs the hop-count tree.
pub fn bfs_decremental(
    engine: &Engine,
    g: &DynamicGraph,
    tree: &SsspTree,
    batch: &EdgeBatch,
) -> Result<InvalidationStats> {
    if g.weighted() {
        return Err(Error::WeightedGraph);
    }
    check_tree(g, tree)?;
    g.delete_edges(batch)?;
    repair_after_deletes(engine, g, tree, batch)
}

/// Verifies the structural tree invariant: the source holds `(0, src)`,
/// unreachable vertices hold `(INF_DIST, INVALID_VERTEX)`, and every other
/// vertex has a finite parent connected by a stored edge whose weight adds
/// up exactly.
pub fn tree_is_consistent(g: &DynamicGraph, tree: &SsspTree) -> Result<bool> {
    if tree.len() != g.vertex_n() {
        return Ok(false);
    }
    for v in 0..g.vertex_n() {
        let (d, p) = (tree.dist(v), tree.parent(v));
        if v == tree.src() {
            if d != 0 || p != v {
                return Ok(false);
            }
            continue;
        }
        if d == INF_DIST {
            if p != INVALID_VERTEX {
                return Ok(false);
            }
            continue;
        }
        if p >= g.vertex_n() || tree.dist(p) == INF_DIST {
            return Ok(false);
        }
        let (present, w) = g.search_edge(p, v)?;
        if !present {
            return Ok(false);
        }
        let w = w.unwrap_or(1);
        if tree.dist(p).saturating_add(w) != d {
            return Ok(false);
        }
    }
    Ok(true)
}
