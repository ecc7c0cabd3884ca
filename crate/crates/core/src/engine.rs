//! Lane-group execution model.
//!
//! Traversals are expressed as *lane groups* of `W` cooperating lanes — the
//! slab width — so one group inspects a whole slab at once: lane `i` reads
//! cell `i`. On this CPU simulation a group is played by a single thread, and
//! an [`Engine`] distributes groups over a pool of worker threads. The group
//! primitives ([`group_dequeue`], [`group_broadcast`], [`group_reduce_sum`],
//! [`group_reduce_min`]) are deterministic: reductions fold lanes left to
//! right, so float results do not depend on worker count.
//!
//! Two work-distribution shapes are provided. The vertex-striped shape gives
//! each group a stripe of `W` vertices; the group elects members one at a
//! time ([`group_dequeue`]) and walks the elected vertex's whole adjacency.
//! The bucket-striped shape first expands vertices into (vertex, bucket)
//! pairs ([`expand_bucket_pairs`]) so each elected unit is a single chain,
//! which balances load when degrees are skewed. A third walker visits only
//! cells written since the last seal, via the update cursors.

use std::cell::UnsafeCell;
use std::mem::MaybeUninit;
use std::ops::Add;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::{Mutex, RwLock};

use crate::cursor::SlabCursor;
use crate::error::{Error, Result};
use crate::graph::DynamicGraph;
use crate::store::{cell_load, is_valid_vertex, pair_load, SlabRef, StoreKind};

/// Pops the lowest set lane of a group's member flags, if any.
pub fn group_dequeue(flags: &mut [bool]) -> Option<usize> {
    let lane = flags.iter().position(|&f| f)?;
    flags[lane] = false;
    Some(lane)
}

/// Every lane reads `lane`'s value.
pub fn group_broadcast<T: Copy>(values: &[T], lane: u32) -> Result<T> {
    values
        .get(lane as usize)
        .copied()
        .ok_or(Error::LaneOutOfRange(lane, values.len() as u32))
}

/// Sums lane values left to right (deterministic for floats).
pub fn group_reduce_sum<T: Copy + Default + Add<Output = T>>(values: &[T]) -> T {
    values.iter().fold(T::default(), |acc, &v| acc + v)
}

/// Minimum over lane values; `None` for an empty group.
pub fn group_reduce_min<T: Copy + Ord>(values: &[T]) -> Option<T> {
    values.iter().copied().min()
}

/// A grow-only concurrent output queue for traversal frontiers.
///
/// Writers claim a contiguous block of slots and fill it while holding the
/// shared lock; growth swaps the backing buffer under the exclusive lock.
/// Each appended block stays contiguous and in lane order, so a group's
/// enqueue appears as an uninterrupted run in the final vector. Contents are
/// read only by [`Frontier::into_vec`], which consumes the frontier after
/// all writers have quiesced (e.g. after the engine joins its workers).
pub struct Frontier<T> {
    slots: RwLock<Box<[UnsafeCell<MaybeUninit<T>>]>>,
    len: AtomicUsize,
}

// Safety: distinct writers touch disjoint claimed slots while holding the
// read lock; the buffer is only replaced under the write lock; values are
// only read after exclusive ownership is regained.
unsafe impl<T: Copy + Send> Sync for Frontier<T> {}

impl<T: Copy + Send> Frontier<T> {
    pub fn new(capacity: usize) -> Self {
        Frontier {
            slots: RwLock::new(Self::buffer(capacity.max(1))),
            len: AtomicUsize::new(0),
        }
    }

    fn buffer(capacity: usize) -> Box<[UnsafeCell<MaybeUninit<T>>]> {
        (0..capacity)
            .map(|_| UnsafeCell::new(MaybeUninit::uninit()))
            .collect()
    }

    /// Number of committed entries. Only advisory while writers are active.
    pub fn len(&self) -> usize {
        self.len.load(Ordering::Acquire)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Appends a contiguous block.
    pub fn append(&self, items: &[T]) {
        if items.is_empty() {
            return;
        }
        loop {
            let guard = self.slots.read().unwrap();
            let capacity = guard.len();
            let mut current = self.len.load(Ordering::Relaxed);
            let base = loop {
                let end = current + items.len();
                if end > capacity {
                    break None;
                }
                match self.len.compare_exchange_weak(
                    current,
                    end,
                    Ordering::AcqRel,
                    Ordering::Relaxed,
                ) {
                    Ok(_) => break Some(current),
                    Err(seen) => current = seen,
                }
            };
            match base {
                Some(base) => {
                    for (i, &item) in items.iter().enumerate() {
                        // Safety: slots [base, base+len) are exclusively ours.
                        unsafe { (*guard[base + i].get()).write(item) };
                    }
                    return;
                }
                None => {
                    let need = current + items.len();
                    drop(guard);
                    self.grow(need);
                }
            }
        }
    }

    /// Group enqueue: ballots the lanes holding a value, claims one block of
    /// that popcount, and writes each value at its lane rank. The block is
    /// contiguous and preserves lane order.
    pub fn enqueue_group(&self, lanes: &[Option<T>]) {
        let compacted: Vec<T> = lanes.iter().flatten().copied().collect();
        self.append(&compacted);
    }

    fn grow(&self, need: usize) {
        let mut guard = self.slots.write().unwrap();
        let capacity = guard.len();
        if capacity >= need {
            return; // someone else grew while we waited
        }
        let mut new_capacity = capacity.max(1);
        while new_capacity < need {
            new_capacity *= 2;
        }
        let mut fresh = Self::buffer(new_capacity);
        // All claims complete their writes before releasing the read lock,
        // so everything below `len` is initialized and safe to move.
        let committed = self.len.load(Ordering::Acquire);
        unsafe {
            std::ptr::copy_nonoverlapping(guard.as_ptr(), fresh.as_mut_ptr(), committed);
        }
        *guard = fresh;
    }

    /// Consumes the frontier after writers have quiesced.
    pub fn into_vec(self) -> Vec<T> {
        let len = self.len.into_inner();
        let slots = self.slots.into_inner().unwrap();
        slots
            .iter()
            .take(len)
            // Safety: the first `len` slots were written and we own the buffer.
            .map(|cell| unsafe { (*cell.get()).assume_init() })
            .collect()
    }
}

/// One live adjacency cell handed to a traversal visitor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct CellVisit {
    pub vertex: u32,
    pub neighbor: u32,
    /// Stored weight (weighted graphs only).
    pub weight: Option<u32>,
    /// Lane the cell occupies in its slab.
    pub lane: u32,
}

/// Expands a graph into parallel (vertex, bucket) arrays, one entry per
/// bucket, in vertex-major order. A vertex with three buckets followed by
/// one with two yields `[v0,v0,v0,v1,v1]` / `[0,1,2,0,1]`.
pub fn expand_bucket_pairs(g: &DynamicGraph) -> (Vec<u32>, Vec<u32>) {
    let counts = g.store().arena().bucket_count();
    let total: usize = counts.iter().map(|&c| c as usize).sum();
    let mut bucket_vertex = Vec::with_capacity(total);
    let mut bucket_index = Vec::with_capacity(total);
    for v in 0..g.vertex_n() {
        for b in 0..counts[v as usize] {
            bucket_vertex.push(v);
            bucket_index.push(b);
        }
    }
    (bucket_vertex, bucket_index)
}

/// Runs lane groups over a worker pool.
#[derive(Debug, Clone)]
pub struct Engine {
    workers: usize,
}

/// Largest supported group width, sized so per-group lane arrays can live
/// on the stack.
pub const MAX_WIDTH: usize = 64;

impl Engine {
    /// `workers == 0` uses the machine's available parallelism.
    pub fn new(workers: usize) -> Self {
        let workers = if workers == 0 {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        } else {
            workers
        };
        Engine { workers }
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    /// Runs `f(0..n)` across the pool; work items are claimed dynamically.
    /// The first error wins and stops further claims.
    pub fn run_indexed<F>(&self, n: usize, f: F) -> Result<()>
    where
        F: Fn(usize) -> Result<()> + Sync,
    {
        if self.workers == 1 || n <= 1 {
            for i in 0..n {
                f(i)?;
            }
            return Ok(());
        }
        let next = AtomicUsize::new(0);
        let stop = AtomicBool::new(false);
        let failure: Mutex<Option<Error>> = Mutex::new(None);
        std::thread::scope(|scope| {
            for _ in 0..self.workers.min(n) {
                scope.spawn(|| loop {
                    if stop.load(Ordering::Relaxed) {
                        break;
                    }
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    if i >= n {
                        break;
                    }
                    if let Err(e) = f(i) {
                        stop.store(true, Ordering::Relaxed);
                        let mut slot = failure.lock().unwrap();
                        if slot.is_none() {
                            *slot = Some(e);
                        }
                        break;
                    }
                });
            }
        });
        match failure.into_inner().unwrap() {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }

    /// Visits every live cell of every vertex: groups take stripes of `W`
    /// vertices, elect members one at a time, and walk the elected vertex's
    /// full adjacency chain by chain.
    pub fn for_each_cell<F>(&self, g: &DynamicGraph, f: F) -> Result<()>
    where
        F: Fn(CellVisit) -> Result<()> + Sync,
    {
        let vertices: Vec<u32> = (0..g.vertex_n()).collect();
        self.for_each_cell_in(g, &vertices, f)
    }

    /// [`Engine::for_each_cell`] restricted to the given vertices (a
    /// frontier). Vertices may repeat; each occurrence is walked.
    pub fn for_each_cell_in<F>(&self, g: &DynamicGraph, vertices: &[u32], f: F) -> Result<()>
    where
        F: Fn(CellVisit) -> Result<()> + Sync,
    {
        let width = g.store().geometry().width() as usize;
        let stripes = vertices.len().div_ceil(width);
        self.run_indexed(stripes, |stripe| {
            let base = stripe * width;
            let count = width.min(vertices.len() - base);
            let mut flags = [false; MAX_WIDTH];
            flags[..count].fill(true);
            while let Some(i) = group_dequeue(&mut flags[..count]) {
                let v = vertices[base + i];
                let mut cur = SlabCursor::begin(g, v)?;
                while let Some(slab) = cur.slab() {
                    visit_slab(g, v, slab, 0, &f)?;
                    cur.next(g)?;
                }
            }
            Ok(())
        })
    }

    /// Elects (vertex, bucket) pairs instead of vertices and hands each pair
    /// to the visitor; used when per-chain work beats per-vertex work.
    pub fn for_each_bucket<F>(&self, g: &DynamicGraph, f: F) -> Result<()>
    where
        F: Fn(u32, u32) -> Result<()> + Sync,
    {
        let (bucket_vertex, bucket_index) = expand_bucket_pairs(g);
        self.for_each_bucket_in(g, &bucket_vertex, &bucket_index, f)
    }

    /// [`Engine::for_each_bucket`] over an explicit pair list (parallel
    /// vertex/index slices), e.g. one filtered by a sampling predicate.
    pub fn for_each_bucket_in<F>(
        &self,
        g: &DynamicGraph,
        bucket_vertex: &[u32],
        bucket_index: &[u32],
        f: F,
    ) -> Result<()>
    where
        F: Fn(u32, u32) -> Result<()> + Sync,
    {
        debug_assert_eq!(bucket_vertex.len(), bucket_index.len());
        let width = g.store().geometry().width() as usize;
        let stripes = bucket_vertex.len().div_ceil(width);
        self.run_indexed(stripes, |stripe| {
            let base = stripe * width;
            let count = width.min(bucket_vertex.len() - base);
            let mut flags = [false; MAX_WIDTH];
            flags[..count].fill(true);
            while let Some(i) = group_dequeue(&mut flags[..count]) {
                f(bucket_vertex[base + i], bucket_index[base + i])?;
            }
            Ok(())
        })
    }

    /// Visits every live cell via bucket-pair election: same multiset of
    /// visits as [`Engine::for_each_cell`], finer-grained distribution.
    pub fn for_each_cell_bucketed<F>(&self, g: &DynamicGraph, f: F) -> Result<()>
    where
        F: Fn(CellVisit) -> Result<()> + Sync,
    {
        self.for_each_bucket(g, |v, b| {
            let mut cur = SlabCursor::begin_at(g, v, b)?;
            while let Some(slab) = cur.slab() {
                visit_slab(g, v, slab, 0, &f)?;
                cur.next(g)?;
            }
            Ok(())
        })
    }

    /// Visits only cells written since the last seal, honoring each updated
    /// list's first-update position. Requires update tracking.
    pub fn for_each_updated_cell<F>(&self, g: &DynamicGraph, f: F) -> Result<()>
    where
        F: Fn(CellVisit) -> Result<()> + Sync,
    {
        let vertices: Vec<u32> = (0..g.vertex_n()).collect();
        self.for_each_updated_cell_in(g, &vertices, f)
    }

    /// [`Engine::for_each_updated_cell`] restricted to the given vertices
    /// (e.g. the endpoints touched by a batch).
    pub fn for_each_updated_cell_in<F>(
        &self,
        g: &DynamicGraph,
        vertices: &[u32],
        f: F,
    ) -> Result<()>
    where
        F: Fn(CellVisit) -> Result<()> + Sync,
    {
        if !g.store().tracking() {
            return Err(Error::TrackingDisabled);
        }
        let width = g.store().geometry().width() as usize;
        let stripes = vertices.len().div_ceil(width);
        self.run_indexed(stripes, |stripe| {
            let base = stripe * width;
            let count = width.min(vertices.len() - base);
            let mut flags = [false; MAX_WIDTH];
            flags[..count].fill(true);
            while let Some(i) = group_dequeue(&mut flags[..count]) {
                let v = vertices[base + i];
                let mut cur = SlabCursor::update_begin(g, v)?;
                while let Some(slab) = cur.slab() {
                    visit_slab(g, v, slab, cur.first_lane(), &f)?;
                    cur.next(g)?;
                }
            }
            Ok(())
        })
    }
}

/// One slab's worth of lane reads: lane `i` inspects cell `i` (weighted
/// stores read whole pairs) and live cells are handed to the visitor.
fn visit_slab<F>(g: &DynamicGraph, vertex: u32, slab: SlabRef, first_lane: u32, f: &F) -> Result<()>
where
    F: Fn(CellVisit) -> Result<()>,
{
    let store = g.store();
    let geometry = store.geometry();
    let words = store.resolve(slab);
    match store.kind() {
        StoreKind::Set => {
            for lane in geometry.key_lanes(StoreKind::Set) {
                if lane < first_lane {
                    continue;
                }
                let word = cell_load(words, lane);
                if is_valid_vertex(word) {
                    f(CellVisit {
                        vertex,
                        neighbor: word,
                        weight: None,
                        lane,
                    })?;
                }
            }
        }
        StoreKind::Map => {
            for lane in geometry.key_lanes(StoreKind::Map) {
                if lane < first_lane {
                    continue;
                }
                let (key, weight) = pair_load(words, lane);
                if is_valid_vertex(key) {
                    f(CellVisit {
                        vertex,
                        neighbor: key,
                        weight: Some(weight),
                        lane,
                    })?;
                }
            }
        }
    }
    Ok(())
}
