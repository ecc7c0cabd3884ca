//! Slab-list adjacency storage.
//!
//! Every adjacency list is a chain of fixed-width *slabs*: `W` 32-bit cells
//! where `cells[W-1]` holds the handle of the next slab in the chain. A slab
//! therefore stores up to `W-1` neighbour keys (unweighted sets), or
//! `(W-2)/2` aligned `<key, weight>` pairs with `cells[W-2]` permanently
//! empty so every pair can be written with one 64-bit compare-and-swap
//! (weighted maps). At the default width of 32 a slab is 128 bytes — one
//! cache line per lane group — holding 31 keys or 15 pairs.
//!
//! The head slab of every hash bucket lives in a single contiguous arena
//! ([`arena::HeadArena`]); overflow slabs come from a growable pool with a
//! free list ([`pool::SlabPool`]). Cells are mutated exclusively through
//! 32-bit CAS (set cells, next-handle publication) and 64-bit CAS (map
//! pairs), so concurrent inserts, deletes, and searches never tear.
//!
//! Each list additionally carries update metadata: a flag plus the position
//! of the first cell written since the last [`AdjacencyStore::seal_list`].
//! With tracking enabled, tombstoned cells are never reused — inserts only
//! append — which is what makes "iterate exactly the cells written since the
//! last seal" a meaningful contract for incremental algorithms.

pub mod arena;
pub mod pool;

use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};
use arena::HeadArena;
use pool::SlabPool;

/// Vertex identifiers are 32-bit; the top three values are reserved.
pub type VertexId = u32;

/// Marks a never-written cell. Insertions claim empty cells with CAS.
pub const EMPTY_KEY: u32 = u32::MAX - 1;
/// Marks a deleted cell. Reused by inserts only while update tracking is off.
pub const TOMBSTONE_KEY: u32 = u32::MAX - 2;
/// Not a usable vertex id; doubles as the "no parent" marker in trees.
pub const INVALID_VERTEX: u32 = u32::MAX;

/// Next-handle value terminating a slab chain.
pub const INVALID_ADDRESS: u32 = u32::MAX;
/// Handle stand-in for an arena-resident head slab (heads have no pool handle).
pub const A_INDEX_POINTER: u32 = u32::MAX - 1;
/// Lane stand-in for "no writable lane" (the slab was full when sealed).
pub const INVALID_LANE: u32 = u32::MAX;

/// Largest usable pool handle; keeps handles clear of the two sentinels.
pub(crate) const MAX_POOL_HANDLE: u32 = u32::MAX - 2;

/// True iff a raw cell word is a usable vertex id (not a sentinel).
#[inline]
pub fn is_valid_vertex(word: u32) -> bool {
    word < TOMBSTONE_KEY
}

/// Whether a graph stores bare neighbour keys or `<key, weight>` pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StoreKind {
    Set,
    Map,
}

/// Result of inserting one directed edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InsertOutcome {
    /// The key was absent; a cell was claimed for it.
    Inserted,
    /// The key was already present (set insert).
    AlreadyPresent,
    /// The key was already present; its weight was overwritten (map insert).
    Updated,
}

/// Slab width and the cell layout it induces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Geometry {
    width: u32,
}

impl Geometry {
    /// Width must be even (cells pack two per 64-bit word), at least 4
    /// (otherwise a map slab has no room for a single pair), and at most 64
    /// (ballot masks are 64-bit).
    pub fn new(width: u32) -> Result<Self> {
        if width < 4 || width % 2 != 0 || width > 64 {
            return Err(Error::BadGroupWidth(width));
        }
        Ok(Geometry { width })
    }

    #[inline]
    pub fn width(self) -> u32 {
        self.width
    }

    #[inline]
    pub fn words_per_slab(self) -> usize {
        (self.width / 2) as usize
    }

    /// Lane of the next-slab handle cell.
    #[inline]
    pub fn next_lane(self) -> u32 {
        self.width - 1
    }

    /// Keys a set slab can hold (`W - 1`; 31 at the default width).
    #[inline]
    pub fn set_capacity(self) -> u32 {
        self.width - 1
    }

    /// Pairs a map slab can hold (`(W - 2) / 2`; 15 at the default width).
    #[inline]
    pub fn map_capacity(self) -> u32 {
        (self.width - 2) / 2
    }

    /// Keys or pairs per slab for the given store kind.
    #[inline]
    pub fn capacity(self, kind: StoreKind) -> u32 {
        match kind {
            StoreKind::Set => self.set_capacity(),
            StoreKind::Map => self.map_capacity(),
        }
    }

    /// Size of one slab in bytes (`W` 32-bit cells).
    #[inline]
    pub fn slab_bytes(self) -> usize {
        self.width as usize * 4
    }

    /// Lanes that hold keys: every lane below `W-1` for sets, even lanes
    /// below `W-2` for maps.
    pub fn key_lanes(self, kind: StoreKind) -> impl Iterator<Item = u32> {
        let (count, step) = match kind {
            StoreKind::Set => (self.set_capacity(), 1),
            StoreKind::Map => (self.map_capacity(), 2),
        };
        (0..count).map(move |i| i * step)
    }
}

/// Address of one slab: either a head slab inside the arena (indexed by its
/// list) or an overflow slab in the pool (indexed by handle).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SlabRef {
    Head { list: u32 },
    Pool { handle: u32 },
}

impl SlabRef {
    /// The handle value exposed through update cursors: head slabs have no
    /// pool handle and are reported as [`A_INDEX_POINTER`].
    pub fn handle_repr(self) -> u32 {
        match self {
            SlabRef::Head { .. } => A_INDEX_POINTER,
            SlabRef::Pool { handle } => handle,
        }
    }
}

// --- raw cell access -------------------------------------------------------
//
// Two 32-bit cells share each AtomicU64 word: cell 2k is the low half of word
// k. A 32-bit CAS loops on the containing word, comparing only its own half
// and preserving the other; a pair CAS is a plain 64-bit CAS because pairs
// start on even lanes and therefore occupy exactly one word.

#[inline]
pub(crate) fn cell_load(words: &[AtomicU64], lane: u32) -> u32 {
    let w = words[(lane / 2) as usize].load(Ordering::Acquire);
    if lane % 2 == 0 {
        w as u32
    } else {
        (w >> 32) as u32
    }
}

pub(crate) fn cell_cas(
    words: &[AtomicU64],
    lane: u32,
    expect: u32,
    new: u32,
) -> std::result::Result<(), u32> {
    let word = &words[(lane / 2) as usize];
    let low = lane % 2 == 0;
    let mut cur = word.load(Ordering::Acquire);
    loop {
        let half = if low { cur as u32 } else { (cur >> 32) as u32 };
        if half != expect {
            return Err(half);
        }
        let merged = if low {
            (cur & 0xFFFF_FFFF_0000_0000) | new as u64
        } else {
            (cur & 0x0000_0000_FFFF_FFFF) | ((new as u64) << 32)
        };
        match word.compare_exchange_weak(cur, merged, Ordering::AcqRel, Ordering::Acquire) {
            Ok(_) => return Ok(()),
            // The word changed under us — possibly only the other half.
            Err(actual) => cur = actual,
        }
    }
}

#[inline]
pub(crate) fn pair_load(words: &[AtomicU64], key_lane: u32) -> (u32, u32) {
    debug_assert_eq!(key_lane % 2, 0);
    let w = words[(key_lane / 2) as usize].load(Ordering::Acquire);
    (w as u32, (w >> 32) as u32)
}

pub(crate) fn pair_cas(
    words: &[AtomicU64],
    key_lane: u32,
    expect: (u32, u32),
    new: (u32, u32),
) -> std::result::Result<(), (u32, u32)> {
    debug_assert_eq!(key_lane % 2, 0);
    let word = &words[(key_lane / 2) as usize];
    let exp = pack_pair(expect);
    match word.compare_exchange(exp, pack_pair(new), Ordering::AcqRel, Ordering::Acquire) {
        Ok(_) => Ok(()),
        Err(actual) => Err((actual as u32, (actual >> 32) as u32)),
    }
}

#[inline]
fn pack_pair((k, w): (u32, u32)) -> u64 {
    k as u64 | ((w as u64) << 32)
}

/// Word pattern for a freshly scrubbed slab interior (two empty cells).
pub(crate) const EMPTY_WORD: u64 = EMPTY_KEY as u64 | ((EMPTY_KEY as u64) << 32);
/// Word pattern for a slab's last word: empty cell + chain terminator.
pub(crate) const TAIL_WORD: u64 = EMPTY_KEY as u64 | ((INVALID_ADDRESS as u64) << 32);

/// Writes the empty pattern into one slab's words.
pub(crate) fn scrub_slab(words: &[AtomicU64]) {
    let last = words.len() - 1;
    for w in &words[..last] {
        w.store(EMPTY_WORD, Ordering::Release);
    }
    words[last].store(TAIL_WORD, Ordering::Release);
}

// --- per-list update metadata ----------------------------------------------

/// Position of a cell inside a chain, ordered lexicographically by
/// (chain depth, lane) when packed into a u64.
#[inline]
fn pack_pos(depth: u32, lane: u32) -> u64 {
    ((depth as u64) << 32) | lane as u64
}

#[inline]
fn unpack_pos(packed: u64) -> (u32, u32) {
    ((packed >> 32) as u32, packed as u32)
}

const META_NONE: u64 = u64::MAX;

/// Update tracking for one slab list. `first_update` records the chain-order
/// minimum position written since the last seal (atomic-min keeps it exact
/// under concurrent inserts); `sealed` is the cursor left behind by the last
/// seal: the tail slab and its next writable lane (INVALID_LANE if full).
/// Construction behaves like a seal of the empty list, i.e. cursor
/// (head, lane 0).
struct ListMeta {
    first_update: AtomicU64,
    sealed: AtomicU64,
}

impl ListMeta {
    fn new() -> Self {
        ListMeta {
            first_update: AtomicU64::new(META_NONE),
            sealed: AtomicU64::new(pack_pos(0, 0)),
        }
    }
}

// --- the store --------------------------------------------------------------

/// Hash-bucketed slab lists for one graph: a head-slab arena, an overflow
/// pool, and per-list update metadata. Lists are addressed by a flat index
/// (the graph maps `(vertex, bucket)` to it); all mutation entry points take
/// `&self` and are safe to call concurrently.
pub struct AdjacencyStore {
    geometry: Geometry,
    kind: StoreKind,
    tracking: bool,
    arena: HeadArena,
    pool: SlabPool,
    meta: Box<[ListMeta]>,
}

impl AdjacencyStore {
    /// Builds the store: one contiguous head arena with `bucket_count[v]`
    /// head slabs per vertex and an empty overflow pool.
    pub fn build(
        geometry: Geometry,
        kind: StoreKind,
        tracking: bool,
        bucket_count: Vec<u32>,
    ) -> Result<Self> {
        let arena = HeadArena::build(geometry, bucket_count)?;
        let total = arena.total_slabs();
        let meta = (0..total).map(|_| ListMeta::new()).collect();
        Ok(AdjacencyStore {
            geometry,
            kind,
            tracking,
            arena,
            pool: SlabPool::new(geometry),
            meta,
        })
    }

    #[inline]
    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    #[inline]
    pub fn kind(&self) -> StoreKind {
        self.kind
    }

    #[inline]
    pub fn tracking(&self) -> bool {
        self.tracking
    }

    #[inline]
    pub fn arena(&self) -> &HeadArena {
        &self.arena
    }

    #[inline]
    pub fn pool(&self) -> &SlabPool {
        &self.pool
    }

    /// Raw words of one slab.
    #[inline]
    pub(crate) fn resolve(&self, slab: SlabRef) -> &[AtomicU64] {
        match slab {
            SlabRef::Head { list } => self.arena.slab_words(list),
            SlabRef::Pool { handle } => self.pool.words(handle),
        }
    }

    /// Follows the chain link of `slab`, if any.
    pub(crate) fn next_ref(&self, slab: SlabRef) -> Option<SlabRef> {
        let h = cell_load(self.resolve(slab), self.geometry.next_lane());
        if h == INVALID_ADDRESS {
            None
        } else {
            Some(SlabRef::Pool { handle: h })
        }
    }

    /// Reads one cell of one slab (no validity filtering).
    #[inline]
    pub(crate) fn slab_cell(&self, slab: SlabRef, lane: u32) -> u32 {
        cell_load(self.resolve(slab), lane)
    }

    fn note_insert(&self, list: u32, depth: u32, lane: u32) {
        if self.tracking {
            self.meta[list as usize]
                .first_update
                .fetch_min(pack_pos(depth, lane), Ordering::AcqRel);
        }
    }

    #[inline]
    fn check_key(key: u32) -> Result<()> {
        if key >= TOMBSTONE_KEY {
            Err(Error::SentinelKey(key))
        } else {
            Ok(())
        }
    }

    /// Inserts `key` into list `list`. Walks the chain once looking for the
    /// key and the first writable cell (empty; tombstones qualify only while
    /// tracking is off), claims it with CAS, and chains a fresh slab at the
    /// tail when no cell is writable. Any CAS surprise restarts the walk, so
    /// concurrent duplicate inserts resolve to exactly one `Inserted`.
    pub fn list_insert(&self, list: u32, key: u32, weight: Option<u32>) -> Result<InsertOutcome> {
        Self::check_key(key)?;
        debug_assert_eq!(weight.is_some(), self.kind == StoreKind::Map);
        'restart: loop {
            let mut slab = SlabRef::Head { list };
            let mut depth = 0u32;
            // (slab, depth, lane, expected current word at claim time)
            let mut writable: Option<(SlabRef, u32, u32, u32)> = None;
            let (tail, tail_depth) = loop {
                let words = self.resolve(slab);
                match self.kind {
                    StoreKind::Set => {
                        for lane in self.geometry.key_lanes(StoreKind::Set) {
                            let w = cell_load(words, lane);
                            if w == key {
                                return Ok(InsertOutcome::AlreadyPresent);
                            }
                            let open = w == EMPTY_KEY || (!self.tracking && w == TOMBSTONE_KEY);
                            if writable.is_none() && open {
                                writable = Some((slab, depth, lane, w));
                            }
                        }
                    }
                    StoreKind::Map => {
                        for lane in self.geometry.key_lanes(StoreKind::Map) {
                            let (k, w) = pair_load(words, lane);
                            if k == key {
                                // Key present: overwrite the weight in place.
                                let new_w = weight.expect("map insert carries a weight");
                                match pair_cas(words, lane, (k, w), (key, new_w)) {
                                    Ok(()) => return Ok(InsertOutcome::Updated),
                                    Err(_) => continue 'restart,
                                }
                            }
                            let open = (k == EMPTY_KEY && w == EMPTY_KEY)
                                || (!self.tracking && k == TOMBSTONE_KEY && w == TOMBSTONE_KEY);
                            if writable.is_none() && open {
                                writable = Some((slab, depth, lane, k));
                            }
                        }
                    }
                }
                match self.next_ref(slab) {
                    Some(next) => {
                        slab = next;
                        depth += 1;
                    }
                    None => break (slab, depth),
                }
            };

            // Key absent on this pass: claim the remembered cell, or grow.
            if let Some((s, d, lane, expect)) = writable {
                let words = self.resolve(s);
                match self.kind {
                    StoreKind::Set => match cell_cas(words, lane, expect, key) {
                        Ok(()) => {
                            self.note_insert(list, d, lane);
                            return Ok(InsertOutcome::Inserted);
                        }
                        Err(actual) if actual == key => return Ok(InsertOutcome::AlreadyPresent),
                        Err(_) => continue 'restart,
                    },
                    StoreKind::Map => {
                        let new = (key, weight.expect("map insert carries a weight"));
                        match pair_cas(words, lane, (expect, expect), new) {
                            Ok(()) => {
                                self.note_insert(list, d, lane);
                                return Ok(InsertOutcome::Inserted);
                            }
                            Err(_) => continue 'restart,
                        }
                    }
                }
            } else {
                // No writable cell anywhere: chain a fresh slab. The slab is
                // private until the next-handle CAS publishes it, so the key
                // can be written without contention.
                let handle = self.pool.alloc()?;
                let new_words = self.pool.words(handle);
                match self.kind {
                    StoreKind::Set => {
                        cell_cas(new_words, 0, EMPTY_KEY, key).expect("fresh slab is empty")
                    }
                    StoreKind::Map => {
                        let new = (key, weight.expect("map insert carries a weight"));
                        pair_cas(new_words, 0, (EMPTY_KEY, EMPTY_KEY), new)
                            .map(|_| ())
                            .expect("fresh slab is empty")
                    }
                }
                let tail_words = self.resolve(tail);
                match cell_cas(
                    tail_words,
                    self.geometry.next_lane(),
                    INVALID_ADDRESS,
                    handle,
                ) {
                    Ok(()) => {
                        self.note_insert(list, tail_depth + 1, 0);
                        return Ok(InsertOutcome::Inserted);
                    }
                    Err(_) => {
                        // Another worker chained first; recycle and rewalk.
                        self.pool.free(handle);
                        continue 'restart;
                    }
                }
            }
        }
    }

    /// Tombstones `key` in list `list`. Returns true iff a matching live cell
    /// existed and was tombstoned by this call.
    pub fn list_delete(&self, list: u32, key: u32) -> Result<bool> {
        Self::check_key(key)?;
        let mut slab = SlabRef::Head { list };
        loop {
            let words = self.resolve(slab);
            match self.kind {
                StoreKind::Set => {
                    for lane in self.geometry.key_lanes(StoreKind::Set) {
                        if cell_load(words, lane) == key {
                            return match cell_cas(words, lane, key, TOMBSTONE_KEY) {
                                Ok(()) => Ok(true),
                                // Live cells only ever transition key -> tombstone,
                                // so a failed CAS means another delete won.
                                Err(_) => Ok(false),
                            };
                        }
                    }
                }
                StoreKind::Map => {
                    for lane in self.geometry.key_lanes(StoreKind::Map) {
                        let (k, mut w) = pair_load(words, lane);
                        if k == key {
                            loop {
                                match pair_cas(
                                    words,
                                    lane,
                                    (key, w),
                                    (TOMBSTONE_KEY, TOMBSTONE_KEY),
                                ) {
                                    Ok(()) => return Ok(true),
                                    Err((ak, aw)) => {
                                        if ak != key {
                                            return Ok(false);
                                        }
                                        // Weight changed concurrently; retry.
                                        w = aw;
                                    }
                                }
                            }
                        }
                    }
                }
            }
            match self.next_ref(slab) {
                Some(next) => slab = next,
                None => return Ok(false),
            }
        }
    }

    /// Looks `key` up in list `list`; returns presence and, for maps, the
    /// stored weight.
    pub fn list_search(&self, list: u32, key: u32) -> Result<(bool, Option<u32>)> {
        Self::check_key(key)?;
        let mut slab = SlabRef::Head { list };
        loop {
            let words = self.resolve(slab);
            match self.kind {
                StoreKind::Set => {
                    for lane in self.geometry.key_lanes(StoreKind::Set) {
                        if cell_load(words, lane) == key {
                            return Ok((true, None));
                        }
                    }
                }
                StoreKind::Map => {
                    for lane in self.geometry.key_lanes(StoreKind::Map) {
                        let (k, w) = pair_load(words, lane);
                        if k == key {
                            return Ok((true, Some(w)));
                        }
                    }
                }
            }
            match self.next_ref(slab) {
                Some(next) => slab = next,
                None => return Ok((false, None)),
            }
        }
    }

    /// All live `(key, weight)` cells of one list in chain-then-lane order.
    pub fn list_valid_cells(&self, list: u32) -> Vec<(u32, Option<u32>)> {
        let mut out = Vec::new();
        let mut slab = Some(SlabRef::Head { list });
        while let Some(s) = slab {
            let words = self.resolve(s);
            for lane in self.geometry.key_lanes(self.kind) {
                match self.kind {
                    StoreKind::Set => {
                        let w = cell_load(words, lane);
                        if is_valid_vertex(w) {
                            out.push((w, None));
                        }
                    }
                    StoreKind::Map => {
                        let (k, w) = pair_load(words, lane);
                        if is_valid_vertex(k) {
                            out.push((k, Some(w)));
                        }
                    }
                }
            }
            slab = self.next_ref(s);
        }
        out
    }

    /// The slabs of one chain, head first.
    pub fn chain_slabs(&self, list: u32) -> Vec<SlabRef> {
        let mut out = vec![SlabRef::Head { list }];
        while let Some(next) = self.next_ref(*out.last().unwrap()) {
            out.push(next);
        }
        out
    }

    /// True iff list `list` has been written since the last seal.
    pub fn is_updated(&self, list: u32) -> bool {
        self.meta[list as usize]
            .first_update
            .load(Ordering::Acquire)
            != META_NONE
    }

    /// First slab and lane written since the last seal, if any.
    pub(crate) fn update_start(&self, list: u32) -> Option<(SlabRef, u32)> {
        let packed = self.meta[list as usize]
            .first_update
            .load(Ordering::Acquire);
        if packed == META_NONE {
            return None;
        }
        let (depth, lane) = unpack_pos(packed);
        Some((self.resolve_depth(list, depth), lane))
    }

    /// The list's update cursor as `(handle, lane)`: the first updated cell
    /// while the list is dirty, otherwise the position left by the last seal.
    /// Head slabs are reported as [`A_INDEX_POINTER`].
    pub fn update_cursor(&self, list: u32) -> (u32, u32) {
        let meta = &self.meta[list as usize];
        let packed = match meta.first_update.load(Ordering::Acquire) {
            META_NONE => meta.sealed.load(Ordering::Acquire),
            first => first,
        };
        let (depth, lane) = unpack_pos(packed);
        (self.resolve_depth(list, depth).handle_repr(), lane)
    }

    fn resolve_depth(&self, list: u32, depth: u32) -> SlabRef {
        let mut slab = SlabRef::Head { list };
        for _ in 0..depth {
            slab = self
                .next_ref(slab)
                .expect("recorded chain depth exceeds the chain");
        }
        slab
    }

    /// Seals one list: clears its updated flag and parks the cursor at the
    /// tail slab's next writable lane ([`INVALID_LANE`] when the tail is
    /// full, meaning future updates start in freshly chained slabs). Lists
    /// untouched since the last seal are left unchanged.
    pub fn seal_list(&self, list: u32) {
        let meta = &self.meta[list as usize];
        if meta.first_update.load(Ordering::Acquire) == META_NONE {
            return;
        }
        let mut slab = SlabRef::Head { list };
        let mut depth = 0u32;
        while let Some(next) = self.next_ref(slab) {
            slab = next;
            depth += 1;
        }
        let words = self.resolve(slab);
        let lane = self
            .geometry
            .key_lanes(self.kind)
            .find(|&lane| match self.kind {
                StoreKind::Set => cell_load(words, lane) == EMPTY_KEY,
                StoreKind::Map => pair_load(words, lane) == (EMPTY_KEY, EMPTY_KEY),
            })
            .unwrap_or(INVALID_LANE);
        meta.sealed.store(pack_pos(depth, lane), Ordering::Release);
        meta.first_update.store(META_NONE, Ordering::Release);
    }

    /// Seals every list. Call between update rounds, after mutation quiesces.
    pub fn seal_all(&self) {
        for list in 0..self.arena.total_slabs() {
            self.seal_list(list);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sentinel_values() {
        assert_eq!(EMPTY_KEY, 0xFFFF_FFFE);
        assert_eq!(TOMBSTONE_KEY, 0xFFFF_FFFD);
        assert_eq!(INVALID_VERTEX, 0xFFFF_FFFF);
        assert!(!is_valid_vertex(EMPTY_KEY));
        assert!(!is_valid_vertex(TOMBSTONE_KEY));
        assert!(!is_valid_vertex(INVALID_VERTEX));
        assert!(is_valid_vertex(0));
        assert!(is_valid_vertex(TOMBSTONE_KEY - 1));
    }

    #[test]
    fn geometry_default_width() {
        let g = Geometry::new(32).unwrap();
        assert_eq!(g.slab_bytes(), 128);
        assert_eq!(g.set_capacity(), 31);
        assert_eq!(g.map_capacity(), 15);
        assert_eq!(g.next_lane(), 31);
        assert_eq!(g.words_per_slab(), 16);
        // Map pairs sit on even lanes and stop short of cell W-2.
        let lanes: Vec<u32> = g.key_lanes(StoreKind::Map).collect();
        assert_eq!(lanes.first(), Some(&0));
        assert_eq!(lanes.last(), Some(&28));
        assert_eq!(lanes.len(), 15);
    }

    #[test]
    fn geometry_narrow_width() {
        let g = Geometry::new(4).unwrap();
        assert_eq!(g.set_capacity(), 3);
        assert_eq!(g.map_capacity(), 1);
        assert_eq!(g.key_lanes(StoreKind::Map).collect::<Vec<_>>(), vec![0]);
        assert_eq!(
            g.key_lanes(StoreKind::Set).collect::<Vec<_>>(),
            vec![0, 1, 2]
        );
    }

    #[test]
    fn geometry_rejects_bad_widths() {
        assert_eq!(Geometry::new(2), Err(Error::BadGroupWidth(2)));
        assert_eq!(Geometry::new(5), Err(Error::BadGroupWidth(5)));
        assert_eq!(Geometry::new(66), Err(Error::BadGroupWidth(66)));
    }

    #[test]
    fn cell_cas_preserves_other_half() {
        let words = [AtomicU64::new(EMPTY_WORD), AtomicU64::new(TAIL_WORD)];
        cell_cas(&words, 0, EMPTY_KEY, 7).unwrap();
        assert_eq!(cell_load(&words, 0), 7);
        assert_eq!(cell_load(&words, 1), EMPTY_KEY);
        cell_cas(&words, 1, EMPTY_KEY, 9).unwrap();
        assert_eq!(cell_load(&words, 0), 7);
        assert_eq!(cell_load(&words, 1), 9);
        // Next-handle cell is the high half of the last word.
        assert_eq!(cell_load(&words, 3), INVALID_ADDRESS);
        assert_eq!(cell_cas(&words, 0, EMPTY_KEY, 8), Err(7));
    }

    #[test]
    fn pair_cas_is_one_shot() {
        let words = [AtomicU64::new(EMPTY_WORD), AtomicU64::new(TAIL_WORD)];
        pair_cas(&words, 0, (EMPTY_KEY, EMPTY_KEY), (3, 40)).unwrap();
        assert_eq!(pair_load(&words, 0), (3, 40));
        assert_eq!(
            pair_cas(&words, 0, (EMPTY_KEY, EMPTY_KEY), (4, 50)),
            Err((3, 40))
        );
    }

    fn small_store(kind: StoreKind, tracking: bool) -> AdjacencyStore {
        AdjacencyStore::build(Geometry::new(4).unwrap(), kind, tracking, vec![1]).unwrap()
    }

    #[test]
    fn set_insert_search_delete_roundtrip() {
        let s = small_store(StoreKind::Set, false);
        assert_eq!(s.list_insert(0, 5, None).unwrap(), InsertOutcome::Inserted);
        assert_eq!(
            s.list_insert(0, 5, None).unwrap(),
            InsertOutcome::AlreadyPresent
        );
        assert_eq!(s.list_search(0, 5).unwrap(), (true, None));
        assert!(s.list_delete(0, 5).unwrap());
        assert!(!s.list_delete(0, 5).unwrap());
        assert_eq!(s.list_search(0, 5).unwrap(), (false, None));
    }

    #[test]
    fn sentinel_keys_are_rejected() {
        let s = small_store(StoreKind::Set, false);
        for key in [EMPTY_KEY, TOMBSTONE_KEY, INVALID_VERTEX] {
            assert_eq!(s.list_insert(0, key, None), Err(Error::SentinelKey(key)));
            assert_eq!(s.list_delete(0, key), Err(Error::SentinelKey(key)));
            assert_eq!(s.list_search(0, key), Err(Error::SentinelKey(key)));
        }
    }

    #[test]
    fn set_chains_past_capacity() {
        // Width 4 => 3 keys per slab; the 4th insert must chain.
        let s = small_store(StoreKind::Set, false);
        for k in 0..4 {
            assert_eq!(s.list_insert(0, k, None).unwrap(), InsertOutcome::Inserted);
        }
        assert_eq!(s.chain_slabs(0).len(), 2);
        let cells: Vec<u32> = s.list_valid_cells(0).iter().map(|c| c.0).collect();
        assert_eq!(cells, vec![0, 1, 2, 3]);
    }

    #[test]
    fn tombstone_reuse_depends_on_tracking() {
        // Tracking off: a tombstoned cell is reused in place.
        let s = small_store(StoreKind::Set, false);
        for k in 0..3 {
            s.list_insert(0, k, None).unwrap();
        }
        s.list_delete(0, 1).unwrap();
        s.list_insert(0, 9, None).unwrap();
        assert_eq!(s.chain_slabs(0).len(), 1);
        let cells: Vec<u32> = s.list_valid_cells(0).iter().map(|c| c.0).collect();
        assert_eq!(cells, vec![0, 9, 2]);

        // Tracking on: inserts append, leaving the tombstone in place.
        let s = small_store(StoreKind::Set, true);
        for k in 0..3 {
            s.list_insert(0, k, None).unwrap();
        }
        s.list_delete(0, 1).unwrap();
        s.list_insert(0, 9, None).unwrap();
        assert_eq!(s.chain_slabs(0).len(), 2);
        let cells: Vec<u32> = s.list_valid_cells(0).iter().map(|c| c.0).collect();
        assert_eq!(cells, vec![0, 2, 9]);
    }

    #[test]
    fn map_insert_updates_weight() {
        let s = small_store(StoreKind::Map, false);
        assert_eq!(
            s.list_insert(0, 4, Some(10)).unwrap(),
            InsertOutcome::Inserted
        );
        assert_eq!(
            s.list_insert(0, 4, Some(11)).unwrap(),
            InsertOutcome::Updated
        );
        assert_eq!(s.list_search(0, 4).unwrap(), (true, Some(11)));
        // Width 4 maps hold one pair; the second key chains.
        assert_eq!(
            s.list_insert(0, 6, Some(12)).unwrap(),
            InsertOutcome::Inserted
        );
        assert_eq!(s.chain_slabs(0).len(), 2);
        assert_eq!(s.list_search(0, 6).unwrap(), (true, Some(12)));
        assert!(s.list_delete(0, 4).unwrap());
        assert_eq!(s.list_search(0, 4).unwrap(), (false, None));
    }

    #[test]
    fn map_cell_before_handle_stays_empty() {
        let s = small_store(StoreKind::Map, false);
        for k in 0..3 {
            s.list_insert(0, k * 2, Some(k)).unwrap();
        }
        for slab in s.chain_slabs(0) {
            // Cell W-2 (lane 2 at width 4) is never written in map slabs.
            assert_eq!(s.slab_cell(slab, 2), EMPTY_KEY);
        }
    }

    #[test]
    fn update_metadata_tracks_first_write() {
        let s = small_store(StoreKind::Set, true);
        assert!(!s.is_updated(0));
        // A fresh list behaves as if sealed at (head, lane 0).
        assert_eq!(s.update_cursor(0), (A_INDEX_POINTER, 0));

        s.list_insert(0, 1, None).unwrap();
        assert!(s.is_updated(0));
        assert_eq!(s.update_cursor(0), (A_INDEX_POINTER, 0));

        s.seal_list(0);
        assert!(!s.is_updated(0));
        assert_eq!(s.update_cursor(0), (A_INDEX_POINTER, 1));

        // Next insert lands exactly at the sealed cursor.
        s.list_insert(0, 2, None).unwrap();
        assert_eq!(s.update_cursor(0), (A_INDEX_POINTER, 1));
    }

    #[test]
    fn seal_on_full_tail_parks_invalid_lane() {
        let s = small_store(StoreKind::Set, true);
        for k in 0..3 {
            s.list_insert(0, k, None).unwrap();
        }
        s.seal_list(0);
        assert_eq!(s.update_cursor(0), (A_INDEX_POINTER, INVALID_LANE));
        // The next insert chains; metadata records the fresh slab's lane 0.
        s.list_insert(0, 3, None).unwrap();
        let (handle, lane) = s.update_cursor(0);
        assert_ne!(handle, A_INDEX_POINTER);
        assert_eq!(lane, 0);
    }

    #[test]
    fn seal_is_idempotent() {
        let s = small_store(StoreKind::Set, true);
        s.list_insert(0, 1, None).unwrap();
        s.seal_list(0);
        let cursor = s.update_cursor(0);
        s.seal_list(0);
        assert_eq!(s.update_cursor(0), cursor);
        assert!(!s.is_updated(0));
    }

    #[test]
    fn concurrent_distinct_inserts_all_succeed() {
        use std::sync::atomic::AtomicU32;
        let s = AdjacencyStore::build(Geometry::new(32).unwrap(), StoreKind::Set, false, vec![1])
            .unwrap();
        let inserted = AtomicU32::new(0);
        std::thread::scope(|scope| {
            for t in 0..4 {
                let s = &s;
                let inserted = &inserted;
                scope.spawn(move || {
                    for k in 0..64u32 {
                        if s.list_insert(0, t * 64 + k, None).unwrap() == InsertOutcome::Inserted {
                            inserted.fetch_add(1, Ordering::Relaxed);
                        }
                    }
                });
            }
        });
        assert_eq!(inserted.load(Ordering::Relaxed), 256);
        assert_eq!(s.list_valid_cells(0).len(), 256);
    }

    #[test]
    fn concurrent_duplicate_inserts_yield_one_winner() {
        for _ in 0..50 {
            let s =
                AdjacencyStore::build(Geometry::new(32).unwrap(), StoreKind::Set, false, vec![1])
                    .unwrap();
            let wins: Vec<InsertOutcome> = std::thread::scope(|scope| {
                let handles: Vec<_> = (0..4)
                    .map(|_| {
                        let s = &s;
                        scope.spawn(move || s.list_insert(0, 42, None).unwrap())
                    })
                    .collect();
                handles.into_iter().map(|h| h.join().unwrap()).collect()
            });
            let inserted = wins
                .iter()
                .filter(|o| **o == InsertOutcome::Inserted)
                .count();
            assert_eq!(inserted, 1, "outcomes: {wins:?}");
            assert_eq!(s.list_valid_cells(0).len(), 1);
        }
    }
}
