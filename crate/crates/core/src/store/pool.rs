//! Growable slab pool with a free list. Overflow slabs (everything past a
//! bucket's head slab) are allocated here and addressed by 32-bit handles.
//!
//! Growth is segmented: handles map into a ladder of chunks whose sizes
//! double, so already-published slabs never move when the pool grows and
//! readers can chase chain handles without any lock. Only handle allocation
//! itself (bumping the high-water mark or popping the free list) is guarded.

use std::sync::atomic::{AtomicU32, AtomicU64, Ordering};
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};

use super::{scrub_slab, Geometry, MAX_POOL_HANDLE};

/// Slabs in the first chunk; chunk `i` holds `POOL_BASE << i` slabs.
const POOL_BASE: u32 = 1024;
/// Enough chunks to cover the whole 32-bit handle space.
const POOL_CHUNKS: usize = 23;

pub struct SlabPool {
    words_per_slab: usize,
    chunks: Box<[OnceLock<Box<[AtomicU64]>>]>,
    next: AtomicU32,
    free: Mutex<Vec<u32>>,
}

/// Maps a handle to its chunk and the slab offset inside that chunk.
#[inline]
fn locate(handle: u32) -> (usize, usize) {
    let q = handle / POOL_BASE + 1;
    let chunk = (31 - q.leading_zeros()) as usize;
    let offset = handle - POOL_BASE * ((1u32 << chunk) - 1);
    (chunk, offset as usize)
}

impl SlabPool {
    pub fn new(geometry: Geometry) -> Self {
        SlabPool {
            words_per_slab: geometry.words_per_slab(),
            chunks: (0..POOL_CHUNKS).map(|_| OnceLock::new()).collect(),
            next: AtomicU32::new(0),
            free: Mutex::new(Vec::new()),
        }
    }

    /// Hands out a zero-initialized slab (all cells empty, chain terminated),
    /// preferring recycled handles. Reports `CapacityOverflow` instead of
    /// panicking when the handle space is exhausted.
    pub fn alloc(&self) -> Result<u32> {
        if let Some(handle) = self.free.lock().unwrap().pop() {
            scrub_slab(self.words(handle));
            return Ok(handle);
        }
        let handle = self.next.fetch_add(1, Ordering::AcqRel);
        if handle >= MAX_POOL_HANDLE {
            // Park the counter so repeated failures cannot wrap it.
            self.next.store(MAX_POOL_HANDLE, Ordering::Release);
            return Err(Error::CapacityOverflow);
        }
        let (chunk, _) = locate(handle);
        self.chunks[chunk].get_or_init(|| {
            let slabs = (POOL_BASE << chunk) as usize;
            let words: Box<[AtomicU64]> = (0..slabs * self.words_per_slab)
                .map(|_| AtomicU64::new(0))
                .collect();
            for s in 0..slabs {
                scrub_slab(&words[s * self.words_per_slab..(s + 1) * self.words_per_slab]);
            }
            words
        });
        Ok(handle)
    }

    /// Returns a slab to the free list. The caller must guarantee no list
    /// still links to it.
    pub fn free(&self, handle: u32) {
        self.free.lock().unwrap().push(handle);
    }

    /// Words of one allocated slab.
    #[inline]
    pub(crate) fn words(&self, handle: u32) -> &[AtomicU64] {
        let (chunk, offset) = locate(handle);
        let words = self.chunks[chunk]
            .get()
            .expect("slab handle references an unallocated chunk");
        &words[offset * self.words_per_slab..(offset + 1) * self.words_per_slab]
    }

    /// Handles handed out so far (including since-freed ones).
    pub fn high_water(&self) -> u32 {
        self.next.load(Ordering::Acquire)
    }

    /// Currently live slabs.
    pub fn live_slabs(&self) -> u32 {
        self.high_water() - self.free.lock().unwrap().len() as u32
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::store::{cell_load, EMPTY_KEY, INVALID_ADDRESS};

    #[test]
    fn handles_locate_into_chunk_ladder() {
        assert_eq!(locate(0), (0, 0));
        assert_eq!(locate(1023), (0, 1023));
        assert_eq!(locate(1024), (1, 0));
        assert_eq!(locate(3071), (1, 2047));
        assert_eq!(locate(3072), (2, 0));
    }

    #[test]
    fn fresh_slabs_are_scrubbed() {
        let pool = SlabPool::new(Geometry::new(4).unwrap());
        let h = pool.alloc().unwrap();
        assert_eq!(h, 0);
        let words = pool.words(h);
        for lane in 0..3 {
            assert_eq!(cell_load(words, lane), EMPTY_KEY);
        }
        assert_eq!(cell_load(words, 3), INVALID_ADDRESS);
    }

    #[test]
    fn freed_handles_are_recycled_scrubbed() {
        let pool = SlabPool::new(Geometry::new(4).unwrap());
        let h = pool.alloc().unwrap();
        super::super::cell_cas(pool.words(h), 0, EMPTY_KEY, 77).unwrap();
        pool.free(h);
        let again = pool.alloc().unwrap();
        assert_eq!(again, h);
        assert_eq!(cell_load(pool.words(again), 0), EMPTY_KEY);
        assert_eq!(pool.live_slabs(), 1);
    }

    #[test]
    fn allocations_hand_out_distinct_handles() {
        let pool = SlabPool::new(Geometry::new(32).unwrap());
        let mut seen = std::collections::HashSet::new();
        for _ in 0..1500 {
            assert!(seen.insert(pool.alloc().unwrap()));
        }
        assert_eq!(pool.high_water(), 1500);
    }
}
