//! Head-slab arena: one contiguous allocation holding every bucket's head
//! slab, laid out by an exclusive scan over per-vertex bucket counts.

use std::sync::atomic::AtomicU64;

use crate::error::{Error, Result};

use super::{scrub_slab, Geometry};

/// All head slabs of a graph in a single backing array. Vertex `v` owns the
/// slabs at indices `offsets[v] .. offsets[v] + bucket_count[v]`; slab `i`
/// occupies the words `i * words_per_slab ..` of the backing allocation.
pub struct HeadArena {
    words_per_slab: usize,
    offsets: Vec<u32>,
    bucket_count: Vec<u32>,
    total: u32,
    words: Box<[AtomicU64]>,
}

impl HeadArena {
    /// Lays out one head slab per bucket: `offsets` is the exclusive scan of
    /// `bucket_count`. Fails with `CapacityOverflow` if the total exceeds the
    /// 32-bit list-index space.
    pub fn build(geometry: Geometry, bucket_count: Vec<u32>) -> Result<Self> {
        debug_assert!(bucket_count.iter().all(|&c| c >= 1));
        let mut offsets = Vec::with_capacity(bucket_count.len());
        let mut total: u64 = 0;
        for &count in &bucket_count {
            offsets.push(total as u32);
            total += count as u64;
            if total > super::MAX_POOL_HANDLE as u64 {
                return Err(Error::CapacityOverflow);
            }
        }
        let words_per_slab = geometry.words_per_slab();
        let words: Box<[AtomicU64]> = (0..total as usize * words_per_slab)
            .map(|_| AtomicU64::new(0))
            .collect();
        for slab in 0..total as usize {
            scrub_slab(&words[slab * words_per_slab..(slab + 1) * words_per_slab]);
        }
        Ok(HeadArena {
            words_per_slab,
            offsets,
            bucket_count,
            total: total as u32,
            words,
        })
    }

    #[inline]
    pub fn total_slabs(&self) -> u32 {
        self.total
    }

    #[inline]
    pub fn offsets(&self) -> &[u32] {
        &self.offsets
    }

    #[inline]
    pub fn bucket_count(&self) -> &[u32] {
        &self.bucket_count
    }

    /// First list index of vertex `v`.
    #[inline]
    pub fn offset_of(&self, v: u32) -> u32 {
        self.offsets[v as usize]
    }

    #[inline]
    pub(crate) fn slab_words(&self, index: u32) -> &[AtomicU64] {
        let start = index as usize * self.words_per_slab;
        &self.words[start..start + self.words_per_slab]
    }

    /// The whole backing array; tests use it to verify the arena really is a
    /// single contiguous allocation.
    pub fn backing_words(&self) -> &[AtomicU64] {
        &self.words
    }
}
