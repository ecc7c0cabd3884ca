//! Slab cursors: explicit positions inside a vertex's adjacency lists.
//!
//! A [`SlabCursor`] names one slab of one vertex, plus the first lane a
//! consumer should look at. Three traversal kinds exist:
//!
//! * [`IterKind::Slab`] walks every slab of every bucket of the vertex,
//! * [`IterKind::Bucket`] walks the chain of a single bucket,
//! * [`IterKind::Update`] walks only the cells written since the last seal,
//!   starting mid-slab where the first post-seal write landed.
//!
//! Cursors are plain values: advancing one never blocks concurrent writers,
//! and a cursor taken while writers are active sees some consistent subset
//! of their effects. The canonical end position compares equal regardless of
//! how it was produced (constructed directly or reached by advancing).

use crate::error::{Error, Result};
use crate::graph::DynamicGraph;
use crate::store::SlabRef;

/// Traversal flavor of a [`SlabCursor`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IterKind {
    /// All buckets of the vertex, chain order within each bucket.
    Slab,
    /// One bucket's chain only.
    Bucket,
    /// Updated lists only, from their first post-seal write onward.
    Update,
}

/// A position inside one vertex's adjacency storage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SlabCursor {
    vertex: u32,
    kind: IterKind,
    bucket: u32,
    slab: Option<SlabRef>,
    first_lane: u32,
}

impl SlabCursor {
    fn at(vertex: u32, kind: IterKind, bucket: u32, slab: SlabRef, first_lane: u32) -> Self {
        SlabCursor {
            vertex,
            kind,
            bucket,
            slab: Some(slab),
            first_lane,
        }
    }

    fn done(vertex: u32, kind: IterKind) -> Self {
        SlabCursor {
            vertex,
            kind,
            bucket: u32::MAX,
            slab: None,
            first_lane: 0,
        }
    }

    /// Start of a full walk over `v`'s lists: bucket 0's head slab. An
    /// isolated vertex still has a head slab, so `begin != end` even when
    /// nothing is stored.
    pub fn begin(g: &DynamicGraph, v: u32) -> Result<Self> {
        let list = g.list_index_at(v, 0)?;
        Ok(Self::at(v, IterKind::Slab, 0, SlabRef::Head { list }, 0))
    }

    /// Canonical end of a full walk.
    pub fn end(v: u32) -> Self {
        Self::done(v, IterKind::Slab)
    }

    /// Start of a walk over one bucket's chain.
    pub fn begin_at(g: &DynamicGraph, v: u32, bucket: u32) -> Result<Self> {
        let list = g.list_index_at(v, bucket)?;
        Ok(Self::at(
            v,
            IterKind::Bucket,
            bucket,
            SlabRef::Head { list },
            0,
        ))
    }

    /// Canonical end of a single-bucket walk.
    pub fn end_at(v: u32) -> Self {
        Self::done(v, IterKind::Bucket)
    }

    /// Start of an update walk: the first updated bucket's first post-seal
    /// write position. Requires update tracking; a vertex with no updated
    /// lists starts at [`SlabCursor::update_end`].
    pub fn update_begin(g: &DynamicGraph, v: u32) -> Result<Self> {
        if !g.store().tracking() {
            return Err(Error::TrackingDisabled);
        }
        let buckets = g.bucket_count_of(v)?;
        Ok(Self::next_updated_bucket(g, v, 0, buckets))
    }

    /// Canonical end of an update walk.
    pub fn update_end(v: u32) -> Self {
        Self::done(v, IterKind::Update)
    }

    fn next_updated_bucket(g: &DynamicGraph, v: u32, from: u32, buckets: u32) -> Self {
        let base = g.store().arena().offset_of(v);
        for bucket in from..buckets {
            if let Some((slab, lane)) = g.store().update_start(base + bucket) {
                return Self::at(v, IterKind::Update, bucket, slab, lane);
            }
        }
        Self::done(v, IterKind::Update)
    }

    #[inline]
    pub fn vertex(&self) -> u32 {
        self.vertex
    }

    #[inline]
    pub fn kind(&self) -> IterKind {
        self.kind
    }

    /// Bucket of the current slab (`u32::MAX` at end).
    #[inline]
    pub fn bucket(&self) -> u32 {
        self.bucket
    }

    /// Current slab, or `None` at end.
    #[inline]
    pub fn slab(&self) -> Option<SlabRef> {
        self.slab
    }

    /// First lane of the current slab a consumer should read. Nonzero only
    /// on the first slab of an updated list.
    #[inline]
    pub fn first_lane(&self) -> u32 {
        self.first_lane
    }

    #[inline]
    pub fn is_end(&self) -> bool {
        self.slab.is_none()
    }

    /// Reads one raw cell of the current slab (no validity filtering; next
    /// pointers and sentinel words are returned as stored).
    pub fn get(&self, g: &DynamicGraph, lane: u32) -> Result<u32> {
        let slab = self.slab.ok_or(Error::IterateEnd)?;
        let width = g.store().geometry().width();
        if lane >= width {
            return Err(Error::LaneOutOfRange(lane, width));
        }
        Ok(g.store().slab_cell(slab, lane))
    }

    /// Advances to the next slab of the walk; reaching the end yields the
    /// canonical end cursor. Advancing an end cursor is an error.
    pub fn next(&mut self, g: &DynamicGraph) -> Result<()> {
        let slab = self.slab.ok_or(Error::IterateEnd)?;
        if let Some(next) = g.store().next_ref(slab) {
            self.slab = Some(next);
            self.first_lane = 0;
            return Ok(());
        }
        // End of this bucket's chain.
        match self.kind {
            IterKind::Bucket => *self = Self::done(self.vertex, self.kind),
            IterKind::Slab => {
                let buckets = g.bucket_count_of(self.vertex)?;
                if self.bucket + 1 < buckets {
                    let list = g.list_index_at(self.vertex, self.bucket + 1)?;
                    *self = Self::at(
                        self.vertex,
                        IterKind::Slab,
                        self.bucket + 1,
                        SlabRef::Head { list },
                        0,
                    );
                } else {
                    *self = Self::done(self.vertex, self.kind);
                }
            }
            IterKind::Update => {
                let buckets = g.bucket_count_of(self.vertex)?;
                *self = Self::next_updated_bucket(g, self.vertex, self.bucket + 1, buckets);
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{DynamicGraph, GraphConfig};
    use crate::store::{is_valid_vertex, EMPTY_KEY};
    use std::collections::BTreeSet;

    fn narrow(n: u32, tracking: bool, hints: &[u32]) -> DynamicGraph {
        let config = GraphConfig {
            vertex_n: n,
            group_width: 4, // set capacity 3: chains form quickly
            update_tracking: tracking,
            ..GraphConfig::default()
        };
        DynamicGraph::with_degree_hints(&config, hints).unwrap()
    }

    /// Collect live keys from `cur` to end, honoring first_lane on entry.
    fn drain(g: &DynamicGraph, mut cur: SlabCursor) -> Vec<u32> {
        let geometry = g.store().geometry();
        let kind = g.store().kind();
        let mut out = Vec::new();
        while !cur.is_end() {
            for lane in geometry.key_lanes(kind) {
                if lane < cur.first_lane() {
                    continue;
                }
                let word = cur.get(g, lane).unwrap();
                if is_valid_vertex(word) {
                    out.push(word);
                }
            }
            cur.next(g).unwrap();
        }
        out
    }

    #[test]
    fn isolated_vertex_has_one_empty_slab() {
        let g = narrow(2, false, &[1, 1]);
        let cur = SlabCursor::begin(&g, 1).unwrap();
        assert_ne!(cur, SlabCursor::end(1));
        assert_eq!(cur.get(&g, 0).unwrap(), EMPTY_KEY);
        assert!(drain(&g, cur).is_empty());
        let mut cur = cur;
        cur.next(&g).unwrap();
        assert_eq!(cur, SlabCursor::end(1));
        assert!(cur.is_end());
        assert_eq!(cur.next(&g).unwrap_err(), Error::IterateEnd);
        assert_eq!(cur.get(&g, 0).unwrap_err(), Error::IterateEnd);
    }

    #[test]
    fn lane_and_bucket_bounds_are_checked() {
        let g = narrow(1, false, &[1]);
        let cur = SlabCursor::begin(&g, 0).unwrap();
        assert_eq!(cur.get(&g, 4).unwrap_err(), Error::LaneOutOfRange(4, 4));
        assert_eq!(
            SlabCursor::begin_at(&g, 0, 1).unwrap_err(),
            Error::BucketOutOfRange(1, 1)
        );
        assert!(SlabCursor::begin(&g, 3).is_err());
    }

    #[test]
    fn slab_walk_covers_all_buckets_and_chains() {
        // Hint 6 at W=4 (capacity 3, lf 0.6 -> 1.8/bucket) gives 4 buckets;
        // 30 keys force chaining in most of them.
        let g = narrow(40, false, &[6; 40]);
        assert_eq!(g.bucket_count_of(7).unwrap(), 4);
        let keys: Vec<u32> = (0..30).collect();
        for &k in &keys {
            g.insert_edge(7, k, None).unwrap();
        }
        let walked: BTreeSet<u32> = drain(&g, SlabCursor::begin(&g, 7).unwrap())
            .into_iter()
            .collect();
        assert_eq!(walked, keys.iter().copied().collect());

        // The union of single-bucket walks equals the full walk, and each
        // stays inside its own bucket.
        let mut union = BTreeSet::new();
        for b in 0..4 {
            let keys_b = drain(&g, SlabCursor::begin_at(&g, 7, b).unwrap());
            for k in &keys_b {
                assert_eq!(g.bucket_of(7, *k).unwrap(), b);
            }
            union.extend(keys_b);
        }
        assert_eq!(union, walked);
    }

    #[test]
    fn update_walk_requires_tracking() {
        let g = narrow(2, false, &[1, 1]);
        assert_eq!(
            SlabCursor::update_begin(&g, 0).unwrap_err(),
            Error::TrackingDisabled
        );
    }

    #[test]
    fn update_walk_replays_only_post_seal_inserts() {
        let g = narrow(20, true, &[6; 20]);
        for k in 0..5 {
            g.insert_edge(3, k, None).unwrap();
        }
        g.seal_updates();
        assert_eq!(SlabCursor::update_begin(&g, 3).unwrap(), {
            SlabCursor::update_end(3)
        });

        // Post-seal inserts spread over buckets, some landing mid-slab.
        let fresh: Vec<u32> = (5..14).collect();
        for &k in &fresh {
            g.insert_edge(3, k, None).unwrap();
        }
        let cur = SlabCursor::update_begin(&g, 3).unwrap();
        assert!(!cur.is_end());
        let replay: BTreeSet<u32> = drain(&g, cur).into_iter().collect();
        assert_eq!(replay, fresh.iter().copied().collect());

        // Sealing again empties the walk; untouched vertices are empty too.
        g.seal_updates();
        assert!(drain(&g, SlabCursor::update_begin(&g, 3).unwrap()).is_empty());
        assert!(drain(&g, SlabCursor::update_begin(&g, 4).unwrap()).is_empty());
    }

    #[test]
    fn update_walk_starts_mid_slab_after_partial_fill() {
        // Single bucket, width 4 (capacity 3). Two pre-seal keys fill lanes
        // 0-1; the next insert lands in lane 2 of the same slab and the
        // update cursor must start there, not at lane 0.
        let g = narrow(10, true, &[1; 10]);
        g.insert_edge(0, 1, None).unwrap();
        g.insert_edge(0, 2, None).unwrap();
        g.seal_updates();
        g.insert_edge(0, 3, None).unwrap(); // lane 2
        g.insert_edge(0, 4, None).unwrap(); // spills into a chained slab
        let cur = SlabCursor::update_begin(&g, 0).unwrap();
        assert_eq!(cur.first_lane(), 2);
        assert_eq!(cur.bucket(), 0);
        let replay = drain(&g, cur);
        assert_eq!(replay, vec![3, 4]);
    }

    #[test]
    fn full_walk_matches_neighbor_snapshot() {
        let g = narrow(8, false, &[4; 8]);
        for (u, v) in [(0, 1), (0, 2), (0, 3), (2, 0), (2, 5), (0, 7)] {
            g.insert_edge(u, v, None).unwrap();
        }
        g.delete_edge(0, 2).unwrap();
        for v in 0..8 {
            let walked: BTreeSet<u32> = drain(&g, SlabCursor::begin(&g, v).unwrap())
                .into_iter()
                .collect();
            let snapshot: BTreeSet<u32> = g
                .neighbors(v)
                .unwrap()
                .into_iter()
                .map(|(k, _)| k)
                .collect();
            assert_eq!(walked, snapshot, "vertex {v}");
        }
    }
}
