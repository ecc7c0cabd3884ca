//! User-facing dynamic graph.
//!
//! A [`DynamicGraph`] is a fixed set of vertices `0..vertex_n` whose adjacency
//! lists live in an [`AdjacencyStore`]. Each vertex owns one or more hash
//! buckets (slab lists); the destination id of an edge picks the bucket via a
//! universal multiply-mod hash, so high-degree vertices can spread their
//! neighbors over several independent chains. All edge mutations take `&self`
//! and are safe to call from many threads at once.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::store::{AdjacencyStore, Geometry, StoreKind, TOMBSTONE_KEY};

pub use crate::store::InsertOutcome;

/// Modulus of the bucket hash: the largest prime below `2^32`.
pub const HASH_PRIME: u64 = 4_294_967_291;
/// Default hash multiplier (Knuth's multiplicative constant).
pub const DEFAULT_HASH_A: u64 = 2_654_435_761;
/// Default hash offset.
pub const DEFAULT_HASH_B: u64 = 2_246_822_519;

/// Construction parameters for a [`DynamicGraph`].
#[derive(Debug, Clone)]
pub struct GraphConfig {
    /// Number of vertices; ids are `0..vertex_n`.
    pub vertex_n: u32,
    /// Weighted graphs store a 32-bit weight next to every neighbor id.
    pub weighted: bool,
    /// When false every vertex gets exactly one bucket and the hash is never
    /// consulted.
    pub hashing: bool,
    /// Track first-updated positions so update iterators can replay the
    /// cells written since the last seal. Disables tombstone reuse.
    pub update_tracking: bool,
    /// Target fill fraction of the head buckets, in `(0, 1]`.
    pub load_factor: f64,
    /// Lanes per slab (even, 4..=64).
    pub group_width: u32,
    /// Optional seed for the hash parameters; `None` uses fixed defaults.
    pub hash_seed: Option<u64>,
}

impl Default for GraphConfig {
    fn default() -> Self {
        GraphConfig {
            vertex_n: 0,
            weighted: false,
            hashing: true,
            update_tracking: false,
            load_factor: 0.6,
            group_width: 32,
            hash_seed: None,
        }
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A batch of edges to insert or delete in one operation.
///
/// Undirected batches are expanded to both orientations on application.
/// [`EdgeBatch::oriented`] yields the deduplicated directed edge list in
/// first-appearance order, keeping the **last** weight written for a
/// repeated pair (matching the overwrite semantics of single inserts).
#[derive(Debug, Clone)]
pub struct EdgeBatch {
    edges: Vec<(u32, u32)>,
    weights: Option<Vec<u32>>,
    directed: bool,
}

impl EdgeBatch {
    /// A batch of directed edges `(src, dst)`.
    pub fn directed(edges: Vec<(u32, u32)>, weights: Option<Vec<u32>>) -> Result<Self> {
        Self::build(edges, weights, true)
    }

    /// A batch of undirected edges; each pair is applied in both directions.
    pub fn undirected(edges: Vec<(u32, u32)>, weights: Option<Vec<u32>>) -> Result<Self> {
        Self::build(edges, weights, false)
    }

    fn build(edges: Vec<(u32, u32)>, weights: Option<Vec<u32>>, directed: bool) -> Result<Self> {
        if let Some(w) = &weights {
            if w.len() != edges.len() {
                return Err(Error::WeightArity);
            }
        }
        Ok(EdgeBatch {
            edges,
            weights,
            directed,
        })
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn is_weighted(&self) -> bool {
        self.weights.is_some()
    }

    /// The batch exactly as supplied, without expansion or deduplication.
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn weights(&self) -> Option<&[u32]> {
        self.weights.as_deref()
    }

    /// Expands to directed form and deduplicates repeated `(src, dst)` pairs,
    /// keeping first-appearance order and the last weight seen for each pair.
    pub fn oriented(&self) -> Vec<(u32, u32, Option<u32>)> {
        let mut out: Vec<(u32, u32, Option<u32>)> = Vec::with_capacity(self.edges.len() * 2);
        let mut seen: HashMap<(u32, u32), usize> = HashMap::with_capacity(self.edges.len() * 2);
        let mut push =
            |out: &mut Vec<(u32, u32, Option<u32>)>, u: u32, v: u32, w: Option<u32>| match seen
                .get(&(u, v))
            {
                Some(&i) => out[i].2 = w,
                None => {
                    seen.insert((u, v), out.len());
                    out.push((u, v, w));
                }
            };
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            let w = self.weights.as_ref().map(|ws| ws[i]);
            push(&mut out, u, v, w);
            if !self.directed {
                push(&mut out, v, u, w);
            }
        }
        out
    }
}

/// Dynamic graph over slab-list adjacency storage. See the module docs.
pub struct DynamicGraph {
    vertex_n: u32,
    weighted: bool,
    hashing: bool,
    load_factor: f64,
    hash_a: u64,
    hash_b: u64,
    store: AdjacencyStore,
}

impl std::fmt::Debug for DynamicGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DynamicGraph")
            .field("vertex_n", &self.vertex_n)
            .field("weighted", &self.weighted)
            .field("hashing", &self.hashing)
            .field("load_factor", &self.load_factor)
            .field("group_width", &self.store.geometry().width())
            .finish_non_exhaustive()
    }
}

impl DynamicGraph {
    /// Builds a graph with one bucket per vertex (degree hint 1).
    pub fn new(config: &GraphConfig) -> Result<Self> {
        let hints = vec![1u32; config.vertex_n as usize];
        Self::with_degree_hints(config, &hints)
    }

    /// Builds a graph sizing each vertex's bucket count from an expected
    /// degree: `buckets(v) = max(1, ceil(hint[v] / (load_factor * capacity)))`
    /// where `capacity` is the per-slab key capacity. With hashing disabled
    /// every vertex gets exactly one bucket regardless of hints.
    pub fn with_degree_hints(config: &GraphConfig, hints: &[u32]) -> Result<Self> {
        if !(config.load_factor > 0.0 && config.load_factor <= 1.0) {
            return Err(Error::BadLoadFactor(config.load_factor));
        }
        let geometry = Geometry::new(config.group_width)?;
        if config.vertex_n > TOMBSTONE_KEY {
            // Vertex ids double as cell words, so they must stay below the
            // smallest sentinel.
            return Err(Error::CapacityOverflow);
        }
        if hints.len() != config.vertex_n as usize {
            return Err(Error::BadDegreeHints(hints.len(), config.vertex_n));
        }
        let kind = if config.weighted {
            StoreKind::Map
        } else {
            StoreKind::Set
        };
        let capacity = geometry.capacity(kind);
        let per_bucket = config.load_factor * capacity as f64;
        let bucket_count: Vec<u32> = hints
            .iter()
            .map(|&h| {
                if config.hashing {
                    ((h as f64 / per_bucket).ceil() as u32).max(1)
                } else {
                    1
                }
            })
            .collect();
        let (hash_a, hash_b) = match config.hash_seed {
            None => (DEFAULT_HASH_A, DEFAULT_HASH_B),
            Some(seed) => {
                let mut s = seed;
                let a = 1 + splitmix64(&mut s) % (HASH_PRIME - 1);
                let b = splitmix64(&mut s) % HASH_PRIME;
                (a, b)
            }
        };
        let store = AdjacencyStore::build(geometry, kind, config.update_tracking, bucket_count)?;
        Ok(DynamicGraph {
            vertex_n: config.vertex_n,
            weighted: config.weighted,
            hashing: config.hashing,
            load_factor: config.load_factor,
            hash_a,
            hash_b,
            store,
        })
    }

    #[inline]
    pub fn vertex_n(&self) -> u32 {
        self.vertex_n
    }

    #[inline]
    pub fn weighted(&self) -> bool {
        self.weighted
    }

    #[inline]
    pub fn hashing(&self) -> bool {
        self.hashing
    }

    #[inline]
    pub fn load_factor(&self) -> f64 {
        self.load_factor
    }

    /// The `(a, b)` parameters of the bucket hash.
    #[inline]
    pub fn hash_params(&self) -> (u64, u64) {
        (self.hash_a, self.hash_b)
    }

    /// The backing adjacency store.
    #[inline]
    pub fn store(&self) -> &AdjacencyStore {
        &self.store
    }

    #[inline]
    fn check_vertex(&self, v: u32) -> Result<()> {
        if v < self.vertex_n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange(v, self.vertex_n))
        }
    }

    /// Number of buckets owned by `v`.
    pub fn bucket_count_of(&self, v: u32) -> Result<u32> {
        self.check_vertex(v)?;
        Ok(self.store.arena().bucket_count()[v as usize])
    }

    /// Bucket of `key` within vertex `v`'s lists:
    /// `((a*key + b) mod P) mod buckets(v)`, or 0 when only one bucket exists.
    pub fn bucket_of(&self, v: u32, key: u32) -> Result<u32> {
        let n = self.bucket_count_of(v)?;
        if n == 1 {
            return Ok(0);
        }
        let h = (self.hash_a * key as u64 + self.hash_b) % HASH_PRIME;
        Ok((h % n as u64) as u32)
    }

    /// Flat list index of `(v, bucket-of-key)` in the store.
    pub fn list_index(&self, v: u32, key: u32) -> Result<u32> {
        let b = self.bucket_of(v, key)?;
        Ok(self.store.arena().offset_of(v) + b)
    }

    /// Flat list index of an explicit `(v, bucket)` pair.
    pub fn list_index_at(&self, v: u32, bucket: u32) -> Result<u32> {
        let n = self.bucket_count_of(v)?;
        if bucket >= n {
            return Err(Error::BucketOutOfRange(bucket, n));
        }
        Ok(self.store.arena().offset_of(v) + bucket)
    }

    #[inline]
    fn check_weight(&self, weight: Option<u32>) -> Result<()> {
        if weight.is_some() == self.weighted {
            Ok(())
        } else {
            Err(Error::WeightArity)
        }
    }

    /// Inserts the directed edge `(u, v)`; on a weighted graph an existing
    /// edge has its weight overwritten ([`InsertOutcome::Updated`]).
    pub fn insert_edge(&self, u: u32, v: u32, weight: Option<u32>) -> Result<InsertOutcome> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        self.check_weight(weight)?;
        let list = self.list_index(u, v)?;
        self.store.list_insert(list, v, weight)
    }

    /// Deletes the directed edge `(u, v)`; returns whether it was present.
    pub fn delete_edge(&self, u: u32, v: u32) -> Result<bool> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let list = self.list_index(u, v)?;
        self.store.list_delete(list, v)
    }

    /// Looks up the directed edge `(u, v)`: `(present, weight)`.
    pub fn search_edge(&self, u: u32, v: u32) -> Result<(bool, Option<u32>)> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let list = self.list_index(u, v)?;
        self.store.list_search(list, v)
    }

    /// Applies an insert batch; returns how many directed slots were newly
    /// inserted (an undirected edge counts once per direction).
    pub fn insert_edges(&self, batch: &EdgeBatch) -> Result<u64> {
        if batch.is_weighted() != self.weighted {
            return Err(Error::WeightArity);
        }
        let mut inserted = 0;
        for (u, v, w) in batch.oriented() {
            if self.insert_edge(u, v, w)? == InsertOutcome::Inserted {
                inserted += 1;
            }
        }
        Ok(inserted)
    }

    /// Applies a delete batch; returns how many directed slots were removed.
    pub fn delete_edges(&self, batch: &EdgeBatch) -> Result<u64> {
        let mut removed = 0;
        for (u, v, _) in batch.oriented() {
            if self.delete_edge(u, v)? {
                removed += 1;
            }
        }
        Ok(removed)
    }

    /// Seals every list: update iterators started afterwards replay only
    /// cells written after this point.
    pub fn seal_updates(&self) {
        self.store.seal_all();
    }

    /// Out-degree of `v` (count of live neighbor cells).
    pub fn degree(&self, v: u32) -> Result<usize> {
        self.check_vertex(v)?;
        let base = self.store.arena().offset_of(v);
        let n = self.store.arena().bucket_count()[v as usize];
        let mut d = 0;
        for b in 0..n {
            d += self.store.list_valid_cells(base + b).len();
        }
        Ok(d)
    }

    /// Total number of directed edges currently stored.
    pub fn edge_count(&self) -> usize {
        (0..self.vertex_n)
            .map(|v| self.degree(v).expect("vertex in range"))
            .sum()
    }

    /// Neighbors of `v` in bucket order, chain-lane order within each bucket.
    pub fn neighbors(&self, v: u32) -> Result<Vec<(u32, Option<u32>)>> {
        self.check_vertex(v)?;
        let base = self.store.arena().offset_of(v);
        let n = self.store.arena().bucket_count()[v as usize];
        let mut out = Vec::new();
        for b in 0..n {
            out.extend(self.store.list_valid_cells(base + b));
        }
        Ok(out)
    }

    /// Full adjacency snapshot, one sorted neighbor map per vertex.
    pub fn snapshot_adjacency(&self) -> Vec<BTreeMap<u32, Option<u32>>> {
        (0..self.vertex_n)
            .map(|v| {
                self.neighbors(v)
                    .expect("vertex in range")
                    .into_iter()
                    .collect()
            })
            .collect()
    }

    /// Every directed edge currently stored, in vertex/bucket/lane order.
    pub fn directed_edges(&self) -> Vec<(u32, u32, Option<u32>)> {
        let mut out = Vec::new();
        for v in 0..self.vertex_n {
            for (dst, w) in self.neighbors(v).expect("vertex in range") {
                out.push((v, dst, w));
            }
        }
        out
    }
}
