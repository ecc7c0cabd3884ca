//! Dynamic graphs on slab-list adjacency storage.
//!
//! The crate keeps every adjacency list in fixed-width *slabs* — cache-line
//! sized arrays of 32-bit cells — chained through a handle cell, with the head
//! slab of every hash bucket living in one contiguous arena. Mutations are
//! lock-free cell CAS operations, so bulk edge batches can be applied while
//! queries run. On top of the store sits a deterministic *lane group* engine
//! that executes graph kernels the way a fixed-width SIMD group would: lanes
//! read one slab cell each, cooperate through ballot/reduce/broadcast
//! primitives, and share work through per-group queues.
//!
//! Five dynamic algorithms are built on those parts: BFS and single-source
//! shortest paths over a packed `<distance, parent>` tree (incremental and
//! decremental), PageRank with contribution caching and warm restarts,
//! batch-delta triangle counting, and weakly-connected components via
//! min-hooking union-find. Each has a brute-force counterpart in [`oracle`]
//! used by the test suites.

pub mod algo;
pub mod cursor;
pub mod engine;
pub mod error;
pub mod graph;
pub mod oracle;
pub mod store;
pub mod union_find;

pub use cursor::{IterKind, SlabCursor};
pub use engine::{CellVisit, Engine, Frontier};
pub use error::{Error, Result};
pub use graph::{DynamicGraph, EdgeBatch, GraphConfig, InsertOutcome};
pub use store::{SlabRef, StoreKind, VertexId};
pub use union_find::UnionFind;
