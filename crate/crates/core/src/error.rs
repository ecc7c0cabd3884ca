//! Crate-wide error type. Every fallible operation reports failures through
//! [`Error`]; allocation exhaustion is an error, never a panic.

/// Errors produced by the store, iterators, engine, and algorithms.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("vertex {0} out of range (vertex count {1})")]
    VertexOutOfRange(u32, u32),
    #[error("bucket {0} out of range for vertex {1}")]
    BucketOutOfRange(u32, u32),
    #[error("lane {0} out of range (group width {1})")]
    LaneOutOfRange(u32, u32),
    #[error("key {0} collides with a reserved sentinel value")]
    SentinelKey(u32),
    #[error("slab storage exhausted")]
    CapacityOverflow,
    #[error("cursor is already at the end of its range")]
    IterateEnd,
    #[error("update tracking is disabled for this graph")]
    TrackingDisabled,
    #[error("load factor {0} outside (0, 1]")]
    BadLoadFactor(f64),
    #[error("group width {0} must be an even number >= 4")]
    BadGroupWidth(u32),
    #[error("degree hint vector has length {0}, expected {1}")]
    BadDegreeHints(usize, u32),
    #[error("weights must be supplied exactly when the graph is weighted")]
    WeightArity,
    #[error("operation requires a weighted graph")]
    UnweightedGraph,
    #[error("operation requires an unweighted graph")]
    WeightedGraph,
    #[error("damping factor {0} outside (0, 1)")]
    BadDamping(f64),
    #[error("epsilon {0} must be positive and finite")]
    BadEpsilon(f64),
    #[error("graph is not symmetric: edge ({0}, {1}) has no reverse orientation")]
    NotSymmetric(u32, u32),
    #[error("triangle tallies violate divisibility (s1={0}, s2={1}, s3={2})")]
    DivisibilityViolation(u64, u64, u64),
    #[error("parent walk exceeded {0} hops; the tree contains a cycle")]
    CycleDetected(u32),
}

pub type Result<T> = std::result::Result<T, Error>;
