//! Dynamic graph algorithms.
//!
//! Each algorithm offers a static (from-scratch) entry point plus dynamic
//! entry points that take an edge batch, apply it to the graph themselves,
//! and repair their standing result instead of recomputing it. All of them
//! are deterministic for a fixed input regardless of engine worker count:
//! integer updates go through monotone atomics and floating-point sums fold
//! in a fixed order.

pub mod pagerank;
pub mod sssp;
pub mod triangles;
pub mod wcc;

use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::graph::DynamicGraph;

/// Verifies that every stored edge has its reverse stored too, which the
/// symmetric-graph algorithms (triangle counting, static component labeling)
/// rely on. Self-loops are their own reverse.
pub(crate) fn require_symmetric(engine: &Engine, g: &DynamicGraph) -> Result<()> {
    engine.for_each_cell(g, |visit| {
        if visit.vertex != visit.neighbor && !g.search_edge(visit.neighbor, visit.vertex)?.0 {
            return Err(Error::NotSymmetric(visit.vertex, visit.neighbor));
        }
        Ok(())
    })
}
