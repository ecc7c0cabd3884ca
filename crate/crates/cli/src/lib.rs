//! Experiment harness for the dynamic graph framework.
//!
//! The harness reproduces a batch-update methodology: split an input edge
//! list into a base graph plus a sequence of update batches, apply each
//! batch with the algorithm's dynamic kernel while timing it, recompute the
//! same answer from scratch, verify the two agree, and report per-batch
//! timings with a checksum of the verified result. Checksums and splits are
//! fully determined by the seed and input, so two runs with the same
//! arguments produce identical checksum columns.

pub mod experiment;
pub mod ingest;
pub mod report;

use std::path::PathBuf;

/// Harness-level failures. Exit codes: verification failures exit 2,
/// everything else exits 1.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error at line {0}: {1}")]
    Parse(usize, String),
    #[error("input contains no edges")]
    EmptyGraph,
    #[error("not enough edges: need {needed}, input has {available}")]
    InsufficientEdges { needed: usize, available: usize },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("verification failed at batch {batch}: {detail}")]
    VerificationFailed { batch: usize, detail: String },
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Graph(#[from] dyngraph_core::Error),
}

/// Result alias for harness operations.
pub type Result<T> = std::result::Result<T, CliError>;
