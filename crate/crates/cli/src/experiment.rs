//! Batch-update experiments.
//!
//! An experiment carves the input edge list into a base graph plus a series
//! of update batches, then alternates two measurements per batch: the
//! *dynamic* path (apply the batch and repair the previous result) and the
//! *static* path (recompute the same result from scratch on the mutated
//! graph). The two results are verified against each other after every
//! batch, and the dynamic result is checksummed so independent runs can be
//! compared row by row.
//!
//! * **static** — the base graph holds every edge; the algorithm runs once
//!   as a baseline and the report has no batch rows.
//! * **incremental** — the base graph holds `floor(base_fraction * E)`
//!   edges; each batch inserts `batch_size` edges the graph has not seen.
//! * **decremental** — the base graph holds every edge; each batch deletes
//!   `batch_size` of them. (`base_fraction` is ignored.)
//!
//! The split is a seeded shuffle of edge indices, so a fixed `(input, seed,
//! batch geometry)` always yields the same batches regardless of algorithm
//! or worker count.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dyngraph_core::algo::pagerank::{
    apply_directed_deletes, apply_directed_inserts, pagerank, PageRankState,
};
use dyngraph_core::algo::sssp::{
    bfs_decremental, bfs_incremental, bfs_static, sssp_decremental, sssp_incremental, sssp_static,
};
use dyngraph_core::algo::triangles::{tc_decremental, tc_incremental, tc_static};
use dyngraph_core::algo::wcc::{wcc_incremental, wcc_static, wcc_static_with};
use dyngraph_core::{DynamicGraph, EdgeBatch, Engine, GraphConfig, UnionFind};

use crate::ingest::EdgeList;
use crate::report::{checksum_f64s, checksum_u32s, checksum_u64, BatchRow};
use crate::{CliError, Result};

/// Range of synthesized edge weights when a weighted algorithm runs on an
/// unweighted input.
pub const SYNTH_WEIGHT_MAX: u32 = 64;

/// The algorithm an experiment drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algo {
    Bfs,
    Sssp,
    PageRank,
    Triangles,
    Wcc,
}

impl std::str::FromStr for Algo {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bfs" => Ok(Algo::Bfs),
            "sssp" => Ok(Algo::Sssp),
            "pr" | "pagerank" => Ok(Algo::PageRank),
            "tc" | "triangles" => Ok(Algo::Triangles),
            "wcc" => Ok(Algo::Wcc),
            other => Err(CliError::Config(format!(
                "unknown algorithm {other:?} (expected bfs, sssp, pr, tc, or wcc)"
            ))),
        }
    }
}

impl std::fmt::Display for Algo {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Algo::Bfs => "bfs",
            Algo::Sssp => "sssp",
            Algo::PageRank => "pagerank",
            Algo::Triangles => "triangles",
            Algo::Wcc => "wcc",
        };
        f.write_str(name)
    }
}

/// What the update batches do. `Static` loads the whole input, runs the
/// algorithm once as a baseline, and emits no batch rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Static,
    Incremental,
    Decremental,
}

impl std::str::FromStr for Mode {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "static" => Ok(Mode::Static),
            "incremental" => Ok(Mode::Incremental),
            "decremental" => Ok(Mode::Decremental),
            other => Err(CliError::Config(format!(
                "unknown mode {other:?} (expected static, incremental, or decremental)"
            ))),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Static => "static",
            Mode::Incremental => "incremental",
            Mode::Decremental => "decremental",
        })
    }
}

/// Everything a run needs besides the edge list itself.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub algo: Algo,
    pub mode: Mode,
    /// Edges per update batch.
    pub batch_size: usize,
    /// Number of batches; zero yields a header-only report.
    pub n_batches: usize,
    /// Fraction of edges preloaded before the first incremental batch.
    pub base_fraction: f64,
    /// Seed for the edge split and for synthesized weights.
    pub seed: u64,
    /// Target bucket fill fraction of the adjacency store.
    pub load_factor: f64,
    /// Hash neighbor ids into buckets; `false` forces one bucket per vertex.
    pub hashing: bool,
    /// Lanes per slab (even, 4..=64).
    pub group_width: u32,
    /// Source vertex for bfs/sssp, as a compacted id.
    pub src: u32,
    /// PageRank damping factor.
    pub damping: f64,
    /// PageRank L1 convergence threshold.
    pub eps: f64,
    /// PageRank iteration cap.
    pub max_iter: u32,
    /// Engine worker threads; zero picks the machine's parallelism.
    pub workers: usize,
    /// Treat the input as undirected even for algorithms that accept
    /// directed edges. Triangle counting and connected components always
    /// symmetrize.
    pub symmetrize: bool,
    /// Corrupt the dynamic result of batch 0 to prove verification bites.
    pub inject_fault: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            algo: Algo::Bfs,
            mode: Mode::Incremental,
            batch_size: 1000,
            n_batches: 10,
            base_fraction: 0.5,
            seed: 42,
            load_factor: 0.6,
            hashing: true,
            group_width: 32,
            src: 0,
            damping: 0.85,
            eps: 1e-5,
            max_iter: 100,
            workers: 0,
            symmetrize: false,
            inject_fault: false,
        }
    }
}

/// Index split over the logical edge list: the preloaded base plus one index
/// chunk per batch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub base: Vec<usize>,
    pub batches: Vec<Vec<usize>>,
}

/// Splits `edge_count` edge indices into a base set and `n_batches` chunks
/// of `batch_size`, shuffling with `seed`.
pub fn split_batches(
    edge_count: usize,
    mode: Mode,
    base_fraction: f64,
    batch_size: usize,
    n_batches: usize,
    seed: u64,
) -> Result<Split> {
    let updates = batch_size
        .checked_mul(n_batches)
        .ok_or_else(|| CliError::Config("batch volume overflows".into()))?;
    let mut indices: Vec<usize> = (0..edge_count).collect();
    indices.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    match mode {
        Mode::Static => Ok(Split {
            base: (0..edge_count).collect(),
            batches: Vec::new(),
        }),
        Mode::Incremental => {
            let base_n = (base_fraction * edge_count as f64).floor() as usize;
            let needed = base_n + updates;
            if needed > edge_count {
                return Err(CliError::InsufficientEdges {
                    needed,
                    available: edge_count,
                });
            }
            let base = indices[..base_n].to_vec();
            let batches = (0..n_batches)
                .map(|i| indices[base_n + i * batch_size..base_n + (i + 1) * batch_size].to_vec())
                .collect();
            Ok(Split { base, batches })
        }
        Mode::Decremental => {
            if updates > edge_count {
                return Err(CliError::InsufficientEdges {
                    needed: updates,
                    available: edge_count,
                });
            }
            let base = (0..edge_count).collect();
            let batches = (0..n_batches)
                .map(|i| indices[i * batch_size..(i + 1) * batch_size].to_vec())
                .collect();
            Ok(Split { base, batches })
        }
    }
}

/// The logical edge list an experiment operates on: the parsed input after
/// per-algorithm normalization (symmetrization, weight synthesis).
#[derive(Debug, Clone)]
struct Prepared {
    vertex_n: u32,
    edges: Vec<(u32, u32)>,
    weights: Option<Vec<u32>>,
    /// Batches expand each edge to both orientations.
    sym: bool,
}

impl Prepared {
    fn batch(&self, indices: &[usize]) -> Result<EdgeBatch> {
        let edges: Vec<(u32, u32)> = indices.iter().map(|&i| self.edges[i]).collect();
        let weights = self
            .weights
            .as_ref()
            .map(|ws| indices.iter().map(|&i| ws[i]).collect());
        let batch = if self.sym {
            EdgeBatch::undirected(edges, weights)?
        } else {
            EdgeBatch::directed(edges, weights)?
        };
        Ok(batch)
    }

    /// Per-vertex slot counts over the full edge list, used as capacity
    /// hints. `reverse` counts destinations instead of sources (the in-edge
    /// layout PageRank uses).
    fn degree_hints(&self, reverse: bool) -> Vec<u32> {
        let mut hints = vec![0u32; self.vertex_n as usize];
        for &(u, v) in &self.edges {
            if self.sym {
                hints[u as usize] += 1;
                hints[v as usize] += 1;
            } else if reverse {
                hints[v as usize] += 1;
            } else {
                hints[u as usize] += 1;
            }
        }
        hints
    }
}

fn prepare(cfg: &ExperimentConfig, input: &EdgeList) -> Result<Prepared> {
    let sym = cfg.symmetrize || matches!(cfg.algo, Algo::Triangles | Algo::Wcc);
    let weighted = cfg.algo == Algo::Sssp;

    let mut edges = Vec::with_capacity(input.edges.len());
    let mut weights = weighted.then(|| Vec::with_capacity(input.edges.len()));
    if sym {
        // Normalized unique pairs; self-loops never affect these algorithms
        // and are dropped. First occurrence keeps its weight.
        let mut seen = std::collections::HashSet::new();
        for (i, &(u, v)) in input.edges.iter().enumerate() {
            if u == v {
                continue;
            }
            let pair = (u.min(v), u.max(v));
            if seen.insert(pair) {
                edges.push(pair);
                if let Some(ws) = &mut weights {
                    ws.push(input.weights.as_ref().map_or(0, |iw| iw[i]));
                }
            }
        }
    } else {
        edges.extend_from_slice(&input.edges);
        if let Some(ws) = &mut weights {
            match &input.weights {
                Some(iw) => ws.extend_from_slice(iw),
                None => ws.extend(std::iter::repeat(0).take(edges.len())),
            }
        }
    }
    if edges.is_empty() {
        return Err(CliError::EmptyGraph);
    }

    // A weighted algorithm on an unweighted input gets seeded random weights.
    if let Some(ws) = &mut weights {
        if input.weights.is_none() {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            for w in ws.iter_mut() {
                *w = rng.random_range(1..=SYNTH_WEIGHT_MAX);
            }
        }
    }

    Ok(Prepared {
        vertex_n: input.vertex_n,
        edges,
        weights,
        sym,
    })
}

fn validate(cfg: &ExperimentConfig, input: &EdgeList) -> Result<()> {
    if cfg.algo == Algo::Wcc && cfg.mode == Mode::Decremental {
        return Err(CliError::Config(
            "connected components support --mode incremental only".into(),
        ));
    }
    if !(0.0..=1.0).contains(&cfg.base_fraction) {
        return Err(CliError::Config(format!(
            "--base-fraction {} must lie in [0, 1]",
            cfg.base_fraction
        )));
    }
    if matches!(cfg.algo, Algo::Bfs | Algo::Sssp) && cfg.src >= input.vertex_n {
        return Err(CliError::Config(format!(
            "--src {} out of range: the input has {} vertices after id compaction",
            cfg.src, input.vertex_n
        )));
    }
    Ok(())
}

fn graph_config(
    cfg: &ExperimentConfig,
    vertex_n: u32,
    weighted: bool,
    tracking: bool,
) -> GraphConfig {
    GraphConfig {
        vertex_n,
        weighted,
        hashing: cfg.hashing,
        update_tracking: tracking,
        load_factor: cfg.load_factor,
        group_width: cfg.group_width,
        hash_seed: None,
    }
}

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

/// Accumulates rows and their cumulative-time columns.
struct RowBuilder {
    rows: Vec<BatchRow>,
    cum_dynamic: f64,
    cum_static: f64,
}

impl RowBuilder {
    fn new(n: usize) -> Self {
        RowBuilder {
            rows: Vec::with_capacity(n),
            cum_dynamic: 0.0,
            cum_static: 0.0,
        }
    }

    fn push(&mut self, batch_idx: usize, t_dynamic_ms: f64, t_static_ms: f64, checksum: u64) {
        self.cum_dynamic += t_dynamic_ms;
        self.cum_static += t_static_ms;
        self.rows.push(BatchRow {
            batch_idx,
            t_dynamic_ms,
            t_static_ms,
            cum_dynamic: self.cum_dynamic,
            cum_static: self.cum_static,
            s: self.cum_static / self.cum_dynamic.max(1e-9),
            checksum,
        });
    }
}

fn first_mismatch(a: &[u32], b: &[u32]) -> Option<(usize, u32, u32)> {
    a.iter()
        .zip(b)
        .enumerate()
        .find(|(_, (x, y))| x != y)
        .map(|(i, (&x, &y))| (i, x, y))
}

/// Runs the configured experiment over a parsed edge list.
pub fn run_experiment(cfg: &ExperimentConfig, input: &EdgeList) -> Result<Vec<BatchRow>> {
    validate(cfg, input)?;
    let prep = prepare(cfg, input)?;
    let split = split_batches(
        prep.edges.len(),
        cfg.mode,
        cfg.base_fraction,
        cfg.batch_size,
        cfg.n_batches,
        cfg.seed,
    )?;
    match cfg.algo {
        Algo::Bfs | Algo::Sssp => run_tree(cfg, &prep, &split),
        Algo::PageRank => run_pagerank(cfg, &prep, &split),
        Algo::Triangles => run_triangles(cfg, &prep, &split),
        Algo::Wcc => run_wcc(cfg, &prep, &split),
    }
}

/// BFS and shortest paths share a runner; they differ only in edge weights.
fn run_tree(cfg: &ExperimentConfig, prep: &Prepared, split: &Split) -> Result<Vec<BatchRow>> {
    let weighted = cfg.algo == Algo::Sssp;
    let engine = Engine::new(cfg.workers);
    let gc = graph_config(cfg, prep.vertex_n, weighted, false);
    let g = DynamicGraph::with_degree_hints(&gc, &prep.degree_hints(false))?;
    g.insert_edges(&prep.batch(&split.base)?)?;

    let fresh = |g: &DynamicGraph| {
        if weighted {
            sssp_static(&engine, g, cfg.src)
        } else {
            bfs_static(&engine, g, cfg.src)
        }
    };
    let tree = fresh(&g)?;

    let mut out = RowBuilder::new(split.batches.len());
    for (idx, chunk) in split.batches.iter().enumerate() {
        let batch = prep.batch(chunk)?;

        let t0 = Instant::now();
        match (weighted, cfg.mode) {
            (_, Mode::Static) => unreachable!("static mode has no batches"),
            (true, Mode::Incremental) => sssp_incremental(&engine, &g, &tree, &batch)?,
            (false, Mode::Incremental) => bfs_incremental(&engine, &g, &tree, &batch)?,
            (true, Mode::Decremental) => {
                sssp_decremental(&engine, &g, &tree, &batch)?;
            }
            (false, Mode::Decremental) => {
                bfs_decremental(&engine, &g, &tree, &batch)?;
            }
        }
        let t_dynamic = ms(t0);

        let t0 = Instant::now();
        let reference = fresh(&g)?;
        let t_static = ms(t0);

        let mut dist = tree.distances();
        let parents = tree.parents();
        if cfg.inject_fault && idx == 0 {
            dist[0] ^= 1;
        }
        if let Some((v, a, b)) = first_mismatch(&dist, &reference.distances()) {
            return Err(CliError::VerificationFailed {
                batch: idx,
                detail: format!("distance of vertex {v}: dynamic {a}, static {b}"),
            });
        }
        if let Some((v, a, b)) = first_mismatch(&parents, &reference.parents()) {
            return Err(CliError::VerificationFailed {
                batch: idx,
                detail: format!("parent of vertex {v}: dynamic {a}, static {b}"),
            });
        }
        out.push(idx, t_dynamic, t_static, checksum_u32s(&dist));
    }
    Ok(out.rows)
}

fn run_pagerank(cfg: &ExperimentConfig, prep: &Prepared, split: &Split) -> Result<Vec<BatchRow>> {
    let n = prep.vertex_n;
    let engine = Engine::new(cfg.workers);
    let gc = graph_config(cfg, n, false, false);
    let g_in = DynamicGraph::with_degree_hints(&gc, &prep.degree_hints(true))?;
    let mut out_degree = vec![0u32; n as usize];
    apply_directed_inserts(&g_in, &mut out_degree, &prep.batch(&split.base)?)?;

    let mut warm = PageRankState::new(n, cfg.damping, cfg.eps, cfg.max_iter)?;
    pagerank(&engine, &g_in, &out_degree, &mut warm)?;

    let mut out = RowBuilder::new(split.batches.len());
    for (idx, chunk) in split.batches.iter().enumerate() {
        let batch = prep.batch(chunk)?;

        let t0 = Instant::now();
        match cfg.mode {
            Mode::Static => unreachable!("static mode has no batches"),
            Mode::Incremental => apply_directed_inserts(&g_in, &mut out_degree, &batch)?,
            Mode::Decremental => apply_directed_deletes(&g_in, &mut out_degree, &batch)?,
        };
        pagerank(&engine, &g_in, &out_degree, &mut warm)?;
        let t_dynamic = ms(t0);

        let t0 = Instant::now();
        let mut cold = PageRankState::new(n, cfg.damping, cfg.eps, cfg.max_iter)?;
        pagerank(&engine, &g_in, &out_degree, &mut cold)?;
        let t_static = ms(t0);

        let mut scores = warm.scores.clone();
        if cfg.inject_fault && idx == 0 {
            scores[0] += 1.0;
        }
        let l1: f64 = scores
            .iter()
            .zip(&cold.scores)
            .map(|(a, b)| (a - b).abs())
            .sum();
        let bound = 10.0 * cfg.eps;
        if !(l1 <= bound) {
            return Err(CliError::VerificationFailed {
                batch: idx,
                detail: format!("warm/cold score gap {l1:.3e} exceeds {bound:.3e}"),
            });
        }
        out.push(idx, t_dynamic, t_static, checksum_f64s(&cold.scores));
    }
    Ok(out.rows)
}

fn run_triangles(cfg: &ExperimentConfig, prep: &Prepared, split: &Split) -> Result<Vec<BatchRow>> {
    let engine = Engine::new(cfg.workers);
    let gc = graph_config(cfg, prep.vertex_n, false, false);
    let g = DynamicGraph::with_degree_hints(&gc, &prep.degree_hints(false))?;
    g.insert_edges(&prep.batch(&split.base)?)?;
    let mut cum = tc_static(&engine, &g)?;

    let mut out = RowBuilder::new(split.batches.len());
    for (idx, chunk) in split.batches.iter().enumerate() {
        let batch = prep.batch(chunk)?;

        let t0 = Instant::now();
        let delta = match cfg.mode {
            Mode::Static => unreachable!("static mode has no batches"),
            Mode::Incremental => tc_incremental(&engine, &g, &batch)?,
            Mode::Decremental => tc_decremental(&engine, &g, &batch)?,
        };
        cum = cum
            .checked_add_signed(delta.delta)
            .ok_or_else(|| CliError::VerificationFailed {
                batch: idx,
                detail: format!(
                    "cumulative count underflowed applying delta {}",
                    delta.delta
                ),
            })?;
        let t_dynamic = ms(t0);

        let t0 = Instant::now();
        let total = tc_static(&engine, &g)?;
        let t_static = ms(t0);

        let mut reported = cum;
        if cfg.inject_fault && idx == 0 {
            reported += 1;
        }
        if reported != total {
            return Err(CliError::VerificationFailed {
                batch: idx,
                detail: format!("triangle count: dynamic {reported}, static {total}"),
            });
        }
        out.push(idx, t_dynamic, t_static, checksum_u64(reported));
    }
    Ok(out.rows)
}

fn run_wcc(cfg: &ExperimentConfig, prep: &Prepared, split: &Split) -> Result<Vec<BatchRow>> {
    let engine = Engine::new(cfg.workers);
    let gc = graph_config(cfg, prep.vertex_n, false, true);
    let g = DynamicGraph::with_degree_hints(&gc, &prep.degree_hints(false))?;
    g.insert_edges(&prep.batch(&split.base)?)?;
    let uf = UnionFind::new(prep.vertex_n);
    wcc_static_with(&engine, &g, &uf)?;

    let mut out = RowBuilder::new(split.batches.len());
    for (idx, chunk) in split.batches.iter().enumerate() {
        let batch = prep.batch(chunk)?;

        let t0 = Instant::now();
        let mut labels = wcc_incremental(&engine, &g, &uf, &batch)?;
        let t_dynamic = ms(t0);

        let t0 = Instant::now();
        let reference = wcc_static(&engine, &g)?;
        let t_static = ms(t0);

        if cfg.inject_fault && idx == 0 {
            labels[0] ^= 1;
        }
        if let Some((v, a, b)) = first_mismatch(&labels, &reference) {
            return Err(CliError::VerificationFailed {
                batch: idx,
                detail: format!("component of vertex {v}: dynamic {a}, static {b}"),
            });
        }
        out.push(idx, t_dynamic, t_static, checksum_u32s(&labels));
    }
    Ok(out.rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::FileFormat;

    fn ring_and_chords(n: u32) -> EdgeList {
        let mut edges = Vec::new();
        for u in 0..n {
            edges.push((u, (u + 1) % n));
            edges.push((u, (u * 7 + 3) % n));
        }
        edges.retain(|&(u, v)| u != v);
        edges.sort_unstable();
        edges.dedup();
        EdgeList {
            vertex_n: n,
            edges,
            weights: None,
            ids: (0..n as u64).collect(),
            format: FileFormat::Snap,
        }
    }

    #[test]
    fn split_is_deterministic_and_disjoint() {
        let a = split_batches(100, Mode::Incremental, 0.5, 10, 4, 7).unwrap();
        let b = split_batches(100, Mode::Incremental, 0.5, 10, 4, 7).unwrap();
        assert_eq!(a, b);
        let c = split_batches(100, Mode::Incremental, 0.5, 10, 4, 8).unwrap();
        assert_ne!(a, c, "a different seed must reshuffle");

        assert_eq!(a.base.len(), 50);
        assert_eq!(a.batches.len(), 4);
        let mut all: Vec<usize> = a.base.clone();
        for chunk in &a.batches {
            assert_eq!(chunk.len(), 10);
            all.extend(chunk);
        }
        all.sort_unstable();
        all.dedup();
        assert_eq!(all.len(), 90, "base and batches never overlap");

        let d = split_batches(100, Mode::Decremental, 0.9, 25, 4, 7).unwrap();
        assert_eq!(d.base.len(), 100, "decremental preloads everything");
        assert_eq!(d.batches.iter().map(Vec::len).sum::<usize>(), 100);

        let s = split_batches(100, Mode::Static, 0.2, 25, 4, 7).unwrap();
        assert_eq!(s.base.len(), 100, "static preloads everything");
        assert!(s.batches.is_empty());

        let z = split_batches(100, Mode::Incremental, 0.5, 0, 4, 7).unwrap();
        assert_eq!(
            z.batches,
            vec![Vec::<usize>::new(); 4],
            "b=0 empties batches"
        );
    }

    #[test]
    fn split_rejects_oversized_requests() {
        match split_batches(100, Mode::Incremental, 0.5, 30, 2, 1) {
            Err(CliError::InsufficientEdges {
                needed: 110,
                available: 100,
            }) => {}
            other => panic!("want InsufficientEdges, got {other:?}"),
        }
        match split_batches(100, Mode::Decremental, 0.5, 51, 2, 1) {
            Err(CliError::InsufficientEdges {
                needed: 102,
                available: 100,
            }) => {}
            other => panic!("want InsufficientEdges, got {other:?}"),
        }
    }

    #[test]
    fn wcc_decremental_is_a_config_error() {
        let cfg = ExperimentConfig {
            algo: Algo::Wcc,
            mode: Mode::Decremental,
            ..ExperimentConfig::default()
        };
        match run_experiment(&cfg, &ring_and_chords(10)) {
            Err(CliError::Config(_)) => {}
            other => panic!("want config error, got {other:?}"),
        }
    }

    #[test]
    fn src_out_of_range_is_a_config_error() {
        let cfg = ExperimentConfig {
            algo: Algo::Bfs,
            src: 10,
            ..ExperimentConfig::default()
        };
        match run_experiment(&cfg, &ring_and_chords(10)) {
            Err(CliError::Config(msg)) => assert!(msg.contains("--src"), "{msg}"),
            other => panic!("want config error, got {other:?}"),
        }
    }

    fn small_cfg(algo: Algo, mode: Mode) -> ExperimentConfig {
        ExperimentConfig {
            algo,
            mode,
            batch_size: 4,
            n_batches: 3,
            base_fraction: 0.5,
            seed: 11,
            workers: 2,
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn static_mode_and_empty_batches_yield_trivial_reports() {
        let input = ring_and_chords(24);
        for algo in [
            Algo::Bfs,
            Algo::Sssp,
            Algo::PageRank,
            Algo::Triangles,
            Algo::Wcc,
        ] {
            let cfg = small_cfg(algo, Mode::Static);
            assert!(run_experiment(&cfg, &input).unwrap().is_empty(), "{algo}");

            let cfg = ExperimentConfig {
                batch_size: 0,
                ..small_cfg(algo, Mode::Incremental)
            };
            let rows = run_experiment(&cfg, &input).unwrap();
            assert_eq!(rows.len(), 3, "{algo}: empty batches still report");
        }
    }

    #[test]
    fn every_algorithm_round_trips_with_stable_checksums() {
        let input = ring_and_chords(24);
        for algo in [
            Algo::Bfs,
            Algo::Sssp,
            Algo::PageRank,
            Algo::Triangles,
            Algo::Wcc,
        ] {
            for mode in [Mode::Incremental, Mode::Decremental] {
                if algo == Algo::Wcc && mode == Mode::Decremental {
                    continue;
                }
                let cfg = small_cfg(algo, mode);
                let rows =
                    run_experiment(&cfg, &input).unwrap_or_else(|e| panic!("{algo}/{mode}: {e}"));
                assert_eq!(rows.len(), 3, "{algo}/{mode}");
                let again = run_experiment(&cfg, &input).unwrap();
                for (r, s) in rows.iter().zip(&again) {
                    assert_eq!(r.batch_idx, s.batch_idx);
                    assert_eq!(r.checksum, s.checksum, "{algo}/{mode} checksum drift");
                    assert!(r.s > 0.0);
                }
                // Cumulative columns are running sums of the per-batch times.
                let mut cd = 0.0;
                let mut cs = 0.0;
                for r in &rows {
                    cd += r.t_dynamic_ms;
                    cs += r.t_static_ms;
                    assert!((r.cum_dynamic - cd).abs() < 1e-9);
                    assert!((r.cum_static - cs).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn injected_faults_are_caught_at_batch_zero() {
        let input = ring_and_chords(24);
        for algo in [
            Algo::Bfs,
            Algo::Sssp,
            Algo::PageRank,
            Algo::Triangles,
            Algo::Wcc,
        ] {
            let cfg = ExperimentConfig {
                inject_fault: true,
                ..small_cfg(algo, Mode::Incremental)
            };
            match run_experiment(&cfg, &input) {
                Err(CliError::VerificationFailed { batch: 0, .. }) => {}
                other => panic!("{algo}: want verification failure, got {other:?}"),
            }
        }
    }

    #[test]
    fn weighted_inputs_feed_sssp_directly() {
        let mut input = ring_and_chords(16);
        input.weights = Some((0..input.edges.len() as u32).map(|i| i % 9 + 1).collect());
        let cfg = small_cfg(Algo::Sssp, Mode::Incremental);
        let rows = run_experiment(&cfg, &input).unwrap();
        assert_eq!(rows.len(), 3);
        // Different weights change distances, hence checksums.
        input.weights = None;
        let synth = run_experiment(&cfg, &input).unwrap();
        assert_ne!(rows[2].checksum, synth[2].checksum);
    }
}
