//! Python bindings for the dynamic graph framework.
//!
//! The module exposes the [`Graph`] class — a thin wrapper around the
//! concurrent adjacency store — plus one function per graph algorithm. All
//! methods take `&self`: the underlying store is lock-free and interior-
//! mutable, so a single `Graph` object can be shared freely.
//!
//! Distances use `None` for unreachable vertices instead of the internal
//! `u32::MAX` sentinel, and errors surface as `ValueError`s carrying the
//! library's own error messages.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use dyngraph_core::algo::pagerank::{
    apply_directed_inserts, pagerank as pagerank_solve, PageRankState,
};
use dyngraph_core::algo::sssp::{bfs_static, sssp_static, INF_DIST};
use dyngraph_core::algo::triangles::tc_static;
use dyngraph_core::algo::wcc::wcc_static;
use dyngraph_core::{DynamicGraph, EdgeBatch, Engine, GraphConfig, InsertOutcome};

fn to_py_err(e: dyngraph_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn hide_inf(distances: Vec<u32>) -> Vec<Option<u32>> {
    distances
        .into_iter()
        .map(|d| if d == INF_DIST { None } else { Some(d) })
        .collect()
}

fn batch_of(
    edges: Vec<(u32, u32)>,
    weights: Option<Vec<u32>>,
    directed: bool,
) -> PyResult<EdgeBatch> {
    let build = if directed {
        EdgeBatch::directed
    } else {
        EdgeBatch::undirected
    };
    build(edges, weights).map_err(to_py_err)
}

/// A dynamic directed graph over vertices `0..vertex_n`.
///
/// Undirected graphs are stored symmetrically: pass `directed=False` to the
/// batch methods (or insert both orientations yourself). `weighted` graphs
/// require a weight on every insert; unweighted graphs forbid them.
#[pyclass]
struct Graph {
    inner: DynamicGraph,
}

#[pymethods]
impl Graph {
    #[new]
    #[pyo3(signature = (
        vertex_n,
        weighted = false,
        group_width = 32,
        load_factor = 0.6,
        hashing = true,
        update_tracking = false,
        degree_hints = None,
    ))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        vertex_n: u32,
        weighted: bool,
        group_width: u32,
        load_factor: f64,
        hashing: bool,
        update_tracking: bool,
        degree_hints: Option<Vec<u32>>,
    ) -> PyResult<Self> {
        let cfg = GraphConfig {
            vertex_n,
            weighted,
            hashing,
            update_tracking,
            load_factor,
            group_width,
            hash_seed: None,
        };
        let inner = match degree_hints {
            Some(hints) => DynamicGraph::with_degree_hints(&cfg, &hints),
            None => DynamicGraph::new(&cfg),
        }
        .map_err(to_py_err)?;
        Ok(Graph { inner })
    }

    /// Number of vertices the graph was created with.
    #[getter]
    fn vertex_n(&self) -> u32 {
        self.inner.vertex_n()
    }

    /// Whether edges carry weights.
    #[getter]
    fn weighted(&self) -> bool {
        self.inner.weighted()
    }

    /// Inserts one directed edge. Returns `"inserted"`, `"updated"` (weight
    /// overwritten in place), or `"present"` (unweighted duplicate).
    #[pyo3(signature = (u, v, weight = None))]
    fn insert_edge(&self, u: u32, v: u32, weight: Option<u32>) -> PyResult<&'static str> {
        match self.inner.insert_edge(u, v, weight).map_err(to_py_err)? {
            InsertOutcome::Inserted => Ok("inserted"),
            InsertOutcome::Updated => Ok("updated"),
            InsertOutcome::AlreadyPresent => Ok("present"),
        }
    }

    /// Deletes one directed edge; returns whether it existed.
    fn delete_edge(&self, u: u32, v: u32) -> PyResult<bool> {
        self.inner.delete_edge(u, v).map_err(to_py_err)
    }

    /// Looks up one directed edge; returns `(found, weight)`.
    fn search_edge(&self, u: u32, v: u32) -> PyResult<(bool, Option<u32>)> {
        self.inner.search_edge(u, v).map_err(to_py_err)
    }

    /// Inserts a batch of edges; returns how many directed slots were new.
    /// With `directed=False` every pair is stored in both orientations.
    #[pyo3(signature = (edges, weights = None, directed = true))]
    fn insert_edges(
        &self,
        edges: Vec<(u32, u32)>,
        weights: Option<Vec<u32>>,
        directed: bool,
    ) -> PyResult<u64> {
        let batch = batch_of(edges, weights, directed)?;
        self.inner.insert_edges(&batch).map_err(to_py_err)
    }

    /// Deletes a batch of edges; returns how many directed slots existed.
    #[pyo3(signature = (edges, directed = true))]
    fn delete_edges(&self, edges: Vec<(u32, u32)>, directed: bool) -> PyResult<u64> {
        let batch = batch_of(edges, None, directed)?;
        self.inner.delete_edges(&batch).map_err(to_py_err)
    }

    /// The live out-neighbors of `v` as `(neighbor, weight)` pairs, sorted.
    fn neighbors(&self, v: u32) -> PyResult<Vec<(u32, Option<u32>)>> {
        let mut out = self.inner.neighbors(v).map_err(to_py_err)?;
        out.sort_unstable();
        Ok(out)
    }

    /// Number of live out-neighbors of `v`.
    fn degree(&self, v: u32) -> PyResult<usize> {
        self.inner.degree(v).map_err(to_py_err)
    }

    /// Total number of live directed edges.
    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    /// Seals the update log: update-aware iterators started afterwards replay
    /// only edges inserted after this point.
    fn seal_updates(&self) {
        self.inner.seal_updates()
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph(vertex_n={}, weighted={}, edges={})",
            self.inner.vertex_n(),
            self.inner.weighted(),
            self.inner.edge_count(),
        )
    }
}

/// Hop distances from `src`; `None` marks unreachable vertices.
#[pyfunction]
#[pyo3(signature = (graph, src, workers = 0))]
fn bfs(graph: &Graph, src: u32, workers: usize) -> PyResult<Vec<Option<u32>>> {
    let engine = Engine::new(workers);
    let tree = bfs_static(&engine, &graph.inner, src).map_err(to_py_err)?;
    Ok(hide_inf(tree.distances()))
}

/// Shortest-path distances from `src` on a weighted graph; `None` marks
/// unreachable vertices.
#[pyfunction]
#[pyo3(signature = (graph, src, workers = 0))]
fn sssp(graph: &Graph, src: u32, workers: usize) -> PyResult<Vec<Option<u32>>> {
    let engine = Engine::new(workers);
    let tree = sssp_static(&engine, &graph.inner, src).map_err(to_py_err)?;
    Ok(hide_inf(tree.distances()))
}

/// PageRank scores of the directed graph given by `edges` over vertices
/// `0..vertex_n`. Dangling mass is redistributed uniformly each iteration.
#[pyfunction]
#[pyo3(signature = (vertex_n, edges, damping = 0.85, eps = 1e-5, max_iter = 100, workers = 0))]
fn pagerank(
    vertex_n: u32,
    edges: Vec<(u32, u32)>,
    damping: f64,
    eps: f64,
    max_iter: u32,
    workers: usize,
) -> PyResult<Vec<f64>> {
    let mut in_hints = vec![0u32; vertex_n as usize];
    for &(_, v) in &edges {
        match in_hints.get_mut(v as usize) {
            Some(h) => *h += 1,
            None => return Err(PyValueError::new_err(format!("vertex {v} out of range"))),
        }
    }
    let cfg = GraphConfig {
        vertex_n,
        ..GraphConfig::default()
    };
    let g_in = DynamicGraph::with_degree_hints(&cfg, &in_hints).map_err(to_py_err)?;
    let mut out_degree = vec![0u32; vertex_n as usize];
    let batch = EdgeBatch::directed(edges, None).map_err(to_py_err)?;
    apply_directed_inserts(&g_in, &mut out_degree, &batch).map_err(to_py_err)?;
    let engine = Engine::new(workers);
    let mut state = PageRankState::new(vertex_n, damping, eps, max_iter).map_err(to_py_err)?;
    pagerank_solve(&engine, &g_in, &out_degree, &mut state).map_err(to_py_err)?;
    Ok(state.scores)
}

/// Number of triangles in a symmetrically stored graph.
#[pyfunction]
#[pyo3(signature = (graph, workers = 0))]
fn triangle_count(graph: &Graph, workers: usize) -> PyResult<u64> {
    let engine = Engine::new(workers);
    tc_static(&engine, &graph.inner).map_err(to_py_err)
}

/// Connected-component labels of a symmetrically stored graph; every label is
/// the smallest vertex id in its component.
#[pyfunction]
#[pyo3(signature = (graph, workers = 0))]
fn wcc(graph: &Graph, workers: usize) -> PyResult<Vec<u32>> {
    let engine = Engine::new(workers);
    wcc_static(&engine, &graph.inner).map_err(to_py_err)
}

#[pymodule]
fn dyngraph_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Graph>()?;
    m.add_function(wrap_pyfunction!(bfs, m)?)?;
    m.add_function(wrap_pyfunction!(sssp, m)?)?;
    m.add_function(wrap_pyfunction!(pagerank, m)?)?;
    m.add_function(wrap_pyfunction!(triangle_count, m)?)?;
    m.add_function(wrap_pyfunction!(wcc, m)?)?;
    Ok(())
}
