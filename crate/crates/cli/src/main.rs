//! `dyngraph` — batch-update benchmark harness for the dynamic graph crate.
//!
//! Exit codes: 0 success, 2 result verification failure, 1 anything else.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use dyngraph_cli::experiment::{run_experiment, ExperimentConfig};
use dyngraph_cli::ingest::load_edge_list;
use dyngraph_cli::report::{to_csv, to_json};
use dyngraph_cli::{CliError, Result};

#[derive(Parser)]
#[command(
    name = "dyngraph",
    version,
    about = "Batch-update experiments over dynamic graph algorithms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse an edge list and print summary statistics.
    Info {
        /// Path to the edge list file.
        input: PathBuf,
        /// Input format: auto, snap, dimacs, or tsv.
        #[arg(long, default_value = "auto")]
        input_format: String,
    },
    /// Run a batch-update experiment and print one report row per batch.
    Run {
        /// Path to the edge list file.
        input: PathBuf,
        /// Algorithm: bfs, sssp, pagerank, triangles, or wcc.
        #[arg(long)]
        algo: String,
        /// static (baseline only), incremental (batches insert new edges),
        /// or decremental (batches delete existing ones).
        #[arg(long, default_value = "incremental")]
        mode: String,
        /// Edges per update batch.
        #[arg(long, default_value_t = 1000)]
        batch_size: usize,
        /// Number of update batches.
        #[arg(long, default_value_t = 10)]
        batches: usize,
        /// Fraction of edges preloaded before the first incremental batch.
        #[arg(long, default_value_t = 0.5)]
        base_fraction: f64,
        /// Seed for the edge split and synthesized weights.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Target bucket fill fraction of the adjacency store, in (0, 1].
        #[arg(long, default_value_t = 0.6)]
        lf: f64,
        /// Disable neighbor hashing; every vertex gets a single bucket.
        #[arg(long)]
        no_hash: bool,
        /// Lanes per storage slab (even, 4..=64).
        #[arg(long, default_value_t = 32)]
        group_width: u32,
        /// Source vertex for bfs/sssp, as a compacted id.
        #[arg(long, default_value_t = 0)]
        src: u32,
        /// PageRank damping factor.
        #[arg(long, default_value_t = 0.85)]
        damping: f64,
        /// PageRank L1 convergence threshold.
        #[arg(long, default_value_t = 1e-5)]
        eps: f64,
        /// PageRank iteration cap.
        #[arg(long, default_value_t = 100)]
        max_iter: u32,
        /// Also write the report to this file.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Report format: csv or json.
        #[arg(long, default_value = "csv")]
        format: String,
        /// Worker threads; 0 uses the machine's parallelism.
        #[arg(long, default_value_t = 0)]
        workers: usize,
        /// Treat the input as undirected. Triangle counting and connected
        /// components always do.
        #[arg(long)]
        symmetrize: bool,
        /// Input format: auto, snap, dimacs, or tsv.
        #[arg(long, default_value = "auto")]
        input_format: String,
        /// Corrupt the first dynamic result to exercise verification.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Info {
            input,
            input_format,
        } => {
            let list = load_edge_list(&input, input_format.parse()?)?;
            let self_loops = list.edges.iter().filter(|(u, v)| u == v).count();
            println!("format: {}", list.format);
            println!("vertices: {}", list.vertex_n);
            println!("edges: {}", list.edges.len());
            println!(
                "weighted: {}",
                if list.weights.is_some() { "yes" } else { "no" }
            );
            println!("self_loops: {self_loops}");
            Ok(())
        }
        Command::Run {
            input,
            algo,
            mode,
            batch_size,
            batches,
            base_fraction,
            seed,
            lf,
            no_hash,
            group_width,
            src,
            damping,
            eps,
            max_iter,
            report,
            format,
            workers,
            symmetrize,
            input_format,
            inject_fault,
        } => {
            let render: fn(&[dyngraph_cli::report::BatchRow]) -> String = match format.as_str() {
                "csv" => to_csv,
                "json" => to_json,
                other => {
                    return Err(CliError::Config(format!(
                        "unknown report format {other:?} (expected csv or json)"
                    )))
                }
            };
            let cfg = ExperimentConfig {
                algo: algo.parse()?,
                mode: mode.parse()?,
                batch_size,
                n_batches: batches,
                base_fraction,
                seed,
                load_factor: lf,
                hashing: !no_hash,
                group_width,
                src,
                damping,
                eps,
                max_iter,
                workers,
                symmetrize,
                inject_fault,
            };
            let list = load_edge_list(&input, input_format.parse()?)?;
            let rows = run_experiment(&cfg, &list)?;
            let text = render(&rows);
            print!("{text}");
            if let Some(path) = report {
                std::fs::write(&path, &text).map_err(|source| CliError::Io { path, source })?;
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ CliError::VerificationFailed { .. }) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
