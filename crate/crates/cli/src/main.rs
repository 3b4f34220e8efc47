mod bench;
mod input;

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use vcut_core::formats::{format_assignment, format_mapping};
use vcut_core::graph::{format_edge_list, generate_powerlaw, DegreeStats};
use vcut_core::mapping::{build_cluster_graph, comm_cost, map_clusters, MeshTopology, DEFAULT_THRESHOLD};
use vcut_core::partition::{partition, Lambda, PlacementCounters};
use vcut_core::{Algorithm, EdgeOrder, PartitionConfig, PartitionReport, WeightDist};

use input::{emit, load_assignment, load_graph, InputFormat, RunManifest};

#[derive(Parser)]
#[command(name = "vcut", version, about = "Weight-balanced vertex-cut partitioning and cluster mapping")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Root seed; components draw from named sub-streams of it.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Suppress summaries.
    #[arg(long)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic power-law edge list.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_alpha)]
        alpha: f64,
        /// Number of distinct edges.
        #[arg(long)]
        edges: usize,
        /// unit, int:<low>:<high> or uniform:<low>:<high>.
        #[arg(long, default_value = "int:1:100")]
        weights: WeightDist,
        #[command(flatten)]
        common: Common,
    },
    /// Partition an edge list or trace into clusters.
    Partition {
        input: PathBuf,
        #[arg(long)]
        algo: Algorithm,
        #[arg(long)]
        p: usize,
        /// Imbalance factor for wb-* algorithms, or `unbounded`.
        #[arg(long, default_value = "1.0")]
        lambda: Lambda,
        /// as-given or shuffled.
        #[arg(long, default_value = "as-given")]
        order: EdgeOrder,
        /// Degree exponent; adds the random-cut replication bound to the report.
        #[arg(long, value_parser = parse_alpha)]
        alpha: Option<f64>,
        /// auto, edges or trace.
        #[arg(long, default_value = "auto")]
        format: InputFormat,
        /// JSON report path (stdout when omitted).
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Recompute the report of an existing assignment.
    Metrics {
        graph: PathBuf,
        assignment: PathBuf,
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long, value_parser = parse_alpha)]
        alpha: Option<f64>,
        #[arg(long, default_value = "auto")]
        format: InputFormat,
        #[command(flatten)]
        common: Common,
    },
    /// Map the clusters of an assignment onto a mesh.
    Map {
        graph: PathBuf,
        assignment: PathBuf,
        #[arg(long, default_value_t = 4)]
        rows: usize,
        #[arg(long, default_value_t = 4)]
        cols: usize,
        /// Clusters allowed per core.
        #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
        threshold: usize,
        #[arg(long, default_value = "auto")]
        format: InputFormat,
        #[command(flatten)]
        common: Common,
    },
    /// Compare algorithms over a corpus; writes a CSV table.
    Bench(bench::BenchArgs),
}

fn parse_alpha(s: &str) -> Result<f64, String> {
    let a: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if a > 1.0 && a.is_finite() {
        Ok(a)
    } else {
        Err(format!("exponent must be a finite number > 1, got {a}"))
    }
}

fn note(quiet: bool, msg: impl AsRef<str>) {
    if !quiet {
        eprintln!("{}", msg.as_ref());
    }
}

#[derive(Serialize)]
struct PartitionOutput<'a> {
    manifest: &'a RunManifest,
    report: &'a PartitionReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    counters: Option<PlacementCounters>,
}

fn write_report(path: Option<&Path>, out: &PartitionOutput) -> Result<()> {
    let mut json = serde_json::to_string_pretty(out)?;
    json.push('\n');
    emit(path, &json)
}

fn main() -> Result<()> {
    let started = Instant::now();
    match Cli::parse().command {
        Command::Generate { n, alpha, edges, weights, common } => {
            let g = generate_powerlaw(n, alpha, edges, &weights, common.seed)?;
            let mut manifest = RunManifest::new("generate", common.seed)
                .param("n", n)
                .param("alpha", alpha)
                .param("edges", edges)
                .param("weights", weights);
            manifest.outputs.extend(common.out.clone());
            emit(common.out.as_deref(), &format_edge_list(&g, &manifest.preamble()))?;
            let stats = DegreeStats::of(&g);
            let alpha_hat = stats.alpha.map_or("-".to_string(), |a| format!("{a:.4}"));
            note(
                common.quiet,
                format!(
                    "vertices={} edges={} max_degree={} alpha_hat={alpha_hat} isolated={}",
                    g.vertex_count(),
                    g.edge_count(),
                    stats.max_degree,
                    stats.histogram.get(&0).copied().unwrap_or(0)
                ),
            );
        }
        Command::Partition { input, algo, p, lambda, order, alpha, format, report, common } => {
            let loaded = load_graph(&input, format)?;
            let g = &loaded.graph;
            let config = PartitionConfig::new(algo, p).with_lambda(lambda).with_seed(common.seed).with_order(order);
            let state = partition(g, &config)?;
            let mut manifest = RunManifest::new("partition", common.seed);
            manifest.inputs.push(input.clone());
            manifest.outputs.extend(common.out.clone());
            manifest.outputs.extend(report.clone());
            manifest.config = Some(config);
            let clusters = state.edge_clusters().context("assignment incomplete")?;
            emit(common.out.as_deref(), &format_assignment(p, &clusters, &manifest.preamble()))?;
            let summary = PartitionReport::new(g, &state, lambda.value(), alpha)?;
            manifest.wall_time_s = Some(started.elapsed().as_secs_f64());
            let out = PartitionOutput { manifest: &manifest, report: &summary, counters: Some(state.counters()) };
            if report.is_some() || common.out.is_some() {
                write_report(report.as_deref(), &out)?;
            }
            note(
                common.quiet,
                format!(
                    "replication_factor={} edge_weight_imbalance={}",
                    summary.replication_factor, summary.edge_weight_imbalance
                ),
            );
        }
        Command::Metrics { graph, assignment, lambda, alpha, format, common } => {
            let loaded = load_graph(&graph, format)?;
            let state = load_assignment(&assignment, &loaded.graph)?;
            let summary = PartitionReport::new(&loaded.graph, &state, lambda, alpha)?;
            let mut manifest = RunManifest::new("metrics", common.seed);
            manifest.inputs.extend([graph, assignment]);
            manifest.outputs.extend(common.out.clone());
            manifest.wall_time_s = Some(started.elapsed().as_secs_f64());
            write_report(common.out.as_deref(), &PartitionOutput { manifest: &manifest, report: &summary, counters: None })?;
        }
        Command::Map { graph, assignment, rows, cols, threshold, format, common } => {
            let loaded = load_graph(&graph, format)?;
            let state = load_assignment(&assignment, &loaded.graph)?;
            let mesh = MeshTopology::new(rows, cols)?;
            let cg = build_cluster_graph(&loaded.graph, &state, loaded.addrs.as_ref())?;
            let mapping = map_clusters(&cg, &mesh, threshold)?;
            let cost = comm_cost(&mapping, &cg, &mesh);
            let mut manifest = RunManifest::new("map", common.seed)
                .param("mesh", format!("{rows}x{cols}"))
                .param("threshold", threshold);
            manifest.inputs.extend([graph, assignment]);
            manifest.outputs.extend(common.out.clone());
            let text = format_mapping(rows, cols, &mapping.core_of, &manifest.preamble());
            match &common.out {
                Some(path) => {
                    emit(Some(path), &text)?;
                    if !common.quiet {
                        println!("comm_cost {cost}");
                    }
                }
                None => {
                    emit(None, &text)?;
                    note(common.quiet, format!("comm_cost {cost}"));
                }
            }
        }
        Command::Bench(args) => bench::run(&args)?,
    }
    Ok(())
}
