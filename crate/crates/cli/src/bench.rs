use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use clap::Args;
use rayon::prelude::*;
use vcut_core::mapping::{build_cluster_graph, comm_cost, map_clusters, MeshTopology, DEFAULT_THRESHOLD};
use vcut_core::metrics::{edge_weight_imbalance, replication_factor};
use vcut_core::partition::{partition, Lambda};
use vcut_core::{Algorithm, PartitionConfig};

use crate::input::{emit, load_graph, Input, InputFormat};

pub const HEADER: &str = "graph,algo,p,seed,lambda,replication_factor,imbalance,comm_cost,scans";

#[derive(Args)]
pub struct BenchArgs {
    /// Directory of edge-list / trace files, or a single file.
    corpus: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "8")]
    p_list: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "libra,wb-libra")]
    algo_list: Vec<Algorithm>,
    #[arg(long, value_delimiter = ',', default_value = "0")]
    seeds: Vec<u64>,
    /// Imbalance factor for wb-* algorithms.
    #[arg(long, default_value = "1.0")]
    lambda: Lambda,
    /// `start:end:step` sweep for wb-* algorithms, one row per value.
    #[arg(long, value_parser = parse_sweep)]
    lambda_list: Option<Sweep>,
    #[arg(long, default_value = "auto")]
    format: InputFormat,
    /// Output CSV path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    quiet: bool,
}

#[derive(Debug, Clone, PartialEq)]
struct Sweep(Vec<f64>);

/// `start:end:step`, inclusive of `end` up to rounding.
fn parse_sweep(s: &str) -> Result<Sweep, String> {
    let parts: Vec<f64> = s
        .split(':')
        .map(|t| t.parse::<f64>().map_err(|_| format!("bad number `{t}` in `{s}`")))
        .collect::<Result<_, _>>()?;
    let [start, end, step] = parts[..] else {
        return Err(format!("expected start:end:step, got `{s}`"));
    };
    if !(start >= 1.0) || !(end >= start) || !(step > 0.0) {
        return Err(format!("need 1 <= start <= end and step > 0, got `{s}`"));
    }
    // integer steps avoid drift from repeated addition; rounding keeps
    // 1.0001 from printing as 1.0000999999999999
    let count = ((end - start) / step + 1e-9).floor() as usize;
    Ok(Sweep((0..=count).map(|k| ((start + k as f64 * step) * 1e12).round() / 1e12).collect()))
}

fn corpus_files(path: &Path) -> Result<Vec<PathBuf>> {
    if path.is_file() {
        return Ok(vec![path.to_path_buf()]);
    }
    let mut files: Vec<PathBuf> = fs::read_dir(path)
        .with_context(|| format!("reading corpus {}", path.display()))?
        .map(|e| e.map(|e| e.path()))
        .collect::<Result<_, _>>()?;
    files.retain(|p| p.is_file());
    files.sort();
    if files.is_empty() {
        bail!("corpus {} is empty", path.display());
    }
    Ok(files)
}

/// Smallest near-square mesh holding `p` clusters at the default threshold.
fn mesh_for(p: usize) -> Result<MeshTopology> {
    let cores = p.div_ceil(DEFAULT_THRESHOLD).max(1);
    let rows = (cores as f64).sqrt().ceil() as usize;
    Ok(MeshTopology::new(rows, cores.div_ceil(rows))?)
}

struct Cell<'a> {
    name: &'a str,
    input: &'a Input,
    algo: Algorithm,
    p: usize,
    seed: u64,
    /// Only set for the balanced variants.
    lambda: Option<Lambda>,
}

fn evaluate(cell: &Cell) -> Result<String> {
    let g = &cell.input.graph;
    let lambda = cell.lambda.unwrap_or(Lambda::Unbounded);
    let config = PartitionConfig::new(cell.algo, cell.p).with_lambda(lambda).with_seed(cell.seed);
    let state = partition(g, &config)?;
    let rf = replication_factor(g, &state)?;
    let imbalance = edge_weight_imbalance(g, &state, cell.p)?;
    let mesh = mesh_for(cell.p)?;
    let cg = build_cluster_graph(g, &state, cell.input.addrs.as_ref())?;
    let cost = comm_cost(&map_clusters(&cg, &mesh, DEFAULT_THRESHOLD)?, &cg, &mesh);
    let lambda = cell.lambda.map_or("-".to_string(), |l| l.to_string());
    Ok(format!(
        "{},{},{},{},{lambda},{rf},{imbalance},{cost},{}",
        cell.name,
        cell.algo,
        cell.p,
        cell.seed,
        state.counters().candidate_scans
    ))
}

pub fn run(args: &BenchArgs) -> Result<()> {
    ensure!(!args.p_list.is_empty() && !args.algo_list.is_empty() && !args.seeds.is_empty(), "empty parameter list");
    let files = corpus_files(&args.corpus)?;
    let inputs: Vec<(String, Input)> = files
        .iter()
        .map(|f| {
            let name = f.file_name().map_or_else(|| f.display().to_string(), |n| n.to_string_lossy().into_owned());
            load_graph(f, args.format).map(|g| (name, g))
        })
        .collect::<Result<_>>()?;

    let mut cells = Vec::new();
    for (name, input) in &inputs {
        for &algo in &args.algo_list {
            let sweep: Vec<Option<Lambda>> = match (&args.lambda_list, algo.is_balanced()) {
                (_, false) => vec![None],
                (Some(Sweep(list)), true) => list.iter().map(|&l| Some(Lambda::Bounded(l))).collect(),
                (None, true) => vec![Some(args.lambda)],
            };
            for &p in &args.p_list {
                for &seed in &args.seeds {
                    for &lambda in &sweep {
                        cells.push(Cell { name, input, algo, p, seed, lambda });
                    }
                }
            }
        }
    }

    let rows: Vec<String> = cells.par_iter().map(evaluate).collect::<Result<_>>()?;
    let mut csv = String::from(HEADER);
    csv.push('\n');
    for row in &rows {
        writeln!(csv, "{row}")?;
    }
    emit(args.out.as_deref(), &csv)?;
    if !args.quiet && args.out.is_some() {
        eprintln!("{} rows over {} graphs", rows.len(), inputs.len());
    }
    Ok(())
}
