use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use serde::Serialize;
use vcut_core::formats::parse_assignment;
use vcut_core::graph::load_edge_list;
use vcut_core::trace::{address_map, build_dependency_graph, looks_like_trace, parse_trace};
use vcut_core::{AssignmentState, PartitionConfig, VertexId, WeightedDigraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InputFormat {
    #[default]
    Auto,
    Edges,
    Trace,
}

impl FromStr for InputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "auto" => Ok(InputFormat::Auto),
            "edges" => Ok(InputFormat::Edges),
            "trace" => Ok(InputFormat::Trace),
            other => Err(format!("unknown format `{other}`; expected auto, edges or trace")),
        }
    }
}

/// A graph plus, for traces, the vertices touching each address.
pub struct Input {
    pub graph: WeightedDigraph,
    pub addrs: Option<BTreeMap<u64, Vec<VertexId>>>,
}

pub fn load_graph(path: &Path, format: InputFormat) -> Result<Input> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let is_trace = match format {
        InputFormat::Edges => false,
        InputFormat::Trace => true,
        InputFormat::Auto => match path.extension().and_then(|e| e.to_str()) {
            Some("trace") => true,
            Some("el" | "edges") => false,
            _ => looks_like_trace(&text),
        },
    };
    if is_trace {
        let records = parse_trace(&text).with_context(|| format!("parsing trace {}", path.display()))?;
        Ok(Input { graph: build_dependency_graph(&records), addrs: Some(address_map(&records)) })
    } else {
        let graph = load_edge_list(&text).with_context(|| format!("parsing edge list {}", path.display()))?;
        Ok(Input { graph, addrs: None })
    }
}

pub fn load_assignment(path: &Path, g: &WeightedDigraph) -> Result<AssignmentState> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file = parse_assignment(&text).with_context(|| format!("parsing assignment {}", path.display()))?;
    if file.clusters.len() != g.edge_count() {
        bail!(
            "edge-count mismatch: assignment {} covers {} edges, graph has {}",
            path.display(),
            file.clusters.len(),
            g.edge_count()
        );
    }
    Ok(AssignmentState::from_edge_clusters(g, file.p, &file.clusters, true)?)
}

/// Writes `text` to `out`, or to stdout without one.
pub fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// What produced an artifact.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: &'static str,
    pub inputs: Vec<PathBuf>,
    pub outputs: Vec<PathBuf>,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config: Option<PartitionConfig>,
    pub parameters: BTreeMap<&'static str, String>,
    /// Seconds; omitted from text artifacts so reruns stay byte-identical.
    pub wall_time_s: Option<f64>,
}

impl RunManifest {
    pub fn new(subcommand: &'static str, seed: u64) -> Self {
        RunManifest {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            subcommand,
            inputs: Vec::new(),
            outputs: Vec::new(),
            seed,
            config: None,
            parameters: BTreeMap::new(),
            wall_time_s: None,
        }
    }

    pub fn param(mut self, key: &'static str, value: impl ToString) -> Self {
        self.parameters.insert(key, value.to_string());
        self
    }

    /// Comment lines for text artifacts.
    pub fn preamble(&self) -> Vec<String> {
        let mut lines = vec![format!("{} {} {}", self.tool, self.version, self.subcommand)];
        for p in &self.inputs {
            lines.push(format!("input={}", p.display()));
        }
        lines.push(format!("seed={}", self.seed));
        if let Some(c) = &self.config {
            lines.push(format!(
                "algo={} p={} lambda={} order={}",
                c.algorithm, c.p, c.lambda, c.edge_order
            ));
        }
        for (k, v) in &self.parameters {
            lines.push(format!("{k}={v}"));
        }
        lines
    }
}
