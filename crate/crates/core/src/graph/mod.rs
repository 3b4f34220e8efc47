//! Weighted directed graphs and the plain-text edge-list format.

mod degree;
mod generate;

use std::collections::HashSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::numeric::CompensatedSum;

pub use degree::{estimate_alpha, estimate_alpha_from_degrees, harmonic_norm, DegreeStats};
pub use generate::{generate_powerlaw, zipf_degree_cap, WeightDist};

pub type VertexId = u32;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub src: VertexId,
    pub dst: VertexId,
    pub weight: f64,
}

impl Edge {
    pub fn new(src: VertexId, dst: VertexId, weight: f64) -> Self {
        Edge { src, dst, weight }
    }
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph with {vertex_count} vertices")]
    VertexOutOfRange { vertex: u64, vertex_count: usize },
    #[error("edge {src} -> {dst} has non-positive weight {weight}")]
    NonPositiveWeight { src: VertexId, dst: VertexId, weight: f64 },
    #[error("self-loop on vertex {0}")]
    SelfLoop(VertexId),
    #[error("duplicate edge {src} -> {dst}")]
    DuplicateEdge { src: VertexId, dst: VertexId },
    #[error("header declares {declared} edges but {found} were read")]
    EdgeCountMismatch { declared: usize, found: usize },
    #[error("malformed line: {0}")]
    Malformed(String),
    #[error("line {line}: {source}")]
    AtLine {
        line: usize,
        #[source]
        source: Box<GraphError>,
    },
    #[error("power-law exponent must be greater than 1, got {0}")]
    InvalidExponent(f64),
    #[error("need at least 2 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("need at least one edge")]
    NoEdgesRequested,
    #[error("{requested} edges requested but a simple digraph on {vertex_count} vertices has at most {max}")]
    TooManyEdges { requested: usize, vertex_count: usize, max: usize },
    #[error("generator could not place {requested} distinct edges (stalled at {placed})")]
    GeneratorStalled { requested: usize, placed: usize },
    #[error("invalid weight distribution: {0}")]
    InvalidWeightDist(String),
    #[error("every vertex has degree zero")]
    NoDegree,
}

impl GraphError {
    fn at_line(self, line: usize) -> GraphError {
        GraphError::AtLine { line, source: Box::new(self) }
    }
}

/// A simple directed graph with positive edge weights.
///
/// Edges keep their construction order; partitioners stream them in that
/// order. Degrees are total (in + out) degrees.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedDigraph {
    vertex_count: usize,
    edges: Vec<Edge>,
    degree: Vec<u32>,
    total_weight: f64,
}

impl WeightedDigraph {
    /// Builds a graph, rejecting out-of-range endpoints, non-positive or
    /// non-finite weights, self-loops and duplicate directed edges.
    pub fn new(vertex_count: usize, edges: Vec<Edge>) -> Result<Self, GraphError> {
        let mut seen = HashSet::with_capacity(edges.len());
        for e in &edges {
            check_edge(e, vertex_count, &mut seen)?;
        }
        Ok(Self::from_checked(vertex_count, edges))
    }

    fn from_checked(vertex_count: usize, edges: Vec<Edge>) -> Self {
        let mut degree = vec![0u32; vertex_count];
        for e in &edges {
            degree[e.src as usize] += 1;
            degree[e.dst as usize] += 1;
        }
        let total_weight = edges.iter().map(|e| e.weight).collect::<CompensatedSum>().value();
        WeightedDigraph { vertex_count, edges, degree, total_weight }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn degree(&self, v: VertexId) -> u32 {
        self.degree[v as usize]
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degree
    }

    /// Sum of all edge weights.
    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    /// Largest edge weight, or 0 for an edgeless graph.
    pub fn max_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).fold(0.0, f64::max)
    }

    /// Returns the graph with every vertex id replaced by `perm[id]`.
    /// `perm` must be a permutation of `0..vertex_count`.
    pub fn relabel(&self, perm: &[VertexId]) -> Result<Self, GraphError> {
        let edges = self
            .edges
            .iter()
            .map(|e| Edge::new(perm[e.src as usize], perm[e.dst as usize], e.weight))
            .collect();
        WeightedDigraph::new(self.vertex_count, edges)
    }
}

fn check_edge(
    e: &Edge,
    vertex_count: usize,
    seen: &mut HashSet<(VertexId, VertexId)>,
) -> Result<(), GraphError> {
    for v in [e.src, e.dst] {
        if v as usize >= vertex_count {
            return Err(GraphError::VertexOutOfRange { vertex: u64::from(v), vertex_count });
        }
    }
    if !(e.weight > 0.0) || !e.weight.is_finite() {
        return Err(GraphError::NonPositiveWeight { src: e.src, dst: e.dst, weight: e.weight });
    }
    if e.src == e.dst {
        return Err(GraphError::SelfLoop(e.src));
    }
    if !seen.insert((e.src, e.dst)) {
        return Err(GraphError::DuplicateEdge { src: e.src, dst: e.dst });
    }
    Ok(())
}

/// Parses the edge-list format:
///
/// ```text
/// # comment
/// p <num_vertices> <num_edges>
/// <src> <dst> <weight>
/// ```
///
/// The header is optional; without it the vertex count is one more than the
/// largest id seen.
pub fn load_edge_list(text: &str) -> Result<WeightedDigraph, GraphError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut lines = Vec::new();
    let mut max_id: Option<u64> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields[0] == "p" {
            if header.is_some() || !edges.is_empty() {
                return Err(GraphError::Malformed("header must precede all edges".into()).at_line(line_no));
            }
            if fields.len() != 3 {
                return Err(GraphError::Malformed(format!("expected `p <vertices> <edges>`, got `{line}`")).at_line(line_no));
            }
            let n = parse_count(fields[1], line_no)?;
            let m = parse_count(fields[2], line_no)?;
            header = Some((n, m));
            continue;
        }
        if fields.len() != 3 {
            return Err(GraphError::Malformed(format!("expected `src dst weight`, got `{line}`")).at_line(line_no));
        }
        let src = parse_id(fields[0], line_no)?;
        let dst = parse_id(fields[1], line_no)?;
        let weight: f64 = fields[2]
            .parse()
            .map_err(|_| GraphError::Malformed(format!("bad weight `{}`", fields[2])).at_line(line_no))?;
        if let Some((n, _)) = header {
            for v in [src, dst] {
                if v as usize >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: v, vertex_count: n }.at_line(line_no));
                }
            }
        }
        let (src, dst) = (to_vertex(src, line_no)?, to_vertex(dst, line_no)?);
        max_id = max_id.max(Some(u64::from(src.max(dst))));
        edges.push(Edge::new(src, dst, weight));
        lines.push(line_no);
    }

    let vertex_count = match header {
        Some((n, m)) => {
            if m != edges.len() {
                return Err(GraphError::EdgeCountMismatch { declared: m, found: edges.len() });
            }
            n
        }
        None => max_id.map_or(0, |id| id as usize + 1),
    };

    let mut seen = HashSet::with_capacity(edges.len());
    for (e, &line_no) in edges.iter().zip(&lines) {
        check_edge(e, vertex_count, &mut seen).map_err(|err| err.at_line(line_no))?;
    }
    Ok(WeightedDigraph::from_checked(vertex_count, edges))
}

fn parse_count(tok: &str, line: usize) -> Result<usize, GraphError> {
    tok.parse()
        .map_err(|_| GraphError::Malformed(format!("bad count `{tok}`")).at_line(line))
}

fn parse_id(tok: &str, line: usize) -> Result<u64, GraphError> {
    tok.parse()
        .map_err(|_| GraphError::Malformed(format!("bad vertex id `{tok}`")).at_line(line))
}

fn to_vertex(id: u64, line: usize) -> Result<VertexId, GraphError> {
    VertexId::try_from(id)
        .map_err(|_| GraphError::Malformed(format!("vertex id {id} exceeds 32 bits")).at_line(line))
}

/// Serializes a graph in edge-list format, header always present.
/// `preamble` lines are emitted first as `#` comments.
pub fn format_edge_list(g: &WeightedDigraph, preamble: &[String]) -> String {
    let mut out = String::with_capacity(16 * g.edge_count() + 64);
    for line in preamble {
        let _ = writeln!(out, "# {line}");
    }
    let _ = writeln!(out, "p {} {}", g.vertex_count(), g.edge_count());
    for e in g.edges() {
        let _ = writeln!(out, "{} {} {}", e.src, e.dst, e.weight);
    }
    out
}
