//! Partition quality: replication factor, weight imbalance, and the expected
//! replication of a uniformly random cut on a power-law graph.

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{harmonic_norm, GraphError, WeightedDigraph};
use crate::numeric::CompensatedSum;
use crate::partition::{AssignmentState, ClusterId};
use crate::rng::seed_stream;

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("graph has no vertices")]
    NoVertices,
    #[error("total edge weight is zero")]
    ZeroWeight,
    #[error("assignment is incomplete")]
    Incomplete,
    #[error("cluster count must be at least 1")]
    NoClusters,
    #[error("assignment has {found} clusters, expected {expected}")]
    ClusterCountMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Average span size over all vertices, rebuilt from the edge map.
pub fn replication_factor(g: &WeightedDigraph, a: &AssignmentState) -> Result<f64, MetricsError> {
    if g.vertex_count() == 0 {
        return Err(MetricsError::NoVertices);
    }
    Ok(span_total(g, a)? as f64 / g.vertex_count() as f64)
}

fn span_total(g: &WeightedDigraph, a: &AssignmentState) -> Result<usize, MetricsError> {
    let clusters = a.edge_clusters().ok_or(MetricsError::Incomplete)?;
    let mut seen: Vec<Vec<ClusterId>> = vec![Vec::new(); g.vertex_count()];
    for (e, c) in g.edges().iter().zip(clusters) {
        for v in [e.src, e.dst] {
            let span = &mut seen[v as usize];
            if !span.contains(&c) {
                span.push(c);
            }
        }
    }
    Ok(seen.iter().map(Vec::len).sum())
}

/// Per-cluster edge weight sums, whatever load measure `a` was built with.
pub fn weight_loads(g: &WeightedDigraph, a: &AssignmentState, p: usize) -> Result<Vec<f64>, MetricsError> {
    let clusters = a.edge_clusters().ok_or(MetricsError::Incomplete)?;
    let mut sums: Vec<CompensatedSum> = vec![CompensatedSum::default(); p];
    for (e, c) in g.edges().iter().zip(clusters) {
        if c as usize >= p {
            return Err(MetricsError::ClusterCountMismatch { expected: p, found: c as usize + 1 });
        }
        sums[c as usize].add(e.weight);
    }
    Ok(sums.iter().map(CompensatedSum::value).collect())
}

/// Heaviest cluster over the average `total_weight / p`.
pub fn edge_weight_imbalance(g: &WeightedDigraph, a: &AssignmentState, p: usize) -> Result<f64, MetricsError> {
    if p == 0 {
        return Err(MetricsError::NoClusters);
    }
    let total = g.total_weight();
    if total <= 0.0 {
        return Err(MetricsError::ZeroWeight);
    }
    let loads = weight_loads(g, a, p)?;
    let max = loads.iter().copied().fold(0.0, f64::max);
    Ok(max / (total / p as f64))
}

/// Expected replication factor of a uniformly random vertex cut into `p`
/// clusters on an `n`-vertex graph whose degrees follow `d^-alpha`.
pub fn expected_replication_random(p: usize, alpha: f64, n: usize) -> Result<f64, MetricsError> {
    if p == 0 {
        return Err(MetricsError::NoClusters);
    }
    if !(alpha > 1.0) || !alpha.is_finite() {
        return Err(GraphError::InvalidExponent(alpha).into());
    }
    let h = harmonic_norm(n, alpha)?;
    if p == 1 {
        return Ok(1.0);
    }
    let pf = p as f64;
    let q = (pf - 1.0) / pf;
    let mut sum = CompensatedSum::default();
    let mut qd = 1.0;
    for d in 1..n {
        qd *= q;
        sum.add(qd * (d as f64).powf(-alpha));
    }
    Ok(pf - pf / h * sum.value())
}

/// Samples span families `X, Y` over `n` vertices and `p` clusters and checks
/// with exact integer counts that `f(S) = sum_v |S(v)| / n` is modular,
/// `f(X) + f(Y) = f(X | Y) + f(X & Y)`, and monotone under adding one pair.
pub fn modularity_check(n: usize, p: usize, trials: usize, seed: u64) -> bool {
    if n == 0 || p == 0 || p > 64 {
        return n == 0 || p == 0;
    }
    let mut rng = seed_stream(seed, "modularity");
    let mask = if p == 64 { u64::MAX } else { (1u64 << p) - 1 };
    let count = |s: &[u64]| -> u64 { s.iter().map(|b| u64::from(b.count_ones())).sum() };
    for _ in 0..trials {
        let x: Vec<u64> = (0..n).map(|_| rng.random::<u64>() & mask).collect();
        let y: Vec<u64> = (0..n).map(|_| rng.random::<u64>() & mask).collect();
        let union: Vec<u64> = x.iter().zip(&y).map(|(a, b)| a | b).collect();
        let inter: Vec<u64> = x.iter().zip(&y).map(|(a, b)| a & b).collect();
        if count(&x) + count(&y) != count(&union) + count(&inter) {
            return false;
        }
        let mut grown = x.clone();
        grown[rng.random_range(0..n)] |= 1 << rng.random_range(0..p);
        if count(&grown) < count(&x) {
            return false;
        }
    }
    true
}

/// Quality summary of one completed assignment; a function of the edge
/// map alone.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionReport {
    pub p: usize,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub replication_factor: f64,
    pub edge_weight_imbalance: f64,
    /// Edge weight per cluster.
    pub loads: Vec<f64>,
    pub total_weight: f64,
    pub max_weight: f64,
    /// `lambda * total_weight / p`, when a lambda was given.
    pub load_bound: Option<f64>,
    /// Every load strictly below `load_bound`.
    pub balance_feasible: Option<bool>,
    /// How far the heaviest cluster exceeds `load_bound`, if at all.
    pub bound_overshoot: Option<f64>,
    /// Expected replication of a random cut, when an exponent was given.
    pub theoretical_bound: Option<f64>,
}

impl PartitionReport {
    pub fn new(
        g: &WeightedDigraph,
        a: &AssignmentState,
        lambda: Option<f64>,
        alpha: Option<f64>,
    ) -> Result<Self, MetricsError> {
        let p = a.p();
        let replication_factor = replication_factor(g, a)?;
        let edge_weight_imbalance = edge_weight_imbalance(g, a, p)?;
        let loads = weight_loads(g, a, p)?;
        let total_weight = g.total_weight();
        let max_load = loads.iter().copied().fold(0.0, f64::max);
        let load_bound = lambda.map(|l| l * total_weight / p as f64);
        let theoretical_bound = match alpha {
            Some(alpha) => Some(expected_replication_random(p, alpha, g.vertex_count())?),
            None => None,
        };
        Ok(PartitionReport {
            p,
            vertex_count: g.vertex_count(),
            edge_count: g.edge_count(),
            replication_factor,
            edge_weight_imbalance,
            total_weight,
            max_weight: g.max_weight(),
            load_bound,
            balance_feasible: load_bound.map(|b| loads.iter().all(|&l| l < b)),
            bound_overshoot: load_bound.map(|b| (max_load - b).max(0.0)),
            theoretical_bound,
            loads,
        })
    }
}
