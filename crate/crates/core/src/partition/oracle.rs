use super::state::{AssignmentState, ClusterId};
use super::{compute_bound, PartitionError};
use crate::graph::WeightedDigraph;

/// Largest number of assignments the exhaustive search will enumerate.
pub const ORACLE_MAX_ASSIGNMENTS: u64 = 1_000_000;

#[derive(Debug, Clone)]
pub struct OracleSolution {
    pub state: AssignmentState,
    /// Minimum replication factor.
    pub objective: f64,
    /// Sum of span sizes at the optimum (`objective * |V|`).
    pub span_total: usize,
}

/// Exhaustive minimum replication factor over all `p^|E|` assignments whose
/// every cluster weight stays within `lambda * total_weight / p`.
///
/// Among optimal assignments the lexicographically smallest edge -> cluster
/// list wins.
pub fn oracle_min_replication(g: &WeightedDigraph, p: usize, lambda: f64) -> Result<OracleSolution, PartitionError> {
    if p == 0 {
        return Err(PartitionError::InvalidClusterCount(0));
    }
    if !(lambda >= 1.0) || !lambda.is_finite() {
        return Err(PartitionError::InvalidLambda(lambda));
    }
    let m = g.edge_count();
    let too_large = PartitionError::InstanceTooLarge { p, edges: m, limit: ORACLE_MAX_ASSIGNMENTS };
    let exp = u32::try_from(m).map_err(|_| too_large.clone())?;
    let total = (p as u64).checked_pow(exp).ok_or(too_large.clone())?;
    if total > ORACLE_MAX_ASSIGNMENTS {
        return Err(too_large);
    }
    let n = g.vertex_count();

    let bound = compute_bound(g, p, lambda);
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, e) in g.edges().iter().enumerate() {
        incident[e.src as usize].push(i);
        incident[e.dst as usize].push(i);
    }

    let mut assignment: Vec<ClusterId> = vec![0; m];
    let mut loads = vec![0.0; p];
    let mut seen = vec![u64::MAX; p];
    let mut stamp = 0u64;
    let mut best: Option<(usize, Vec<ClusterId>)> = None;

    loop {
        loads.iter_mut().for_each(|l| *l = 0.0);
        for (e, &c) in g.edges().iter().zip(&assignment) {
            loads[c as usize] += e.weight;
        }
        if loads.iter().all(|&l| l <= bound) {
            let mut span_total = 0;
            for edges in &incident {
                stamp += 1;
                for &i in edges {
                    let c = assignment[i] as usize;
                    if seen[c] != stamp {
                        seen[c] = stamp;
                        span_total += 1;
                    }
                }
            }
            if best.as_ref().is_none_or(|(b, _)| span_total < *b) {
                best = Some((span_total, assignment.clone()));
            }
        }
        // odometer, last edge fastest: enumeration is lexicographic
        let mut pos = m;
        loop {
            if pos == 0 {
                let (span_total, clusters) =
                    best.ok_or(PartitionError::Infeasible { lambda, bound })?;
                let state = AssignmentState::from_edge_clusters(g, p, &clusters, true)?;
                return Ok(OracleSolution { state, objective: span_total as f64 / n.max(1) as f64, span_total });
            }
            pos -= 1;
            assignment[pos] += 1;
            if (assignment[pos] as usize) < p {
                break;
            }
            assignment[pos] = 0;
        }
    }
}
