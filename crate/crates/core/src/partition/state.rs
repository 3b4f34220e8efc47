use serde::Serialize;

use super::PartitionError;
use crate::graph::{VertexId, WeightedDigraph};

pub type ClusterId = u32;

/// Work done by a partitioning run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct PlacementCounters {
    pub placements: u64,
    /// Candidates examined across all least-loaded lookups.
    pub candidate_scans: u64,
}

/// Edge -> cluster map `M`, vertex -> cluster span `A`, and per-cluster
/// loads of a (possibly partial) vertex cut.
#[derive(Debug, Clone, PartialEq)]
pub struct AssignmentState {
    p: usize,
    weighted: bool,
    edge_cluster: Vec<Option<ClusterId>>,
    // sorted, duplicate-free
    spans: Vec<Vec<ClusterId>>,
    loads: Vec<f64>,
    unassigned_degree: Vec<u32>,
    pub(crate) counters: PlacementCounters,
}

impl AssignmentState {
    /// Empty assignment. `weighted` selects edge weights as the load
    /// measure, otherwise every edge counts 1.
    pub fn new(g: &WeightedDigraph, p: usize, weighted: bool) -> Self {
        AssignmentState {
            p,
            weighted,
            edge_cluster: vec![None; g.edge_count()],
            spans: vec![Vec::new(); g.vertex_count()],
            loads: vec![0.0; p],
            unassigned_degree: g.degrees().to_vec(),
            counters: PlacementCounters::default(),
        }
    }

    /// Rebuilds a complete assignment from an edge -> cluster list.
    pub fn from_edge_clusters(
        g: &WeightedDigraph,
        p: usize,
        clusters: &[ClusterId],
        weighted: bool,
    ) -> Result<Self, PartitionError> {
        if p == 0 {
            return Err(PartitionError::InvalidClusterCount(0));
        }
        if clusters.len() != g.edge_count() {
            return Err(PartitionError::EdgeCountMismatch { expected: g.edge_count(), found: clusters.len() });
        }
        let mut state = AssignmentState::new(g, p, weighted);
        for (edge, &cluster) in clusters.iter().enumerate() {
            if cluster as usize >= p {
                return Err(PartitionError::ClusterOutOfRange { edge, cluster, p });
            }
            state.assign(g, edge, cluster);
        }
        state.counters = PlacementCounters::default();
        Ok(state)
    }

    /// Places edge `edge` into `cluster`, updating spans, loads and
    /// unassigned degrees. Panics if the edge is already placed or the
    /// cluster is out of range.
    pub fn assign(&mut self, g: &WeightedDigraph, edge: usize, cluster: ClusterId) {
        assert!((cluster as usize) < self.p, "cluster {cluster} out of range");
        assert!(self.edge_cluster[edge].is_none(), "edge {edge} placed twice");
        let e = g.edges()[edge];
        self.edge_cluster[edge] = Some(cluster);
        for v in [e.src, e.dst] {
            let span = &mut self.spans[v as usize];
            if let Err(pos) = span.binary_search(&cluster) {
                span.insert(pos, cluster);
            }
            self.unassigned_degree[v as usize] -= 1;
        }
        self.loads[cluster as usize] += if self.weighted { e.weight } else { 1.0 };
        self.counters.placements += 1;
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn is_weighted(&self) -> bool {
        self.weighted
    }

    pub fn cluster_of(&self, edge: usize) -> Option<ClusterId> {
        self.edge_cluster[edge]
    }

    pub fn is_complete(&self) -> bool {
        self.edge_cluster.iter().all(Option::is_some)
    }

    /// Edge -> cluster list; `None` until every edge is placed.
    pub fn edge_clusters(&self) -> Option<Vec<ClusterId>> {
        self.edge_cluster.iter().copied().collect()
    }

    /// Clusters spanned by `v`, ascending.
    pub fn span(&self, v: VertexId) -> &[ClusterId] {
        &self.spans[v as usize]
    }

    pub fn spans(&self) -> &[Vec<ClusterId>] {
        &self.spans
    }

    /// Per-cluster load in the run's load measure.
    pub fn loads(&self) -> &[f64] {
        &self.loads
    }

    pub fn unassigned_degree(&self, v: VertexId) -> u32 {
        self.unassigned_degree[v as usize]
    }

    pub fn counters(&self) -> PlacementCounters {
        self.counters
    }

    /// Recounts spans, loads and unassigned degrees from the edge map and
    /// reports the first disagreement with the incrementally kept state.
    pub fn verify(&self, g: &WeightedDigraph) -> Result<(), String> {
        let mut spans = vec![Vec::new(); g.vertex_count()];
        let mut loads = vec![0.0; self.p];
        let mut unassigned = g.degrees().to_vec();
        for (i, e) in g.edges().iter().enumerate() {
            let Some(c) = self.edge_cluster[i] else { continue };
            if c as usize >= self.p {
                return Err(format!("edge {i} in cluster {c} >= p"));
            }
            for v in [e.src, e.dst] {
                spans[v as usize].push(c);
                unassigned[v as usize] -= 1;
            }
            loads[c as usize] += if self.weighted { e.weight } else { 1.0 };
        }
        for (v, s) in spans.iter_mut().enumerate() {
            s.sort_unstable();
            s.dedup();
            if *s != self.spans[v] {
                return Err(format!("span of vertex {v}: kept {:?}, recount {:?}", self.spans[v], s));
            }
        }
        for (m, (&kept, &recount)) in self.loads.iter().zip(&loads).enumerate() {
            if (kept - recount).abs() > 1e-9 * recount.abs().max(1.0) {
                return Err(format!("load of cluster {m}: kept {kept}, recount {recount}"));
            }
        }
        if unassigned != self.unassigned_degree {
            return Err("unassigned degrees disagree".into());
        }
        Ok(())
    }
}
