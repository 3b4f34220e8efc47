//! Cluster -> core placement on a mesh with XY routing.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::IndexedRandom;
use thiserror::Error;

use crate::graph::{VertexId, WeightedDigraph};
use crate::partition::{AssignmentState, ClusterId};
use crate::rng::seed_stream;

pub const DEFAULT_THRESHOLD: usize = 4;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MappingError {
    #[error("mesh must have at least one row and one column, got {rows}x{cols}")]
    EmptyMesh { rows: usize, cols: usize },
    #[error("region count must be 1, 2 or 4, got {0}")]
    InvalidRegionCount(usize),
    #[error("a {rows}x{cols} mesh cannot be split into {k} equal regions")]
    UnevenRegions { rows: usize, cols: usize, k: usize },
    #[error("per-core threshold must be at least 1")]
    InvalidThreshold,
    #[error("{clusters} clusters exceed the capacity of {capacity} ({cores} cores x {threshold})", capacity = cores * threshold)]
    CapacityExhausted { clusters: usize, cores: usize, threshold: usize },
    #[error("cluster {cluster} out of range for p = {p}")]
    ClusterOutOfRange { cluster: ClusterId, p: usize },
    #[error("core {core} out of range for a {rows}x{cols} mesh")]
    CoreOutOfRange { core: usize, rows: usize, cols: usize },
    #[error("assignment is incomplete")]
    Incomplete,
}

/// `rows x cols` grid of cores, numbered row-major, split into equal
/// rectangular regions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeshTopology {
    rows: usize,
    cols: usize,
    region_of: Vec<usize>,
    region_count: usize,
}

impl MeshTopology {
    /// Mesh with the largest region count among 4, 2, 1 that splits it evenly.
    pub fn new(rows: usize, cols: usize) -> Result<Self, MappingError> {
        [4, 2, 1]
            .into_iter()
            .find_map(|k| MeshTopology::with_regions(rows, cols, k).ok())
            .ok_or(MappingError::EmptyMesh { rows, cols })
    }

    pub fn with_regions(rows: usize, cols: usize, k: usize) -> Result<Self, MappingError> {
        if rows == 0 || cols == 0 {
            return Err(MappingError::EmptyMesh { rows, cols });
        }
        let (split_rows, split_cols) = match k {
            1 => (1, 1),
            2 if cols >= rows && cols.is_multiple_of(2) => (1, 2),
            2 if rows.is_multiple_of(2) => (2, 1),
            2 if cols.is_multiple_of(2) => (1, 2),
            4 if rows.is_multiple_of(2) && cols.is_multiple_of(2) => (2, 2),
            2 | 4 => return Err(MappingError::UnevenRegions { rows, cols, k }),
            _ => return Err(MappingError::InvalidRegionCount(k)),
        };
        let (rh, cw) = (rows / split_rows, cols / split_cols);
        let region_of = (0..rows * cols)
            .map(|core| (core / cols / rh) * split_cols + (core % cols) / cw)
            .collect();
        Ok(MeshTopology { rows, cols, region_of, region_count: k })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn core_count(&self) -> usize {
        self.rows * self.cols
    }

    pub fn coords(&self, core: usize) -> (usize, usize) {
        (core / self.cols, core % self.cols)
    }

    /// Manhattan distance, the XY-routing hop count.
    pub fn hops(&self, a: usize, b: usize) -> usize {
        let (ra, ca) = self.coords(a);
        let (rb, cb) = self.coords(b);
        ra.abs_diff(rb) + ca.abs_diff(cb)
    }

    pub fn region_of(&self, core: usize) -> usize {
        self.region_of[core]
    }

    pub fn region_count(&self) -> usize {
        self.region_count
    }
}

/// Cores of each of `k` equal regions, ascending.
pub fn decompose_regions(mesh: &MeshTopology, k: usize) -> Result<Vec<Vec<usize>>, MappingError> {
    let split = MeshTopology::with_regions(mesh.rows, mesh.cols, k)?;
    let mut regions = vec![Vec::new(); k];
    for core in 0..split.core_count() {
        regions[split.region_of(core)].push(core);
    }
    Ok(regions)
}

/// Replica traffic between clusters plus groups of clusters sharing memory.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ClusterGraph {
    p: usize,
    // keyed (i, j) with i < j, zero weights absent
    comm: BTreeMap<(ClusterId, ClusterId), u64>,
    mem_groups: BTreeMap<u64, BTreeSet<ClusterId>>,
}

impl ClusterGraph {
    pub fn new(p: usize) -> Self {
        ClusterGraph { p, ..Default::default() }
    }

    pub fn p(&self) -> usize {
        self.p
    }

    fn check(&self, c: ClusterId) -> Result<(), MappingError> {
        if (c as usize) < self.p {
            Ok(())
        } else {
            Err(MappingError::ClusterOutOfRange { cluster: c, p: self.p })
        }
    }

    /// Adds `w` to the symmetric weight between `i` and `j`. Self pairs are
    /// ignored.
    pub fn add_comm(&mut self, i: ClusterId, j: ClusterId, w: u64) -> Result<(), MappingError> {
        self.check(i)?;
        self.check(j)?;
        if i != j && w > 0 {
            *self.comm.entry((i.min(j), i.max(j))).or_default() += w;
        }
        Ok(())
    }

    pub fn comm(&self, i: ClusterId, j: ClusterId) -> u64 {
        self.comm.get(&(i.min(j), i.max(j))).copied().unwrap_or(0)
    }

    /// Nonzero pairs `(i, j, weight)` with `i < j`, ascending.
    pub fn pairs(&self) -> impl Iterator<Item = (ClusterId, ClusterId, u64)> + '_ {
        self.comm.iter().map(|(&(i, j), &w)| (i, j, w))
    }

    pub fn add_mem_group(&mut self, key: u64, clusters: impl IntoIterator<Item = ClusterId>) -> Result<(), MappingError> {
        let set: BTreeSet<ClusterId> = clusters.into_iter().collect();
        for &c in &set {
            self.check(c)?;
        }
        self.mem_groups.entry(key).or_default().extend(set);
        Ok(())
    }

    pub fn mem_groups(&self) -> &BTreeMap<u64, BTreeSet<ClusterId>> {
        &self.mem_groups
    }
}

/// Cluster graph of a complete assignment: `comm(i, j)` counts vertices
/// spanning both clusters. With `addr_info` (address -> vertices touching
/// it) each address becomes a memory group of the clusters holding those
/// vertices; otherwise every cluster is its own group.
pub fn build_cluster_graph(
    g: &WeightedDigraph,
    a: &AssignmentState,
    addr_info: Option<&BTreeMap<u64, Vec<VertexId>>>,
) -> Result<ClusterGraph, MappingError> {
    if !a.is_complete() {
        return Err(MappingError::Incomplete);
    }
    let mut cg = ClusterGraph::new(a.p());
    for span in a.spans() {
        for (k, &i) in span.iter().enumerate() {
            for &j in &span[k + 1..] {
                cg.add_comm(i, j, 1)?;
            }
        }
    }
    match addr_info {
        Some(addrs) => {
            for (&addr, vertices) in addrs {
                let clusters: Vec<ClusterId> = vertices
                    .iter()
                    .filter(|&&v| (v as usize) < g.vertex_count())
                    .flat_map(|&v| a.span(v).iter().copied())
                    .collect();
                if !clusters.is_empty() {
                    cg.add_mem_group(addr, clusters)?;
                }
            }
        }
        None => {
            for c in 0..a.p() as ClusterId {
                cg.add_mem_group(u64::from(c), [c])?;
            }
        }
    }
    Ok(cg)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappingResult {
    pub rows: usize,
    pub cols: usize,
    /// Core of each cluster.
    pub core_of: Vec<usize>,
    /// Clusters mapped to each core.
    pub per_core: Vec<usize>,
}

impl MappingResult {
    /// Checks ranges and rebuilds per-core counts from `core_of`.
    pub fn from_cores(mesh: &MeshTopology, core_of: Vec<usize>) -> Result<Self, MappingError> {
        let mut per_core = vec![0; mesh.core_count()];
        for &core in &core_of {
            if core >= mesh.core_count() {
                return Err(MappingError::CoreOutOfRange { core, rows: mesh.rows, cols: mesh.cols });
            }
            per_core[core] += 1;
        }
        Ok(MappingResult { rows: mesh.rows, cols: mesh.cols, core_of, per_core })
    }

    pub fn max_per_core(&self) -> usize {
        self.per_core.iter().copied().max().unwrap_or(0)
    }
}

fn check_capacity(p: usize, mesh: &MeshTopology, threshold: usize) -> Result<(), MappingError> {
    if threshold == 0 {
        return Err(MappingError::InvalidThreshold);
    }
    if p > mesh.core_count() * threshold {
        return Err(MappingError::CapacityExhausted { clusters: p, cores: mesh.core_count(), threshold });
    }
    Ok(())
}

/// Memory-centric placement, clusters taken in id order:
///
/// 1. sharing a memory group with a placed cluster: join the lowest-id such
///    cluster's core while it is under `threshold`, else the least-loaded
///    free core of another region;
/// 2. communicating with placed clusters: the free core nearest to the
///    heaviest partner, not counting the partner's own core unless nothing
///    else is free;
/// 3. otherwise the least-loaded free core of the least-used region.
///
/// Ties go to the lowest id throughout.
pub fn map_clusters(cg: &ClusterGraph, mesh: &MeshTopology, threshold: usize) -> Result<MappingResult, MappingError> {
    let p = cg.p();
    check_capacity(p, mesh, threshold)?;
    let cores = mesh.core_count();

    let mut groups_of: Vec<Vec<usize>> = vec![Vec::new(); p];
    let groups: Vec<&BTreeSet<ClusterId>> = cg.mem_groups().values().filter(|s| s.len() > 1).collect();
    for (gi, set) in groups.iter().enumerate() {
        for &c in *set {
            groups_of[c as usize].push(gi);
        }
    }
    let mut partners: Vec<Vec<(ClusterId, u64)>> = vec![Vec::new(); p];
    for (i, j, w) in cg.pairs() {
        partners[i as usize].push((j, w));
        partners[j as usize].push((i, w));
    }

    let mut core_of: Vec<Option<usize>> = vec![None; p];
    let mut per_core = vec![0usize; cores];
    let mut per_region = vec![0usize; mesh.region_count()];
    let free = |per_core: &[usize], core: usize| per_core[core] < threshold;

    for c in 0..p {
        let owner = groups_of[c]
            .iter()
            .flat_map(|&gi| groups[gi].iter())
            .filter(|&&o| core_of[o as usize].is_some())
            .min();
        let anchor = partners[c]
            .iter()
            .filter(|(o, _)| core_of[*o as usize].is_some())
            .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)));

        let target = if let Some(&o) = owner {
            let home = core_of[o as usize].unwrap();
            if free(&per_core, home) {
                home
            } else {
                let region = mesh.region_of(home);
                least_loaded(&per_core, threshold, (0..cores).filter(|&k| mesh.region_of(k) != region))
                    .or_else(|| least_loaded(&per_core, threshold, 0..cores))
                    .expect("capacity checked")
            }
        } else if let Some(&(o, _)) = anchor {
            let home = core_of[o as usize].unwrap();
            (0..cores)
                .filter(|&k| k != home && free(&per_core, k))
                .min_by_key(|&k| (mesh.hops(home, k), k))
                .or_else(|| free(&per_core, home).then_some(home))
                .expect("capacity checked")
        } else {
            let mut regions: Vec<usize> = (0..mesh.region_count()).collect();
            regions.sort_by_key(|&r| (per_region[r], r));
            regions
                .into_iter()
                .find_map(|r| least_loaded(&per_core, threshold, (0..cores).filter(|&k| mesh.region_of(k) == r)))
                .expect("capacity checked")
        };
        core_of[c] = Some(target);
        per_core[target] += 1;
        per_region[mesh.region_of(target)] += 1;
    }

    Ok(MappingResult {
        rows: mesh.rows,
        cols: mesh.cols,
        core_of: core_of.into_iter().map(|c| c.expect("every cluster placed")).collect(),
        per_core,
    })
}

fn least_loaded(per_core: &[usize], threshold: usize, cores: impl Iterator<Item = usize>) -> Option<usize> {
    cores.filter(|&k| per_core[k] < threshold).min_by_key(|&k| (per_core[k], k))
}

/// Uniformly random placement that respects the per-core threshold.
pub fn random_mapping(p: usize, mesh: &MeshTopology, threshold: usize, seed: u64) -> Result<MappingResult, MappingError> {
    check_capacity(p, mesh, threshold)?;
    let mut rng = seed_stream(seed, "random-map");
    let mut per_core = vec![0usize; mesh.core_count()];
    let mut core_of = Vec::with_capacity(p);
    for _ in 0..p {
        let open: Vec<usize> = (0..mesh.core_count()).filter(|&k| per_core[k] < threshold).collect();
        let &core = open.choose(&mut rng).expect("capacity checked");
        per_core[core] += 1;
        core_of.push(core);
    }
    Ok(MappingResult { rows: mesh.rows, cols: mesh.cols, core_of, per_core })
}

/// Sum over cluster pairs of replica traffic times hop distance.
pub fn comm_cost(m: &MappingResult, cg: &ClusterGraph, mesh: &MeshTopology) -> f64 {
    cg.pairs()
        .map(|(i, j, w)| w * mesh.hops(m.core_of[i as usize], m.core_of[j as usize]) as u64)
        .sum::<u64>() as f64
}
