//! Weight-balanced vertex-cut partitioning for weighted power-law
//! dependency graphs.
//!
//! The crate covers the whole pipeline:
//!
//! - [`graph`]: weighted digraphs, the edge-list format, synthetic
//!   power-law generation and degree statistics.
//! - [`trace`]: a line-oriented dynamic instruction trace and the
//!   register/memory dependency graph built from it.
//! - [`partition`]: streaming greedy edge placement (PowerGraph, Libra and
//!   their weighted and weight-balanced variants), the random baseline and
//!   an exhaustive oracle for tiny instances.
//! - [`metrics`]: replication factor, edge-weight imbalance, the expected
//!   replication of a random cut and the modularity property of the
//!   objective.
//! - [`mapping`]: a mesh of cores split into regions and the
//!   memory-centric cluster-to-core mapping with a hop-count cost model.
//! - [`formats`]: the assignment and mapping text formats.

pub mod formats;
pub mod graph;
pub mod mapping;
pub mod metrics;
pub mod partition;
pub mod trace;

mod numeric;
mod rng;

pub use graph::{Edge, GraphError, VertexId, WeightDist, WeightedDigraph};
pub use mapping::{ClusterGraph, MappingError, MappingResult, MeshTopology};
pub use metrics::{MetricsError, PartitionReport};
pub use partition::{Algorithm, AssignmentState, ClusterId, EdgeOrder, PartitionConfig, PartitionError};
pub use rng::seed_stream;
pub use trace::{TraceError, TraceRecord};
