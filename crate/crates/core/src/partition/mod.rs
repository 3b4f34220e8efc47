//! Streaming vertex-cut edge placement.
//!
//! Every algorithm assigns each edge to one of `p` clusters; a vertex is
//! replicated into every cluster holding one of its edges. The greedy
//! family shares one case structure and differs in three knobs:
//!
//! | algorithm  | load measure | disjoint-span rule        | balance bound |
//! |------------|--------------|---------------------------|---------------|
//! | `pg`       | edge count   | more unassigned edges     | no            |
//! | `libra`    | edge count   | lower degree              | no            |
//! | `w-pg`     | weight sum   | more unassigned edges     | no            |
//! | `wb-pg`    | weight sum   | more unassigned edges     | yes           |
//! | `w-libra`  | weight sum   | lower degree              | no            |
//! | `wb-libra` | weight sum   | lower degree              | yes           |

mod greedy;
mod oracle;
mod state;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

pub use greedy::{compute_bound, greedy_cut, least_loaded, partition, random_cut};
pub use oracle::{oracle_min_replication, OracleSolution, ORACLE_MAX_ASSIGNMENTS};
pub use state::{AssignmentState, ClusterId, PlacementCounters};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum PartitionError {
    #[error("cluster count must be at least 1, got {0}")]
    InvalidClusterCount(usize),
    #[error("imbalance factor must be a finite number >= 1, got {0}")]
    InvalidLambda(f64),
    #[error("unknown algorithm `{0}`; expected one of: random, pg, libra, w-pg, wb-pg, w-libra, wb-libra")]
    UnknownAlgorithm(String),
    #[error("unknown edge order `{0}`; expected `as-given` or `shuffled`")]
    UnknownEdgeOrder(String),
    #[error("`{0}` is not a greedy algorithm")]
    NotGreedy(Algorithm),
    #[error("least-loaded lookup over an empty candidate set")]
    EmptyCandidates,
    #[error("exhaustive search over {p}^{edges} assignments exceeds the limit of {limit}")]
    InstanceTooLarge { p: usize, edges: usize, limit: u64 },
    #[error("no assignment keeps every cluster load within {bound} (lambda = {lambda})")]
    Infeasible { lambda: f64, bound: f64 },
    #[error("edge {edge} assigned to cluster {cluster}, but p = {p}")]
    ClusterOutOfRange { edge: usize, cluster: ClusterId, p: usize },
    #[error("assignment covers {found} edges, graph has {expected}")]
    EdgeCountMismatch { expected: usize, found: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Algorithm {
    #[serde(rename = "random")]
    Random,
    #[serde(rename = "pg")]
    PowerGraph,
    #[serde(rename = "libra")]
    Libra,
    #[serde(rename = "w-pg")]
    WeightedPowerGraph,
    #[serde(rename = "wb-pg")]
    BalancedPowerGraph,
    #[serde(rename = "w-libra")]
    WeightedLibra,
    #[serde(rename = "wb-libra")]
    BalancedLibra,
}

impl Algorithm {
    pub const ALL: [Algorithm; 7] = [
        Algorithm::Random,
        Algorithm::PowerGraph,
        Algorithm::Libra,
        Algorithm::WeightedPowerGraph,
        Algorithm::BalancedPowerGraph,
        Algorithm::WeightedLibra,
        Algorithm::BalancedLibra,
    ];

    pub const GREEDY: [Algorithm; 6] = [
        Algorithm::PowerGraph,
        Algorithm::Libra,
        Algorithm::WeightedPowerGraph,
        Algorithm::BalancedPowerGraph,
        Algorithm::WeightedLibra,
        Algorithm::BalancedLibra,
    ];

    pub fn token(self) -> &'static str {
        match self {
            Algorithm::Random => "random",
            Algorithm::PowerGraph => "pg",
            Algorithm::Libra => "libra",
            Algorithm::WeightedPowerGraph => "w-pg",
            Algorithm::BalancedPowerGraph => "wb-pg",
            Algorithm::WeightedLibra => "w-libra",
            Algorithm::BalancedLibra => "wb-libra",
        }
    }

    /// Loads are weight sums (otherwise edge counts).
    pub fn is_weighted(self) -> bool {
        !matches!(self, Algorithm::PowerGraph | Algorithm::Libra)
    }

    /// Applies the `lambda` load bound.
    pub fn is_balanced(self) -> bool {
        matches!(self, Algorithm::BalancedPowerGraph | Algorithm::BalancedLibra)
    }

    /// Resolves disjoint spans by lower degree rather than by more
    /// unassigned edges.
    pub fn uses_degree_rule(self) -> bool {
        matches!(self, Algorithm::Libra | Algorithm::WeightedLibra | Algorithm::BalancedLibra)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for Algorithm {
    type Err = PartitionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.token() == s)
            .ok_or_else(|| PartitionError::UnknownAlgorithm(s.to_string()))
    }
}

/// Imbalance factor for the weight-balanced variants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Lambda {
    Bounded(f64),
    Unbounded,
}

/// Serialized as the number itself, or the string `"unbounded"`.
impl Serialize for Lambda {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Lambda::Bounded(l) => s.serialize_f64(*l),
            Lambda::Unbounded => s.serialize_str("unbounded"),
        }
    }
}

impl Lambda {
    pub fn value(self) -> Option<f64> {
        match self {
            Lambda::Bounded(l) => Some(l),
            Lambda::Unbounded => None,
        }
    }
}

impl fmt::Display for Lambda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Lambda::Bounded(l) => write!(f, "{l}"),
            Lambda::Unbounded => f.write_str("unbounded"),
        }
    }
}

impl FromStr for Lambda {
    type Err = PartitionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "unbounded" || s == "inf" {
            return Ok(Lambda::Unbounded);
        }
        let l: f64 = s.parse().map_err(|_| PartitionError::InvalidLambda(f64::NAN))?;
        if !(l >= 1.0) || !l.is_finite() {
            return Err(PartitionError::InvalidLambda(l));
        }
        Ok(Lambda::Bounded(l))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeOrder {
    /// Stream edges in graph order.
    #[default]
    AsGiven,
    /// Stream a permutation drawn from the `"shuffle"` stream of the seed.
    Shuffled,
}

impl fmt::Display for EdgeOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EdgeOrder::AsGiven => "as-given",
            EdgeOrder::Shuffled => "shuffled",
        })
    }
}

impl FromStr for EdgeOrder {
    type Err = PartitionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "as-given" => Ok(EdgeOrder::AsGiven),
            "shuffled" => Ok(EdgeOrder::Shuffled),
            other => Err(PartitionError::UnknownEdgeOrder(other.to_string())),
        }
    }
}

/// Parameters of one partitioning run. Ties are always broken towards the
/// lowest cluster id and then the lowest vertex id.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PartitionConfig {
    pub p: usize,
    pub lambda: Lambda,
    pub algorithm: Algorithm,
    pub seed: u64,
    pub edge_order: EdgeOrder,
}

impl PartitionConfig {
    pub fn new(algorithm: Algorithm, p: usize) -> Self {
        PartitionConfig { p, lambda: Lambda::Bounded(1.0), algorithm, seed: 0, edge_order: EdgeOrder::AsGiven }
    }

    pub fn with_lambda(mut self, lambda: Lambda) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_order(mut self, order: EdgeOrder) -> Self {
        self.edge_order = order;
        self
    }

    pub fn validate(&self) -> Result<(), PartitionError> {
        if self.p == 0 {
            return Err(PartitionError::InvalidClusterCount(0));
        }
        if let Lambda::Bounded(l) = self.lambda {
            if !(l >= 1.0) || !l.is_finite() {
                return Err(PartitionError::InvalidLambda(l));
            }
        }
        Ok(())
    }
}
