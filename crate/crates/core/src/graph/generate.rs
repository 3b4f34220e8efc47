use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::distr::weighted::WeightedIndex;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Zipf};

use super::{Edge, GraphError, VertexId, WeightedDigraph};
use crate::rng::seed_stream;

/// Edge-weight distribution for synthetic graphs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightDist {
    /// Every edge has weight 1.
    Unit,
    /// Integers uniform on `[low, high]`.
    UniformInt { low: u32, high: u32 },
    /// Reals uniform on `[low, high)`.
    Uniform { low: f64, high: f64 },
}

impl Default for WeightDist {
    /// Integer cycle counts uniform on `[1, 100]`.
    fn default() -> Self {
        WeightDist::UniformInt { low: 1, high: 100 }
    }
}

impl WeightDist {
    fn validate(&self) -> Result<(), GraphError> {
        let ok = match *self {
            WeightDist::Unit => true,
            WeightDist::UniformInt { low, high } => low >= 1 && low <= high,
            WeightDist::Uniform { low, high } => low > 0.0 && low < high && high.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(GraphError::InvalidWeightDist(self.to_string()))
        }
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        match *self {
            WeightDist::Unit => 1.0,
            WeightDist::UniformInt { low, high } => f64::from(rng.random_range(low..=high)),
            WeightDist::Uniform { low, high } => rng.random_range(low..high),
        }
    }
}

impl fmt::Display for WeightDist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightDist::Unit => write!(f, "unit"),
            WeightDist::UniformInt { low, high } => write!(f, "int:{low}:{high}"),
            WeightDist::Uniform { low, high } => write!(f, "uniform:{low}:{high}"),
        }
    }
}

/// Parses `unit`, `int:<low>:<high>` or `uniform:<low>:<high>`.
impl FromStr for WeightDist {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GraphError::InvalidWeightDist(s.to_string());
        let parts: Vec<&str> = s.split(':').collect();
        let dist = match parts.as_slice() {
            ["unit"] => WeightDist::Unit,
            ["int", lo, hi] => WeightDist::UniformInt {
                low: lo.parse().map_err(|_| bad())?,
                high: hi.parse().map_err(|_| bad())?,
            },
            ["uniform", lo, hi] => WeightDist::Uniform {
                low: lo.parse().map_err(|_| bad())?,
                high: hi.parse().map_err(|_| bad())?,
            },
            _ => return Err(bad()),
        };
        dist.validate()?;
        Ok(dist)
    }
}

/// Smallest degree cap `K <= n-1` such that Zipf(`alpha`) truncated to
/// `[1, K]` has mean degree at least `2m/n`; `n-1` if no cap reaches it.
pub fn zipf_degree_cap(n: usize, alpha: f64, m: usize) -> usize {
    let target = 2.0 * m as f64 / n as f64;
    let (mut mass, mut first_moment) = (0.0, 0.0);
    for k in 1..n {
        let w = (k as f64).powf(-alpha);
        mass += w;
        first_moment += k as f64 * w;
        if first_moment / mass >= target {
            return k;
        }
    }
    n - 1
}

/// Synthetic power-law digraph with exactly `m` distinct edges.
///
/// Every vertex draws a target degree from Zipf(`alpha`) on `[1, K]`
/// (`K` from [`zipf_degree_cap`]); degree stubs are shuffled and paired,
/// each pair becoming one edge with a random orientation. Self-loops and
/// repeated pairs are dropped. If pairing yields fewer than `m` edges the
/// remainder is sampled Chung-Lu style with endpoint probabilities
/// proportional to the target degrees.
///
/// Topology and weights come from the `"generator"` and `"weights"`
/// streams of `seed`, so the output is a pure function of the arguments.
pub fn generate_powerlaw(
    n: usize,
    alpha: f64,
    m: usize,
    weights: &WeightDist,
    seed: u64,
) -> Result<WeightedDigraph, GraphError> {
    if !(alpha > 1.0) || !alpha.is_finite() {
        return Err(GraphError::InvalidExponent(alpha));
    }
    if n < 2 {
        return Err(GraphError::TooFewVertices(n));
    }
    if m == 0 {
        return Err(GraphError::NoEdgesRequested);
    }
    let max = n.saturating_mul(n - 1);
    if m > max {
        return Err(GraphError::TooManyEdges { requested: m, vertex_count: n, max });
    }
    if n > VertexId::MAX as usize {
        return Err(GraphError::VertexOutOfRange { vertex: n as u64, vertex_count: n });
    }
    weights.validate()?;

    let mut rng = seed_stream(seed, "generator");
    let cap = zipf_degree_cap(n, alpha, m);
    let zipf = Zipf::new(cap as f64, alpha).map_err(|e| GraphError::InvalidWeightDist(e.to_string()))?;
    let targets: Vec<u32> = (0..n).map(|_| zipf.sample(&mut rng) as u32).collect();

    let mut stubs: Vec<VertexId> = targets
        .iter()
        .enumerate()
        .flat_map(|(v, &d)| std::iter::repeat_n(v as VertexId, d as usize))
        .collect();
    stubs.shuffle(&mut rng);

    let mut seen: HashSet<(VertexId, VertexId)> = HashSet::with_capacity(m);
    let mut pairs: Vec<(VertexId, VertexId)> = Vec::with_capacity(m);
    let mut push = |a: VertexId, b: VertexId, pairs: &mut Vec<_>| {
        if a != b && seen.insert((a, b)) {
            pairs.push((a, b));
        }
    };

    for chunk in stubs.chunks_exact(2) {
        if pairs.len() == m {
            break;
        }
        let (a, b) = if rng.random_bool(0.5) { (chunk[0], chunk[1]) } else { (chunk[1], chunk[0]) };
        push(a, b, &mut pairs);
    }

    if pairs.len() < m {
        let endpoint = WeightedIndex::new(&targets).map_err(|e| GraphError::InvalidWeightDist(e.to_string()))?;
        let budget = 64 * m + 4096;
        let mut attempts = 0usize;
        while pairs.len() < m {
            if attempts == budget {
                return Err(GraphError::GeneratorStalled { requested: m, placed: pairs.len() });
            }
            attempts += 1;
            let a = endpoint.sample(&mut rng) as VertexId;
            let b = endpoint.sample(&mut rng) as VertexId;
            push(a, b, &mut pairs);
        }
    }

    let mut weight_rng = seed_stream(seed, "weights");
    let edges = pairs
        .into_iter()
        .map(|(a, b)| Edge::new(a, b, weights.sample(&mut weight_rng)))
        .collect();
    WeightedDigraph::new(n, edges)
}
