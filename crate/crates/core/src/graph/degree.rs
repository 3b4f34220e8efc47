use std::collections::BTreeMap;

use serde::Serialize;

use super::{GraphError, WeightedDigraph};
use crate::numeric::CompensatedSum;

/// Degree histogram of a graph plus a power-law exponent fit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeStats {
    /// degree -> number of vertices with that degree (degree 0 included)
    pub histogram: BTreeMap<u32, usize>,
    pub max_degree: u32,
    /// `None` when every vertex is isolated.
    pub alpha: Option<f64>,
}

impl DegreeStats {
    pub fn of(g: &WeightedDigraph) -> Self {
        let mut histogram = BTreeMap::new();
        for &d in g.degrees() {
            *histogram.entry(d).or_insert(0) += 1;
        }
        DegreeStats {
            max_degree: g.degrees().iter().copied().max().unwrap_or(0),
            alpha: estimate_alpha(g).ok(),
            histogram,
        }
    }

    /// Fraction of vertices whose degree is at least `k`.
    pub fn tail_fraction(&self, k: u32) -> f64 {
        let total: usize = self.histogram.values().sum();
        if total == 0 {
            return 0.0;
        }
        let above: usize = self.histogram.range(k..).map(|(_, c)| c).sum();
        above as f64 / total as f64
    }
}

/// Discrete power-law exponent estimate with `d_min = 1`:
/// `1 + n_d / sum(ln(d_i / 0.5))` over vertices with degree >= 1.
pub fn estimate_alpha(g: &WeightedDigraph) -> Result<f64, GraphError> {
    estimate_alpha_from_degrees(g.degrees().iter().copied())
}

pub fn estimate_alpha_from_degrees<I>(degrees: I) -> Result<f64, GraphError>
where
    I: IntoIterator<Item = u32>,
{
    let mut count = 0usize;
    let mut log_sum = CompensatedSum::default();
    for d in degrees.into_iter().filter(|&d| d >= 1) {
        count += 1;
        log_sum.add((f64::from(d) / 0.5).ln());
    }
    if count == 0 {
        return Err(GraphError::NoDegree);
    }
    Ok(1.0 + count as f64 / log_sum.value())
}

/// Zipf normalizing constant `sum_{d=1}^{n-1} d^-alpha`, accumulated in
/// ascending `d` with compensation.
pub fn harmonic_norm(n: usize, alpha: f64) -> Result<f64, GraphError> {
    if n < 2 {
        return Err(GraphError::TooFewVertices(n));
    }
    Ok((1..n).map(|d| (d as f64).powf(-alpha)).collect::<CompensatedSum>().value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::load_edge_list;
    use proptest::prelude::*;
    use std::f64::consts::LN_2;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs()
    }

    #[test]
    fn all_degree_one() {
        let a = estimate_alpha_from_degrees([1, 1, 1, 1]).unwrap();
        assert!(close(a, 1.0 + 1.0 / LN_2, 1e-15));
        assert!((a - 2.4427).abs() < 1e-4);
    }

    #[test]
    fn degrees_one_one_two() {
        let a = estimate_alpha_from_degrees([1, 1, 2]).unwrap();
        assert!(close(a, 1.0 + 3.0 / (4.0 * LN_2), 1e-15));
        assert!((a - 2.0820).abs() < 1e-4);
    }

    #[test]
    fn isolated_vertices_ignored_and_all_zero_rejected() {
        assert_eq!(
            estimate_alpha_from_degrees([0, 1, 1, 2, 0]).unwrap(),
            estimate_alpha_from_degrees([1, 1, 2]).unwrap()
        );
        assert!(matches!(estimate_alpha_from_degrees([0, 0]), Err(GraphError::NoDegree)));
        let g = load_edge_list("p 3 0\n").unwrap();
        assert!(estimate_alpha(&g).is_err());
    }

    #[test]
    fn harmonic_small_cases() {
        assert_eq!(harmonic_norm(2, 2.2).unwrap(), 1.0);
        assert_eq!(harmonic_norm(2, 17.0).unwrap(), 1.0);
        assert_eq!(harmonic_norm(3, 2.0).unwrap(), 1.25);
        assert!(harmonic_norm(1, 2.0).is_err());
    }

    #[test]
    fn harmonic_matches_extended_precision_reference() {
        // 50-digit mpmath summation, tests/oracles/replication_bound.py
        let reference = 1.490_333_806_997_228_226_8;
        assert!(close(harmonic_norm(1000, 2.2).unwrap(), reference, 1e-13));
    }

    #[test]
    fn stats_histogram() {
        let g = load_edge_list("p 5 3\n0 1 1\n0 2 1\n0 3 1\n").unwrap();
        let s = DegreeStats::of(&g);
        assert_eq!(s.max_degree, 3);
        assert_eq!(s.histogram.get(&0), Some(&1));
        assert_eq!(s.histogram.get(&1), Some(&3));
        assert_eq!(s.histogram.get(&3), Some(&1));
        assert_eq!(s.histogram.values().sum::<usize>(), 5);
        assert_eq!(s.tail_fraction(1), 0.8);
        assert!(s.alpha.unwrap() > 1.0);
    }

    proptest! {
        #[test]
        fn harmonic_monotone(n in 3usize..400, alpha in 1.05f64..4.0) {
            let h = harmonic_norm(n, alpha).unwrap();
            prop_assert!(harmonic_norm(n + 1, alpha).unwrap() > h);
            prop_assert!(harmonic_norm(n, alpha + 0.01).unwrap() < h);
        }

        #[test]
        fn alpha_invariant_under_relabeling(seed in 0u64..1000) {
            use rand::seq::SliceRandom;
            let g = crate::graph::generate_powerlaw(60, 2.3, 90, &crate::graph::WeightDist::Unit, seed).unwrap();
            let mut perm: Vec<u32> = (0..60).collect();
            perm.shuffle(&mut crate::rng::seed_stream(seed, "perm"));
            let h = g.relabel(&perm).unwrap();
            prop_assert!(close(estimate_alpha(&g).unwrap(), estimate_alpha(&h).unwrap(), 1e-14));
        }
    }
}
