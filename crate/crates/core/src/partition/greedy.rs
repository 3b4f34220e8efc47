use rand::seq::SliceRandom;
use rand::Rng;

use super::state::{AssignmentState, ClusterId};
use super::{Algorithm, EdgeOrder, Lambda, PartitionConfig, PartitionError};
use crate::graph::{VertexId, WeightedDigraph};
use crate::rng::seed_stream;

/// Cluster load bound `lambda * total_weight / p`.
pub fn compute_bound(g: &WeightedDigraph, p: usize, lambda: f64) -> f64 {
    lambda * g.total_weight() / p as f64
}

/// Candidate with the smallest load; ties go to the first (lowest) id.
pub fn least_loaded(candidates: &[ClusterId], loads: &[f64]) -> Result<ClusterId, PartitionError> {
    let mut scans = 0;
    argmin_load(candidates.iter().copied(), loads, &mut scans).ok_or(PartitionError::EmptyCandidates)
}

fn argmin_load(candidates: impl Iterator<Item = ClusterId>, loads: &[f64], scans: &mut u64) -> Option<ClusterId> {
    let mut best: Option<(ClusterId, f64)> = None;
    for c in candidates {
        *scans += 1;
        let load = loads[c as usize];
        match best {
            Some((b, l)) if l < load || (l == load && b < c) => {}
            _ => best = Some((c, load)),
        }
    }
    best.map(|(c, _)| c)
}

/// Runs the configured algorithm.
pub fn partition(g: &WeightedDigraph, config: &PartitionConfig) -> Result<AssignmentState, PartitionError> {
    match config.algorithm {
        Algorithm::Random => {
            config.validate()?;
            Ok(random_cut(g, config.p, config.seed))
        }
        _ => greedy_cut(g, config),
    }
}

/// Assigns every edge to a uniformly random cluster drawn from the
/// `"random-cut"` stream of `seed`. Loads are weight sums.
pub fn random_cut(g: &WeightedDigraph, p: usize, seed: u64) -> AssignmentState {
    assert!(p >= 1, "random_cut needs at least one cluster");
    let mut rng = seed_stream(seed, "random-cut");
    let mut state = AssignmentState::new(g, p, true);
    for edge in 0..g.edge_count() {
        let c = rng.random_range(0..p) as ClusterId;
        state.assign(g, edge, c);
    }
    state
}

/// Streaming greedy vertex cut.
///
/// For each edge `(u, v)`, in configured order:
///
/// 1. neither endpoint placed: least-loaded cluster overall;
/// 2. exactly one endpoint placed: least-loaded cluster of its span;
/// 3. spans intersect: least-loaded cluster of the intersection, falling
///    back to the union;
/// 4. spans disjoint: least-loaded cluster of the preferred endpoint's
///    span, falling back to the other endpoint's span. Libra variants
///    prefer the lower-degree endpoint, PowerGraph variants the endpoint
///    with more unassigned edges; ties go to the lower vertex id.
///
/// Fallbacks only happen for the weight-balanced variants, when the chosen
/// cluster's load is already at or above `lambda * total_weight / p`; the
/// last resort is the least-loaded cluster overall.
pub fn greedy_cut(g: &WeightedDigraph, config: &PartitionConfig) -> Result<AssignmentState, PartitionError> {
    config.validate()?;
    let algo = config.algorithm;
    if algo == Algorithm::Random {
        return Err(PartitionError::NotGreedy(algo));
    }
    let p = config.p;
    let bound = match (algo.is_balanced(), config.lambda) {
        (true, Lambda::Bounded(l)) => Some(compute_bound(g, p, l)),
        _ => None,
    };

    let mut order: Vec<usize> = (0..g.edge_count()).collect();
    if config.edge_order == EdgeOrder::Shuffled {
        order.shuffle(&mut seed_stream(config.seed, "shuffle"));
    }

    let all: Vec<ClusterId> = (0..p as ClusterId).collect();
    let mut state = AssignmentState::new(g, p, algo.is_weighted());
    let mut scans = 0u64;
    let mut intersection = Vec::with_capacity(p);
    let mut union = Vec::with_capacity(p);

    for edge in order {
        let e = g.edges()[edge];
        let (u, v) = (e.src, e.dst);
        let (su, sv) = (state.span(u), state.span(v));
        let loads = state.loads();

        let target = match (su.is_empty(), sv.is_empty()) {
            (true, true) => argmin_load(all.iter().copied(), loads, &mut scans),
            (false, true) => pick(&[su], &all, loads, bound, &mut scans),
            (true, false) => pick(&[sv], &all, loads, bound, &mut scans),
            (false, false) => {
                sorted_intersection(su, sv, &mut intersection);
                if !intersection.is_empty() {
                    sorted_union(su, sv, &mut union);
                    pick(&[&intersection, &union], &all, loads, bound, &mut scans)
                } else {
                    let (first, second) = if prefers_first(&state, g, algo, u, v) { (su, sv) } else { (sv, su) };
                    pick(&[first, second], &all, loads, bound, &mut scans)
                }
            }
        };
        let target = target.expect("p >= 1 so the full cluster set is never empty");
        state.assign(g, edge, target);
    }
    state.counters.candidate_scans = scans;
    Ok(state)
}

/// Least-loaded cluster of `chain[0]`; with a bound, moves on through the
/// rest of the chain and finally to `all` while the pick is at or above it.
fn pick(
    chain: &[&[ClusterId]],
    all: &[ClusterId],
    loads: &[f64],
    bound: Option<f64>,
    scans: &mut u64,
) -> Option<ClusterId> {
    let mut m = argmin_load(chain[0].iter().copied(), loads, scans)?;
    let Some(b) = bound else { return Some(m) };
    for set in &chain[1..] {
        if loads[m as usize] < b {
            return Some(m);
        }
        m = argmin_load(set.iter().copied(), loads, scans)?;
    }
    if loads[m as usize] >= b {
        m = argmin_load(all.iter().copied(), loads, scans)?;
    }
    Some(m)
}

/// Whether `u` is the endpoint whose span is tried first when the spans
/// of `u` and `v` are disjoint.
fn prefers_first(state: &AssignmentState, g: &WeightedDigraph, algo: Algorithm, u: VertexId, v: VertexId) -> bool {
    let u_wins_tie = u < v;
    if algo.uses_degree_rule() {
        let (du, dv) = (g.degree(u), g.degree(v));
        du < dv || (du == dv && u_wins_tie)
    } else {
        let (ru, rv) = (state.unassigned_degree(u), state.unassigned_degree(v));
        ru > rv || (ru == rv && u_wins_tie)
    }
}

fn sorted_intersection(a: &[ClusterId], b: &[ClusterId], out: &mut Vec<ClusterId>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
}

fn sorted_union(a: &[ClusterId], b: &[ClusterId], out: &mut Vec<ClusterId>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let next = match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) if x == y => {
                i += 1;
                j += 1;
                x
            }
            (Some(&x), Some(&y)) if x < y => {
                i += 1;
                x
            }
            (Some(_), Some(&y)) => {
                j += 1;
                y
            }
            (Some(&x), None) => {
                i += 1;
                x
            }
            (None, Some(&y)) => {
                j += 1;
                y
            }
            (None, None) => unreachable!(),
        };
        out.push(next);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_powerlaw, load_edge_list, WeightDist};
    use proptest::prelude::*;

    const A: u32 = 0;
    const B: u32 = 1;
    const C: u32 = 2;
    const D: u32 = 3;

    fn rf(g: &WeightedDigraph, s: &AssignmentState) -> f64 {
        s.spans().iter().map(Vec::len).sum::<usize>() as f64 / g.vertex_count() as f64
    }

    fn cfg(algo: Algorithm, p: usize, lambda: f64) -> PartitionConfig {
        PartitionConfig::new(algo, p).with_lambda(Lambda::Bounded(lambda))
    }

    #[test]
    fn bound_formula() {
        let g = load_edge_list("0 1 4\n1 2 6\n").unwrap();
        assert_eq!(compute_bound(&g, 2, 1.0), 5.0);
        assert_eq!(compute_bound(&g, 2, 1.1), 5.5);
        let unit = load_edge_list("0 1 1\n1 2 1\n2 3 1\n").unwrap();
        assert_eq!(compute_bound(&unit, 2, 1.0), 1.5);
        let empty = load_edge_list("p 3 0\n").unwrap();
        assert_eq!(compute_bound(&empty, 4, 1.0), 0.0);
    }

    #[test]
    fn least_loaded_cases() {
        assert_eq!(least_loaded(&[0, 1, 2], &[3.0, 1.0, 1.0]), Ok(1));
        assert_eq!(least_loaded(&[0, 1], &[0.0, 0.0]), Ok(0));
        assert_eq!(least_loaded(&[0], &[3.0, 1.0]), Ok(0));
        assert_eq!(least_loaded(&[], &[3.0, 1.0]), Err(PartitionError::EmptyCandidates));
        // ids need not arrive sorted
        assert_eq!(least_loaded(&[2, 1], &[0.0, 1.0, 1.0]), Ok(1));
    }

    #[test]
    fn star_with_bound_falls_back() {
        let g = load_edge_list(&format!("{A} {B} 1\n{A} {C} 1\n{A} {D} 1\n")).unwrap();
        let s = greedy_cut(&g, &cfg(Algorithm::BalancedLibra, 2, 1.0)).unwrap();
        assert_eq!(s.edge_clusters().unwrap(), vec![0, 0, 1]);
        assert_eq!(s.loads(), &[2.0, 1.0]);
        assert_eq!(s.span(A), &[0, 1]);
        assert_eq!(rf(&g, &s), 1.25);
    }

    #[test]
    fn disjoint_spans_tie_goes_to_lower_vertex() {
        let g = load_edge_list(&format!("{A} {B} 1\n{C} {D} 1\n{B} {C} 1\n")).unwrap();
        let s = greedy_cut(&g, &cfg(Algorithm::BalancedLibra, 2, 10.0)).unwrap();
        assert_eq!(s.edge_clusters().unwrap(), vec![0, 1, 0]);
        assert_eq!(s.loads(), &[2.0, 1.0]);
        assert_eq!(s.span(C), &[0, 1]);
        // A, B, D span one cluster each, C spans both
        assert_eq!(rf(&g, &s), 1.25);
    }

    #[test]
    fn libra_prefers_lower_degree_endpoint() {
        // hub 0 (degree 3) in cluster 0, leaf 4 in cluster 1; edge (0,4)
        // must follow the lower-degree endpoint 4.
        let g = load_edge_list("0 1 1\n0 2 1\n4 5 1\n0 4 1\n").unwrap();
        let s = greedy_cut(&g, &cfg(Algorithm::WeightedLibra, 2, 1.0)).unwrap();
        assert_eq!(s.edge_clusters().unwrap(), vec![0, 0, 1, 1]);
    }

    #[test]
    fn powergraph_prefers_more_unassigned_edges() {
        // at the time (0,4) is placed, 0 still has edge (0,3) pending while
        // 4 has nothing else left, so the edge follows 0.
        let g = load_edge_list("0 1 1\n4 5 1\n0 4 1\n0 3 1\n").unwrap();
        let s = greedy_cut(&g, &cfg(Algorithm::WeightedPowerGraph, 2, 1.0)).unwrap();
        assert_eq!(s.edge_clusters().unwrap(), vec![0, 1, 0, 0]);
        let libra = greedy_cut(&g, &cfg(Algorithm::WeightedLibra, 2, 1.0)).unwrap();
        assert_eq!(libra.edge_clusters().unwrap(), vec![0, 1, 1, 0]);
    }

    #[test]
    fn unweighted_variants_balance_edge_counts() {
        // one heavy edge then light ones: pg balances counts, w-pg weights
        let g = load_edge_list("0 1 100\n2 3 1\n4 5 1\n6 7 1\n").unwrap();
        let pg = greedy_cut(&g, &cfg(Algorithm::PowerGraph, 2, 1.0)).unwrap();
        assert_eq!(pg.edge_clusters().unwrap(), vec![0, 1, 0, 1]);
        let wpg = greedy_cut(&g, &cfg(Algorithm::WeightedPowerGraph, 2, 1.0)).unwrap();
        assert_eq!(wpg.edge_clusters().unwrap(), vec![0, 1, 1, 1]);
    }

    #[test]
    fn intersection_falls_back_to_union_then_everything() {
        // bound 2.5. Edges 0-2 fill cluster 0 to 3; edge 3 falls back to
        // cluster 1. The last edge (1,0) has both endpoints only in cluster
        // 0: intersection and union are both {0}, over the bound, so it
        // goes to the least-loaded cluster overall.
        let g = load_edge_list("0 1 1\n0 2 1\n1 3 1\n3 4 1\n1 0 1\n").unwrap();
        let s = greedy_cut(&g, &cfg(Algorithm::BalancedLibra, 2, 1.0)).unwrap();
        s.verify(&g).unwrap();
        assert_eq!(s.edge_clusters().unwrap(), vec![0, 0, 0, 1, 1]);
        assert_eq!(s.loads(), &[3.0, 2.0]);
    }

    #[test]
    fn single_cluster_takes_everything() {
        let g = generate_powerlaw(200, 2.2, 300, &WeightDist::default(), 3).unwrap();
        for algo in Algorithm::ALL {
            let s = partition(&g, &cfg(algo, 1, 1.0)).unwrap();
            assert!(s.edge_clusters().unwrap().iter().all(|&c| c == 0), "{algo}");
        }
    }

    #[test]
    fn random_is_not_greedy() {
        let g = load_edge_list("0 1 1").unwrap();
        assert_eq!(
            greedy_cut(&g, &cfg(Algorithm::Random, 2, 1.0)).unwrap_err(),
            PartitionError::NotGreedy(Algorithm::Random)
        );
    }

    #[test]
    fn random_cut_is_deterministic() {
        let g = generate_powerlaw(200, 2.2, 300, &WeightDist::default(), 3).unwrap();
        let a = random_cut(&g, 4, 9);
        assert_eq!(a, random_cut(&g, 4, 9));
        assert_ne!(a.edge_clusters(), random_cut(&g, 4, 10).edge_clusters());
        a.verify(&g).unwrap();
        let one = random_cut(&g, 1, 9);
        assert!(one.edge_clusters().unwrap().iter().all(|&c| c == 0));
    }

    #[test]
    fn shuffled_order_depends_on_seed_only() {
        let g = generate_powerlaw(300, 2.2, 500, &WeightDist::default(), 1).unwrap();
        let base = cfg(Algorithm::BalancedLibra, 8, 1.0).with_order(EdgeOrder::Shuffled);
        let a = greedy_cut(&g, &base.with_seed(5)).unwrap();
        let b = greedy_cut(&g, &base.with_seed(5)).unwrap();
        let c = greedy_cut(&g, &base.with_seed(6)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.edge_clusters(), c.edge_clusters());
        c.verify(&g).unwrap();
    }

    #[test]
    fn more_clusters_than_edges() {
        let g = load_edge_list("0 1 1\n2 3 1\n").unwrap();
        let s = greedy_cut(&g, &cfg(Algorithm::BalancedLibra, 5, 1.0)).unwrap();
        assert_eq!(s.edge_clusters().unwrap(), vec![0, 1]);
        assert_eq!(s.loads(), &[1.0, 1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn set_helpers() {
        let mut out = Vec::new();
        sorted_intersection(&[0, 2, 5, 7], &[1, 2, 7, 9], &mut out);
        assert_eq!(out, vec![2, 7]);
        sorted_union(&[0, 2, 5, 7], &[1, 2, 7, 9], &mut out);
        assert_eq!(out, vec![0, 1, 2, 5, 7, 9]);
        sorted_union(&[], &[3], &mut out);
        assert_eq!(out, vec![3]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn greedy_runs_are_total_and_consistent(
            seed in any::<u64>(),
            p in 1usize..20,
            algo_idx in 0usize..6,
            lambda in 1.0f64..1.5,
            shuffled in any::<bool>(),
        ) {
            let g = generate_powerlaw(120, 2.2, 200, &WeightDist::default(), seed).unwrap();
            let algo = Algorithm::GREEDY[algo_idx];
            let order = if shuffled { EdgeOrder::Shuffled } else { EdgeOrder::AsGiven };
            let s = greedy_cut(&g, &cfg(algo, p, lambda).with_order(order).with_seed(seed)).unwrap();
            prop_assert!(s.is_complete());
            prop_assert_eq!(s.verify(&g), Ok(()));
            let r = rf(&g, &s);
            let touched = g.degrees().iter().filter(|&&d| d > 0).count() as f64 / g.vertex_count() as f64;
            prop_assert!(r >= touched - 1e-12 && r <= p as f64);
            let c = s.counters();
            prop_assert_eq!(c.placements, g.edge_count() as u64);
            prop_assert!(c.candidate_scans <= 3 * p as u64 * g.edge_count() as u64);
            if algo.is_balanced() {
                let max = s.loads().iter().copied().fold(0.0, f64::max);
                prop_assert!(max <= compute_bound(&g, p, lambda) + g.max_weight());
            }
        }

        #[test]
        fn balanced_reduces_to_weighted_for_large_lambda(seed in any::<u64>(), p in 1usize..16, extra in 0.0f64..3.0) {
            let g = generate_powerlaw(150, 2.3, 220, &WeightDist::default(), seed).unwrap();
            let lambda = p as f64 + extra;
            for (wb, w) in [
                (Algorithm::BalancedLibra, Algorithm::WeightedLibra),
                (Algorithm::BalancedPowerGraph, Algorithm::WeightedPowerGraph),
            ] {
                let a = greedy_cut(&g, &cfg(wb, p, lambda)).unwrap();
                let b = greedy_cut(&g, &cfg(w, p, lambda)).unwrap();
                prop_assert_eq!(a.edge_clusters(), b.edge_clusters());
            }
        }
    }
}
