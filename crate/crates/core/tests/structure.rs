mod common;

use std::collections::BTreeMap;
use std::sync::Arc;

use mstgrid::bipartite::{avg_stretch, avg_stretch_from_companion};
use mstgrid::rational::{ratio, to_f64};
use mstgrid::{
    centipede, count_spanning_trees, double_spiral, fractal, tree_growth_base, BipartiteCompanion,
    FamilyKind, FamilySpec, Graph, SpanningTree, TreeSpec,
};
use num_traits::One;
use proptest::prelude::*;

use common::*;

#[test]
fn catalan_constant_matches_series() {
    let g = ramanujan_catalan();
    assert!((g - mstgrid::graph::CATALAN).abs() < 1e-15);
    let b = (4.0 * g / std::f64::consts::PI).exp();
    assert!((tree_growth_base() - b).abs() < 1e-12);
}

#[test]
fn grid_counts_match_brute_force() {
    for n in 1..=3 {
        let g = Graph::grid(n).unwrap();
        let brute = brute_force_tree_count(g.vertex_count(), g.edges());
        assert_eq!(count_spanning_trees(&g).unwrap(), brute.into());
    }
}

#[test]
fn grid_count_growth_stays_below_base() {
    let ln_b = tree_growth_base().ln();
    let mut prev = 0.0;
    for n in 2..=10 {
        let c = count_spanning_trees(&Graph::grid(n).unwrap()).unwrap();
        let rate = c.to_string().parse::<f64>().unwrap().ln() / (n * n) as f64;
        assert!(rate > prev && rate < ln_b, "n = {n}: {rate}");
        prev = rate;
    }
}

fn small_graph() -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (2usize..=6).prop_flat_map(|v| {
        let pairs: Vec<(usize, usize)> = (0..v)
            .flat_map(|a| (a + 1..v).map(move |b| (a, b)))
            .collect();
        let k = pairs.len();
        (Just(v), proptest::sample::subsequence(pairs, 0..=k.min(8)))
    })
}

proptest! {
    #[test]
    fn counts_match_brute_force_on_small_graphs((v, edges) in small_graph()) {
        let g = Graph::new(v, edges.clone()).unwrap();
        let brute = brute_force_tree_count(v, &edges);
        match count_spanning_trees(&g) {
            Ok(c) => prop_assert_eq!(c, brute.into()),
            Err(_) => prop_assert_eq!(brute, 0),
        }
    }

    #[test]
    fn handshake_and_duality(n in 2usize..=6, seed in any::<u64>()) {
        let t = random_tree(&grid(n), seed);
        let b = BipartiteCompanion::from_tree(&t);
        prop_assert_eq!(
            b.mean_chord_degree() * ratio(b.chord_count() as i64, 1),
            b.mean_branch_degree() * ratio(b.branch_count() as i64, 1)
        );
        for &c in t.chords() {
            let cycle = t.fundamental_cycle(c).unwrap();
            prop_assert!(cycle.len() >= 4 && cycle.len().is_multiple_of(2));
            for &e in t.branches() {
                let in_cycle = cycle.contains(&e);
                let in_cut = t.fundamental_cut(e).unwrap().contains(&c);
                prop_assert_eq!(in_cycle, in_cut);
            }
        }
    }

    #[test]
    fn degrees_are_odd_and_masses_sum_to_one(n in 2usize..=7, seed in any::<u64>()) {
        let t = random_tree(&grid(n), seed);
        let b = BipartiteCompanion::from_tree(&t);
        for v in 0..b.chord_count() {
            let d = b.chord_degree(v);
            prop_assert!(d >= 3 && d % 2 == 1);
        }
        prop_assert!(b.degree_mass().unwrap().total_mass().is_one());
    }

    #[test]
    fn tree_json_round_trip(n in 2usize..=6, seed in any::<u64>()) {
        let t = random_tree(&grid(n), seed);
        let json = serde_json::to_string(&t.to_spec()).unwrap();
        let back: TreeSpec = serde_json::from_str(&json).unwrap();
        let rebuilt = back.build().unwrap();
        prop_assert_eq!(rebuilt.branches(), t.branches());
    }
}

#[test]
fn avg_stretch_two_ways_on_fifty_trees() {
    let g = grid(6);
    for seed in 0..50 {
        let t = random_tree(&g, seed);
        let b = BipartiteCompanion::from_tree(&t);
        assert_eq!(avg_stretch(&t), avg_stretch_from_companion(&b));
    }
}

#[test]
fn generators_are_valid_up_to_side_64() {
    for n in 2..=64 {
        for t in [centipede(n).unwrap(), double_spiral(n).unwrap()] {
            assert_eq!(t.branch_count(), n * n - 1);
            // rebuilding validates connectivity and acyclicity from scratch
            SpanningTree::from_edges(t.graph().clone(), t.branches().iter().copied()).unwrap();
        }
    }
    for k in 1..=6 {
        let t = fractal(k).unwrap();
        SpanningTree::from_edges(t.graph().clone(), t.branches().iter().copied()).unwrap();
    }
}

#[test]
fn invalid_family_sizes() {
    assert!(centipede(1).is_err());
    assert!(double_spiral(1).is_err());
    assert!(fractal(0).is_err());
    assert!(FamilySpec::new(FamilyKind::Kruskal, 4).generate().is_err());
}

#[test]
fn centipede_degree_mass_is_uniform() {
    for n in 3..=12 {
        let dm = BipartiteCompanion::from_tree(&centipede(n).unwrap())
            .degree_mass()
            .unwrap();
        let expected: BTreeMap<usize, u64> =
            (3..2 * n).step_by(2).map(|d| (d, (n - 1) as u64)).collect();
        assert_eq!(dm.counts().collect::<BTreeMap<_, _>>(), expected);
        for d in (3..2 * n).step_by(2) {
            assert_eq!(dm.mass(d), ratio(1, n as i64 - 1));
        }
    }
}

#[test]
fn centipede_neighbor_overlap_vanishes() {
    let r: Vec<f64> = [8, 16, 32]
        .iter()
        .map(|&n| {
            to_f64(&BipartiteCompanion::from_tree(&centipede(n).unwrap()).neighbor_overlap_ratio())
        })
        .collect();
    assert!(r[0] > r[1] && r[1] > r[2]);
}

#[test]
fn fractal_branch_recurrence() {
    for k in 1..=7 {
        let m = fractal(k).unwrap().branch_count();
        let next = fractal(k + 1).unwrap().branch_count();
        assert_eq!(next, 4 * m + 3);
    }
}

#[test]
fn fractal_level_seven_near_limit() {
    let dm = BipartiteCompanion::from_tree(&fractal(7).unwrap())
        .degree_mass()
        .unwrap();
    assert!((to_f64(&dm.mass(3)) - 5.0 / 12.0).abs() < 0.02);
}

#[test]
fn double_spiral_degrees_grow_linearly() {
    let stats: Vec<(f64, f64, f64)> = [8, 16, 32]
        .iter()
        .map(|&n| {
            let b = BipartiteCompanion::from_tree(&double_spiral(n).unwrap());
            let ratio_m = to_f64(&b.mean_chord_degree()) / b.branch_count() as f64;
            let p3 = to_f64(&b.degree_mass().unwrap().mass(3));
            let bound = to_f64(&mstgrid::bipartite::boundedness_statistic(&b, n));
            (ratio_m, p3, bound)
        })
        .collect();
    for w in stats.windows(2) {
        assert!(w[1].0 >= w[0].0);
        assert!(w[1].1 < w[0].1);
    }
    for (r, _, bound) in &stats {
        assert!(*r >= 0.02 && *bound >= 0.01);
    }
}

#[test]
fn sampler_frequencies_on_four_cycle() {
    let g = grid(2);
    let runs = 40_000u64;
    let sigma = (0.25f64 * 0.75 / runs as f64).sqrt();
    for wilson in [false, true] {
        let mut counts = BTreeMap::new();
        for seed in 0..runs {
            let t = if wilson {
                mstgrid::sample_wilson(&g, seed).unwrap()
            } else {
                mstgrid::sample_kruskal(&g, seed).unwrap()
            };
            *counts.entry(t.branch_mask()).or_insert(0u64) += 1;
        }
        assert_eq!(counts.len(), 4);
        for c in counts.values() {
            assert!((*c as f64 / runs as f64 - 0.25).abs() < 3.0 * sigma);
        }
    }
}

#[test]
fn samplers_reject_disconnected_hosts() {
    let g = Arc::new(Graph::new(4, vec![(0, 1), (2, 3)]).unwrap());
    assert!(mstgrid::sample_kruskal(&g, 0).is_err());
    assert!(mstgrid::sample_wilson(&g, 0).is_err());
}
