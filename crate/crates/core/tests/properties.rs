//! Property tests pitting each algorithm against brute-force oracles.

use hc_core::analysis::{
    bisection_coefficients, decompose_opt_tree, delta_max, opt_upper_bound, BisectionCoefficients,
};
use hc_core::generate::random_tree;
use hc_core::linkage::average_linkage;
use hc_core::mub::{exact_mub, local_search_mub, Bisection, ExactMub, LocalSearchMub};
use hc_core::oracle::{opt_dp, opt_exhaustive};
use hc_core::pipeline::{hc_via_mub, hc_via_mub_recursive};
use hc_core::{HCTree, SimilarityGraph, VertexSet};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12_f64.max(1e-9 * a.abs().max(b.abs()))
}

/// Graphs with `n` in `range`; weights are 0-1 or uniform, chosen per case.
fn graphs(range: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = SimilarityGraph> {
    (range, any::<bool>()).prop_flat_map(|(n, binary)| {
        let m = n * (n - 1) / 2;
        prop::collection::vec(0.0..1.0f64, m).prop_map(move |raw| {
            let mut k = 0;
            SimilarityGraph::from_fn(n, |_, _| {
                let x = raw[k];
                k += 1;
                if binary {
                    (x < 0.5) as u8 as f64
                } else {
                    x
                }
            })
            .unwrap()
        })
    })
}

fn tree_for(n: usize, seed: u64) -> HCTree {
    let leaves: Vec<usize> = (0..n).collect();
    random_tree(&leaves, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
}

/// Objective straight from the per-pair definition.
fn mw_by_pairs(t: &HCTree, g: &SimilarityGraph) -> f64 {
    let n = g.n();
    g.pairs()
        .map(|(i, j, w)| w * (n - t.lca_leaf_count(i, j).unwrap()) as f64)
        .sum()
}

/// Every bisection, by enumerating all subsets as `L`.
fn all_bisections(g: &SimilarityGraph) -> Vec<Bisection> {
    let n = g.n();
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == n / 2 || m.count_ones() as usize == n.div_ceil(2))
        .map(|m| {
            let left = VertexSet::new((0..n).filter(|&v| m >> v & 1 == 1)).unwrap();
            Bisection::from_left(g, left).unwrap()
        })
        .collect()
}

fn brute_uncut(g: &SimilarityGraph, left: &VertexSet) -> f64 {
    g.pairs()
        .filter(|&(i, j, _)| left.contains(i) == left.contains(j))
        .map(|(_, _, w)| w)
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn partition_weights_add_up(g in graphs(2..=20), bits in any::<u32>()) {
        let n = g.n();
        let s = VertexSet::new((0..n).filter(|&v| bits >> v & 1 == 1)).unwrap();
        let t = s.complement(n);
        let sum = g.within_weight(&s).unwrap() + g.within_weight(&t).unwrap()
            + g.cut_weight(&s, &t).unwrap();
        prop_assert!(close(sum, g.total_weight()));
        prop_assert!(close(g.cut_weight(&s, &t).unwrap(), g.cut_weight(&t, &s).unwrap()));
    }

    #[test]
    fn objectives_are_complementary(g in graphs(2..=30), seed in any::<u64>()) {
        let t = tree_for(g.n(), seed);
        let mw = t.mw_objective(&g).unwrap();
        let das = t.dasgupta_objective(&g).unwrap();
        let n = g.n() as f64;
        prop_assert!(close(mw + das, n * g.total_weight()));
        prop_assert!(mw <= (n - 2.0).max(0.0) * g.total_weight() * (1.0 + 1e-9));
        prop_assert!(close(mw, mw_by_pairs(&t, &g)));
    }

    #[test]
    fn text_form_round_trips(n in 1usize..40, seed in any::<u64>()) {
        let t = tree_for(n, seed);
        let text = t.to_string();
        let back = HCTree::parse(&text, n).unwrap();
        prop_assert_eq!(back.to_string(), text);
    }

    #[test]
    fn average_linkage_meets_one_third(g in graphs(3..=25)) {
        let t = average_linkage(&g, None).unwrap();
        let n = g.n() as f64;
        let value = t.mw_objective(&g).unwrap();
        prop_assert!(value >= g.total_weight() * (n - 2.0) / 3.0 - 1e-9 * g.total_weight() * n);
        prop_assert_eq!(t.to_string(), average_linkage(&g, None).unwrap().to_string());
    }

    #[test]
    fn exact_bisection_matches_enumeration(g in graphs(2..=10)) {
        let best = exact_mub(&g).unwrap();
        let all = all_bisections(&g);
        let top = all.iter().map(|b| brute_uncut(&g, b.left())).fold(f64::MIN, f64::max);
        prop_assert!(close(best.uncut_weight(), top));
        prop_assert!(close(best.uncut_weight(), brute_uncut(&g, best.left())));
        prop_assert!(best.left().contains(0));
    }

    #[test]
    fn local_search_is_swap_optimal(g in graphs(2..=12), seed in any::<u64>()) {
        let b = local_search_mub(&g, seed, 3).unwrap();
        let exact = exact_mub(&g).unwrap();
        prop_assert!(b.uncut_weight() <= exact.uncut_weight() + 1e-9);
        prop_assert!(b.left().len().abs_diff(b.right().len()) <= 1);
        let tol = 1e-9 * g.total_weight().max(1.0);
        for &u in b.left() {
            for &v in b.right() {
                let left = VertexSet::new(
                    b.left().iter().copied().filter(|&x| x != u).chain([v]),
                ).unwrap();
                prop_assert!(brute_uncut(&g, &left) <= b.uncut_weight() + tol);
            }
        }
    }

    #[test]
    fn more_restarts_never_hurt(g in graphs(4..=14), seed in any::<u64>(), r in 1usize..6) {
        let fewer = local_search_mub(&g, seed, r).unwrap();
        let more = local_search_mub(&g, seed, r + 1).unwrap();
        prop_assert!(more.uncut_weight() >= fewer.uncut_weight());
    }

    #[test]
    fn pipeline_root_split_and_value(g in graphs(4..=12)) {
        let solver = ExactMub::default();
        let t = hc_via_mub(&g, &solver).unwrap();
        let b = exact_mub(&g).unwrap();
        let (l, r) = t.root_split().unwrap();
        prop_assert_eq!(&l, b.left());
        prop_assert_eq!(&r, b.right());
        let value = t.mw_objective(&g).unwrap();
        let n = g.n();
        if n % 2 == 0 {
            prop_assert!(value >= (n / 2) as f64 * b.uncut_weight() * (1.0 - 1e-12));
            // cross pairs sit under the root and contribute nothing
            let halves: f64 = [&l, &r].iter().map(|s| {
                let sub = average_linkage(&g, Some(s)).unwrap();
                let inner = g.induced(s).unwrap();
                let local = sub.map_leaves(|v| s.as_slice().binary_search(&v).unwrap()).unwrap();
                let m = inner.n() as f64;
                // a pair under a node of size k inside the half scores n - k;
                // in the half alone it scores m - k
                local.mw_objective(&inner).unwrap() + (n as f64 - m) * inner.total_weight()
            }).sum();
            prop_assert!(close(value, halves));
        }
    }

    #[test]
    fn recursion_depths(g in graphs(2..=12), seed in any::<u64>()) {
        let solver = LocalSearchMub::new(seed, 2);
        prop_assert_eq!(
            hc_via_mub_recursive(&g, &solver, 0).unwrap().to_string(),
            average_linkage(&g, None).unwrap().to_string()
        );
        prop_assert_eq!(
            hc_via_mub_recursive(&g, &solver, 1).unwrap().to_string(),
            hc_via_mub(&g, &solver).unwrap().to_string()
        );
        let deep = hc_via_mub_recursive(&g, &solver, 3).unwrap();
        deep.check_leaves(g.n()).unwrap();
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dp_agrees_with_exhaustive(g in graphs(2..=7)) {
        let dp = opt_dp(&g).unwrap();
        let ex = opt_exhaustive(&g).unwrap();
        prop_assert!(close(dp.value, ex));
        prop_assert!(close(dp.tree.mw_objective(&g).unwrap(), dp.value));
    }

    #[test]
    fn dp_dominates_every_algorithm(g in graphs(3..=11), seed in any::<u64>()) {
        let opt = opt_dp(&g).unwrap().value;
        let n = g.n() as f64;
        prop_assert!(opt <= (n - 2.0) * g.total_weight() * (1.0 + 1e-9) + 1e-12);
        let candidates = [
            average_linkage(&g, None).unwrap(),
            hc_via_mub(&g, &ExactMub::default()).unwrap(),
            hc_via_mub(&g, &LocalSearchMub::new(seed, 3)).unwrap(),
            tree_for(g.n(), seed),
        ];
        for t in candidates {
            prop_assert!(t.mw_objective(&g).unwrap() <= opt * (1.0 + 1e-9) + 1e-12);
        }
    }

    #[test]
    fn opt_respects_decomposition_bound(g in graphs(2..=11)) {
        let opt = opt_dp(&g).unwrap();
        let d = decompose_opt_tree(&opt.tree, &g).unwrap();
        prop_assert!(close(d.alpha + d.beta, g.total_weight()));
        prop_assert!(opt.value <= opt_upper_bound(&g, &d).unwrap() * (1.0 + 1e-9) + 1e-12);
    }

    #[test]
    fn balanced_cut_exists_when_alpha_dominates(
        g in graphs(2..=10).prop_filter("even n", |g| g.n() % 2 == 0)
    ) {
        let opt = opt_dp(&g).unwrap();
        let d = decompose_opt_tree(&opt.tree, &g).unwrap();
        if d.alpha >= d.beta {
            let bound = d.alpha - (d.alpha - d.beta) * delta_max(d.c_fraction()).unwrap();
            prop_assert!(exact_mub(&g).unwrap().uncut_weight() >= bound - 1e-9 * g.total_weight());
        }
    }
}

#[test]
fn coefficient_identities_on_a_grid() {
    let steps = 200;
    let mut checked = 0;
    for i in 1..steps {
        for j in 1..steps {
            let a = 0.5 * i as f64 / steps as f64;
            let b = 0.5 * j as f64 / steps as f64;
            let c = 1.0 - a - b;
            if !(0.0..0.5).contains(&c) {
                continue;
            }
            let k = BisectionCoefficients::from_fractions(a, b, c).unwrap().unwrap();
            assert!((k.p_a * k.q_a - k.delta).abs() <= 1e-12);
            assert!((k.p_b * k.q_b - k.delta).abs() <= 1e-12);
            assert!((k.p_c * k.q_c - k.delta).abs() <= 1e-12);
            assert!((k.p_a + k.p_b + k.p_c - 1.0).abs() <= 1e-12);
            for q in [k.q_a, k.q_b, k.q_c] {
                assert!((0.0..=0.5 + 1e-15).contains(&q));
            }
            assert!(k.delta <= delta_max(c).unwrap() + 1e-15);
            checked += 1;
        }
    }
    assert!(checked > 10_000, "only {checked} grid points");
}

#[test]
fn decomposition_coefficients_match_fractions() {
    let g = SimilarityGraph::empty(10).unwrap();
    let t = HCTree::parse("(((((0,1),2),(3,4)),(5,6)),((7,8),9))", 10).unwrap();
    let d = decompose_opt_tree(&t, &g).unwrap();
    assert_eq!((d.a.len(), d.b.len(), d.c.len()), (5, 2, 3));
    assert!(bisection_coefficients(&d).is_none());
    let t = HCTree::parse("((((0,1),(2,3)),((4,5),6)),(7,(8,9)))", 10).unwrap();
    let d = decompose_opt_tree(&t, &g).unwrap();
    assert_eq!((d.a.len(), d.b.len(), d.c.len()), (4, 3, 3));
    let k = bisection_coefficients(&d).unwrap();
    let f = BisectionCoefficients::from_fractions(0.4, 0.3, 0.3).unwrap().unwrap();
    assert!((k.delta - f.delta).abs() < 1e-15);
}
