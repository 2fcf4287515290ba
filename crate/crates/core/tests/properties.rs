use std::collections::BTreeSet;

use fbm_core::baselines::{pair_score, score_baseline, BaselineMethod};
use fbm_core::estimator::{inter_terms, intra_terms, predict};
use fbm_core::evaluation::{auc, split_edges};
use fbm_core::graph::{block_density, pair_count, parse_edge_list};
use fbm_core::partition::{partition_once, sample_partitions, BlockKind};
use fbm_core::{Graph, Scores, Terms};
use proptest::prelude::*;

fn arb_graph(max_nodes: usize) -> impl Strategy<Value = Graph> {
    (2..=max_nodes).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n), 1..(n * 3))
            .prop_map(move |edges| Graph::with_node_count(n, edges))
    })
}

/// A cycle through every node plus random chords, so every degree is at least 2.
fn arb_cyclic_graph(max_nodes: usize) -> impl Strategy<Value = Graph> {
    (3..=max_nodes).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n), 0..(n * 2)).prop_map(move |chords| {
            Graph::with_node_count(n, (0..n).map(|i| (i, (i + 1) % n)).chain(chords))
        })
    })
}

fn label_pairs(g: &Graph) -> BTreeSet<(String, String)> {
    g.edges()
        .iter()
        .map(|&(a, b)| {
            let (x, y) = (g.label(a).to_string(), g.label(b).to_string());
            if x < y {
                (x, y)
            } else {
                (y, x)
            }
        })
        .collect()
}

fn pool(threads: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn intra_ratio_closed_form(n in 1u64..=500, frac in 0.0f64..=1.0) {
        let m = (frac * n as f64).floor() as u64;
        let t: Terms = intra_terms(n, m).unwrap();
        let want = (n + 1) as f64 / (2 * n - m + 2) as f64;
        prop_assert!((t.ratio() - want).abs() <= 1e-12 * want);
    }

    #[test]
    fn inter_ratio_closed_form(n in 1u64..=500, frac in 0.0f64..=1.0) {
        let m = (frac * n as f64).floor() as u64;
        let t: Terms = inter_terms(n, m).unwrap();
        let want = (m + 1) as f64 / (n + m + 2) as f64;
        prop_assert!((t.ratio() - want).abs() <= 1e-12 * want);
    }

    #[test]
    fn ratios_rise_with_edges(n in 2u64..=500, frac in 0.0f64..1.0) {
        let m = ((frac * n as f64).floor() as u64).min(n - 1);
        let a: Terms = intra_terms(n, m).unwrap();
        let b: Terms = intra_terms(n, m + 1).unwrap();
        prop_assert!(b.ratio() > a.ratio());
        let a: Terms = inter_terms(n, m).unwrap();
        let b: Terms = inter_terms(n, m + 1).unwrap();
        prop_assert!(b.ratio() > a.ratio());
        // more pairs at the same edge count dilutes a cross block
        let c: Terms = inter_terms(n + 1, m).unwrap();
        prop_assert!(c.ratio() < a.ratio());
    }

    #[test]
    fn partition_invariants(g in arb_graph(14), t in 0.05f64..=1.0, seed in any::<u64>()) {
        let p = partition_once(&g, t, seed).unwrap();
        p.validate(&g).unwrap();
        let mut seen = vec![false; g.node_count()];
        for block in &p.blocks {
            prop_assert!(!block.nodes.is_empty());
            for &v in &block.nodes {
                prop_assert!(!seen[v]);
                seen[v] = true;
            }
            let m = g.intra_edge_count(&block.nodes) as u64;
            prop_assert_eq!(m, block.intra_edges);
            match block.kind {
                BlockKind::Community => {
                    prop_assert!(m >= 1);
                    prop_assert!(block_density::<f64>(&g, &block.nodes) >= t);
                }
                BlockKind::Residual => prop_assert_eq!(m, 0),
            }
        }
        prop_assert!(seen.iter().all(|&s| s));
        let mut total = 0;
        for (i, a) in p.blocks.iter().enumerate() {
            total += g.intra_edge_count(&a.nodes);
            for b in &p.blocks[i + 1..] {
                total += g.cross_edge_count(&a.nodes, &b.nodes).unwrap();
            }
        }
        prop_assert_eq!(total, g.edge_count());
    }

    #[test]
    fn edge_list_round_trip(g in arb_graph(20)) {
        // isolated nodes cannot survive an edge list; edges must
        let once = parse_edge_list(&g.to_edge_list()).unwrap();
        let twice = parse_edge_list(&once.to_edge_list()).unwrap();
        prop_assert_eq!(label_pairs(&once), label_pairs(&g));
        prop_assert_eq!(label_pairs(&twice), label_pairs(&g));
    }

    #[test]
    fn giant_component_idempotent(g in arb_graph(20)) {
        let once = g.giant_component();
        prop_assert_eq!(once.giant_component(), once);
    }

    #[test]
    fn whole_graph_density(g in arb_graph(20)) {
        let all: Vec<usize> = (0..g.node_count()).collect();
        let d: f64 = block_density(&g, &all);
        let want = g.edge_count() as f64 / pair_count(g.node_count()) as f64;
        prop_assert!((d - want).abs() < 1e-15);
    }

    #[test]
    fn scores_are_probabilities(g in arb_graph(12), seed in any::<u64>()) {
        let s: Scores = predict(&g, 1.0, 5, seed).unwrap();
        prop_assert_eq!(s.len(), g.non_edges().len());
        for ((a, b), v) in s.iter() {
            prop_assert!(v > 0.0 && v < 1.0, "({}, {}) -> {}", a, b, v);
            prop_assert_eq!(s.get(b, a), Some(v));
        }
    }

    #[test]
    fn auc_ignores_monotone_transforms(g in arb_graph(14), seed in any::<u64>()) {
        prop_assume!(g.edge_count() >= 4 && !g.non_edges().is_empty());
        let split = split_edges(&g, 0.3, seed).unwrap();
        let s: Scores = predict(&split.train, 1.0, 4, seed).unwrap();
        let non_edges = g.non_edges();
        let base = auc(&s, &split.probe, &non_edges).unwrap();

        let rebuild = |f: &dyn Fn(f64) -> f64| {
            let (pairs, scores): (Vec<_>, Vec<_>) = s.iter().map(|(p, v)| (p, f(v))).unzip();
            Scores::from_sorted(pairs, scores, s.meta.clone())
        };
        let cubed = auc(&rebuild(&|v| v * v * v + 2.0 * v), &split.probe, &non_edges).unwrap();
        let logged = auc(&rebuild(&|v| v.ln()), &split.probe, &non_edges).unwrap();
        let flipped = auc(&rebuild(&|v| -v), &split.probe, &non_edges).unwrap();
        prop_assert!((cubed - base).abs() < 1e-12);
        prop_assert!((logged - base).abs() < 1e-12);
        prop_assert!((base + flipped - 1.0).abs() < 1e-12);
    }

    #[test]
    fn resource_allocation_bounded_by_common_neighbours(g in arb_cyclic_graph(16)) {
        for (a, b) in g.non_edges() {
            let cn: f64 = pair_score(&g, BaselineMethod::CommonNeighbors, a, b);
            let ra: f64 = pair_score(&g, BaselineMethod::ResourceAllocation, a, b);
            prop_assert!(ra <= cn / 2.0 + 1e-12);
        }
    }
}

#[test]
fn output_independent_of_pool_size() {
    let g = fbm_core::datasets::karate();
    let one = pool(1).install(|| sample_partitions(&g, 0.7, 64, 99).unwrap());
    let many = pool(8).install(|| sample_partitions(&g, 0.7, 64, 99).unwrap());
    assert_eq!(one, many);

    let one: Scores = pool(1).install(|| predict(&g, 1.0, 100, 7).unwrap());
    let many: Scores = pool(8).install(|| predict(&g, 1.0, 100, 7).unwrap());
    assert_eq!(one.to_csv(&g), many.to_csv(&g));
    for (x, y) in one.scores().iter().zip(many.scores()) {
        assert_eq!(x.to_bits(), y.to_bits());
    }
}

#[test]
fn single_precision_tracks_double() {
    let g = fbm_core::datasets::karate();
    let wide: Scores = predict(&g, 1.0, 40, 3).unwrap();
    let narrow: fbm_core::Scores32 = predict(&g, 1.0, 40, 3).unwrap();
    for ((_, a), (_, b)) in wide.iter().zip(narrow.iter()) {
        assert!((a - b as f64).abs() <= 1e-4 * a.max(1e-3), "{a} vs {b}");
    }
}

#[test]
fn common_neighbours_without_triangles_is_chance() {
    // perfect matching: no pair has a common neighbour
    let g = Graph::with_node_count(12, (0..6).map(|i| (2 * i, 2 * i + 1)));
    let split = split_edges(&g, 0.5, 1).unwrap();
    let s: Scores = score_baseline(&split.train, BaselineMethod::CommonNeighbors).unwrap();
    assert_eq!(auc(&s, &split.probe, &g.non_edges()).unwrap(), 0.5);
}
