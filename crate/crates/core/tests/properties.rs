//! Property tests over random graphs, sequence members and relabelings.

use std::collections::BTreeSet;

use proptest::prelude::*;

use expander_core::analyzer::edge_expansion_exact;
use expander_core::format::{parse_graph, parse_signing, write_graph, write_signing};
use expander_core::lift::halve;
use expander_core::sim::{run_script, AdversaryScript};
use expander_core::{
    expansion_cost, graph_at, graphs_equal, spectral_report, Degree, Signing, VertexName, WeightedMultigraph,
};

/// A graph on `n` equal-length names with the given edge weights (0 = absent).
fn weighted(n: u32, weights: &[u32]) -> WeightedMultigraph {
    let mut g = WeightedMultigraph::new(Degree::new(6).unwrap());
    let mut k = 0;
    for a in 0..n {
        g.add_vertex(VertexName::root(a));
        for b in (a + 1)..n {
            let w = weights[k % weights.len()];
            k += 1;
            if w > 0 {
                g.set_weight(VertexName::root(a), VertexName::root(b), w).unwrap();
            }
        }
    }
    g
}

fn graph_strategy() -> impl Strategy<Value = WeightedMultigraph> {
    (3u32..8, prop::collection::vec(0u32..4, 28)).prop_map(|(n, w)| weighted(n, &w))
}

/// Renames every base `b` to `perm[b]`, keeping the bit paths.
fn relabel(g: &WeightedMultigraph, perm: &[u32]) -> WeightedMultigraph {
    let map = |v: &VertexName| VertexName::from_path(perm[v.base() as usize], v.path(), v.len());
    let mut out = WeightedMultigraph::new(g.degree_target());
    for (a, b, w) in g.edges() {
        out.set_weight(map(&a), map(&b), w).unwrap();
    }
    out
}

fn sequence_member() -> impl Strategy<Value = (u32, usize)> {
    prop_oneof![Just(6u32), Just(8), Just(10)].prop_flat_map(|d| {
        let base = d as usize / 2 + 1;
        (Just(d), base..=3 * base)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn expansion_cost_is_a_metric(a in graph_strategy(), b in graph_strategy(), c in graph_strategy()) {
        prop_assert_eq!(expansion_cost(&a, &a), 0);
        prop_assert_eq!(expansion_cost(&a, &b), expansion_cost(&b, &a));
        prop_assert_eq!(expansion_cost(&a, &b) == 0, graphs_equal(&a, &b));
        prop_assert!(expansion_cost(&a, &c) <= expansion_cost(&a, &b) + expansion_cost(&b, &c));
    }

    #[test]
    fn sequence_graphs_are_regular((d, n) in sequence_member()) {
        let g = graph_at(d, n, 1).unwrap();
        let m = g.adjacency_matrix();
        prop_assert!(m.is_symmetric());
        for i in 0..m.n() {
            prop_assert_eq!(m.row_sum(i), d as u64);
        }
        let s = spectral_report(&g).unwrap();
        prop_assert!((s.lambda1() - d as f64).abs() < 1e-9);
    }

    #[test]
    fn graph_files_round_trip(g in graph_strategy()) {
        let isolated = g.vertices().any(|v| g.simple_degree(v) == 0);
        match write_graph(&g) {
            Ok(text) => {
                prop_assert!(!isolated);
                let back = parse_graph(&text).unwrap();
                prop_assert!(graphs_equal(&back, &g));
                prop_assert_eq!(write_graph(&back).unwrap(), text);
            }
            Err(_) => prop_assert!(isolated),
        }
    }

    #[test]
    fn signing_files_round_trip(bits in prop::collection::vec(any::<bool>(), 6)) {
        let k4 = halve(&graph_at(6, 4, 1).unwrap()).unwrap();
        let s = Signing::from_bits(&k4, &bits);
        prop_assert_eq!(parse_signing(&write_signing(&s)).unwrap(), s);
    }

    #[test]
    fn expansion_and_spectrum_ignore_labels(
        (d, n) in sequence_member(),
        perm in Just((0u32..6).collect::<Vec<_>>()).prop_shuffle(),
    ) {
        let g = graph_at(d, n.min(12), 1).unwrap();
        let base = g.vertices().map(|v| v.base()).max().unwrap() as usize + 1;
        let perm: Vec<u32> = perm.into_iter().filter(|&b| (b as usize) < base).collect();
        let h = relabel(&g, &perm);
        prop_assert_eq!(edge_expansion_exact(&g).unwrap().h, edge_expansion_exact(&h).unwrap().h);
        let (sg, sh) = (spectral_report(&g).unwrap(), spectral_report(&h).unwrap());
        for (x, y) in sg.eigenvalues.iter().zip(&sh.eigenvalues) {
            prop_assert!((x - y).abs() < 1e-8);
        }
        let names: BTreeSet<u32> = h.vertices().map(|v| v.base()).collect();
        prop_assert_eq!(names.len(), base);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn random_scripts_replay_identically(seed in 0u64..1000, events in 10usize..40) {
        let script = AdversaryScript::random(6, events, 0.6, seed);
        let a = run_script(6, 1, &script).unwrap();
        let b = run_script(6, 1, &script).unwrap();
        prop_assert_eq!(a.digest, b.digest);
        prop_assert_eq!(a.final_n, 4 + 2 * a.events.iter().filter(|e| e.op == "insert").count() - events);
    }
}
