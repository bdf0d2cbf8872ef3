mod common;

use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use roadricci::{curvature_table, edge_curvature, Edge, RoadGraph};
use roadricci_testkit::{adjacency, curvature_by_vertex_enumeration, random_connected_graph};

fn kappa(g: &RoadGraph, a: usize, b: usize) -> f64 {
    let e = g.edge_by_ids(&id(a), &id(b)).unwrap();
    edge_curvature(g, e).unwrap().kappa
}

#[test]
fn complete_graphs() {
    for n in 3..=7 {
        let g = road_graph(&complete(n));
        let want = (n as f64 - 2.0) / (n as f64 - 1.0);
        let t = curvature_table(&g).unwrap();
        assert!(
            t.scores().iter().all(|k| (k - want).abs() < 1e-9),
            "K{n}: {:?}",
            t.scores()
        );
    }
}

#[test]
fn cycles() {
    for n in 4..=10 {
        let t = curvature_table(&road_graph(&cycle(n))).unwrap();
        assert!(t.scores().iter().all(|k| k.abs() < 1e-9), "C{n}");
    }
    let t = curvature_table(&road_graph(&cycle(3))).unwrap();
    assert!(t.scores().iter().all(|k| (k - 0.5).abs() < 1e-9));
}

#[test]
fn interior_lattice_edges_are_flat() {
    let g = road_graph(&lattice(7, 7));
    let interior = |i: usize| {
        let (r, c) = (i / 7, i % 7);
        (1..6).contains(&r) && (1..6).contains(&c)
    };
    for &(a, b) in &lattice(7, 7) {
        if interior(a) && interior(b) {
            assert!(kappa(&g, a, b).abs() < 1e-9, "{a}-{b}");
        }
    }
}

#[test]
fn tree_bridge() {
    let g = road_graph(&[(0, 1), (0, 2), (0, 3), (1, 4), (1, 5)]);
    assert!((kappa(&g, 0, 1) + 2.0 / 3.0).abs() < 1e-9);
}

#[test]
fn agrees_with_vertex_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..30 {
        let n = 4 + (rand::Rng::random_range(&mut rng, 0..6));
        let edges = random_connected_graph(&mut rng, n, 5);
        let g = road_graph(&edges);
        let adj = adjacency(n, &edges);
        for &(a, b) in &edges {
            let want = curvature_by_vertex_enumeration(&adj, a, b);
            assert!((kappa(&g, a, b) - want).abs() < 1e-9);
        }
    }
}

#[test]
fn automorphic_edges_agree() {
    for edges in [star(6), lattice(4, 1), cycle(7), complete(5)] {
        let t = curvature_table(&road_graph(&edges)).unwrap();
        let first = t.scores()[0];
        assert!(t.scores().iter().all(|k| (k - first).abs() < 1e-9));
    }
    // Mirror symmetry of a 5x4 lattice.
    let g = road_graph(&lattice(5, 4));
    for &(a, b) in &lattice(5, 4) {
        let mirror = |i: usize| (i / 5) * 5 + (4 - i % 5);
        assert!((kappa(&g, a, b) - kappa(&g, mirror(a), mirror(b))).abs() < 1e-9);
    }
}

#[test]
fn rejects_non_edges() {
    let g = road_graph(&[(0, 1), (1, 2)]);
    assert!(edge_curvature(&g, Edge::new(0, 2)).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bounded_and_relabeling_invariant(seed in any::<u64>(), n in 3usize..=14, shift in 1usize..50) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let edges = random_connected_graph(&mut rng, n, 6);
        let g = road_graph(&edges);
        let t = curvature_table(&g).unwrap();
        for &k in t.scores() {
            prop_assert!((-2.0 - 1e-12..=1.0 + 1e-12).contains(&k));
        }
        // Relabel so that lexicographic order no longer matches the original.
        let relabel = |i: usize| format!("r{:03}", (i * 7 + shift) % 1000);
        let h = RoadGraph::from_edges(edges.iter().map(|&(a, b)| (relabel(a), relabel(b)))).unwrap();
        let th = curvature_table(&h).unwrap();
        for &(a, b) in &edges {
            let e = g.edge_by_ids(&id(a), &id(b)).unwrap();
            let f = h.edge_by_ids(&relabel(a), &relabel(b)).unwrap();
            prop_assert!((t.get(e).unwrap() - th.get(f).unwrap()).abs() < 1e-12);
        }
        prop_assert_eq!(&t, &curvature_table(&g).unwrap());
    }
}
