mod common;

use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use roadricci::{
    build_schedule, curvature_table, edge_betweenness, generate_benchmark, run_attack,
    run_random_attack, sample_grid, BenchmarkKind, Strategy,
};
use roadricci_testkit::random_connected_graph;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn tvr_is_bounded_and_monotone(seed in any::<u64>(), n in 3usize..=30) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = road_graph(&random_connected_graph(&mut rng, n, 5));
        let grid = sample_grid(0.05).unwrap();
        let kappa = curvature_table(&g).unwrap();
        let bc = edge_betweenness(&g, false);
        let curves = [
            run_attack(&g, &build_schedule(&g, Some(&kappa), Strategy::Curvature, 0).unwrap(), &grid).unwrap(),
            run_attack(&g, &build_schedule(&g, Some(&bc), Strategy::Betweenness, 0).unwrap(), &grid).unwrap(),
            run_attack(&g, &build_schedule(&g, None, Strategy::Random, seed).unwrap(), &grid).unwrap(),
        ];
        for c in &curves {
            prop_assert_eq!(c.samples[0].tvr_mean, 1.0);
            prop_assert!((c.samples.last().unwrap().tvr_mean - 1.0 / n as f64).abs() < 1e-15);
            for w in c.samples.windows(2) {
                prop_assert!(w[1].tvr_mean <= w[0].tvr_mean);
            }
        }
    }

    #[test]
    fn random_mean_lies_within_trial_range(seed in any::<u64>()) {
        let g = road_graph(&lattice(5, 5));
        let grid = sample_grid(0.1).unwrap();
        let curve = run_random_attack(&g, 5, seed, &grid).unwrap();
        let singles: Vec<_> = (0..5)
            .map(|t| run_attack(&g, &build_schedule(&g, None, Strategy::Random, seed.wrapping_add(t)).unwrap(), &grid).unwrap())
            .collect();
        for (k, s) in curve.samples.iter().enumerate() {
            let vals: Vec<f64> = singles.iter().map(|c| c.samples[k].tvr_mean).collect();
            let mean = vals.iter().sum::<f64>() / 5.0;
            prop_assert!((s.tvr_mean - mean).abs() < 1e-12);
            prop_assert!(s.tvr_std >= 0.0);
        }
    }
}

#[test]
fn bridge_removal_halves_two_triangles() {
    let g = road_graph(&[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)]);
    let kappa = curvature_table(&g).unwrap();
    let schedule = build_schedule(&g, Some(&kappa), Strategy::Curvature, 0).unwrap();
    assert_eq!(
        g.edges()[schedule.order[0]],
        g.edge_by_ids(&id(2), &id(3)).unwrap()
    );
    let points = [0.0, 1.0 / 7.0, 1.0];
    let curve = run_attack(&g, &schedule, &points).unwrap();
    assert_eq!(curve.samples[1].tvr_mean, 0.5);
}

#[test]
fn random_attack_is_reproducible() {
    let b = generate_benchmark(BenchmarkKind::GridRadial, 5, 1).unwrap();
    let grid = sample_grid(0.01).unwrap();
    let one = run_random_attack(&b.graph, 6, 42, &grid).unwrap();
    let two = run_random_attack(&b.graph, 6, 42, &grid).unwrap();
    assert_eq!(one, two);
    assert_ne!(one, run_random_attack(&b.graph, 6, 43, &grid).unwrap());
}
