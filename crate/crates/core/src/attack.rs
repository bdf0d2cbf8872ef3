//! Edge-removal attacks and topology vulnerability ratio (TVR) curves.
//!
//! TVR after an attack is the node count of the largest connected component
//! divided by the node count of the intact graph. A schedule fixes the full
//! removal order up front; at removal fraction `f` the first `floor(f |E|)`
//! edges of the order are gone. Curves are evaluated by replaying the order
//! backwards with union-find, so each trial costs one pass over the edges.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{DisjointSets, RoadGraph};
use crate::scores::{EdgeScoreTable, ScoreKind};

pub const DEFAULT_GRID_STEP: f64 = 0.01;
pub const DEFAULT_TRIALS: usize = 10;

// Absorbs representation error in f * |E| (0.29 * 100 = 28.999...).
const COUNT_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Random,
    /// Ascending curvature, most negative first.
    Curvature,
    /// Descending betweenness.
    Betweenness,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::Random, Strategy::Curvature, Strategy::Betweenness];

    pub fn label(self) -> &'static str {
        match self {
            Strategy::Random => "random",
            Strategy::Curvature => "curvature",
            Strategy::Betweenness => "betweenness",
        }
    }

    fn score_kind(self) -> Option<ScoreKind> {
        match self {
            Strategy::Random => None,
            Strategy::Curvature => Some(ScoreKind::Curvature),
            Strategy::Betweenness => Some(ScoreKind::Betweenness),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(Strategy::Random),
            "curvature" | "curvature-ascending" => Ok(Strategy::Curvature),
            "betweenness" | "betweenness-descending" => Ok(Strategy::Betweenness),
            other => Err(Error::InvalidArgument(format!(
                "unknown strategy {other:?}"
            ))),
        }
    }
}

/// A complete edge-removal order; `order` holds edge indices of the graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttackSchedule {
    pub strategy: Strategy,
    pub order: Vec<usize>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TvrSample {
    pub fraction_removed: f64,
    pub tvr_mean: f64,
    pub tvr_std: f64,
    pub trials: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TvrCurve {
    pub strategy: Strategy,
    pub samples: Vec<TvrSample>,
}

impl TvrCurve {
    /// Sample at `fraction`, if it is one of the curve's points.
    pub fn at(&self, fraction: f64) -> Option<&TvrSample> {
        self.samples
            .iter()
            .find(|s| (s.fraction_removed - fraction).abs() < 1e-12)
    }
}

/// Uniformly spaced removal fractions from 0 through 1 inclusive.
pub fn sample_grid(step: f64) -> Result<Vec<f64>> {
    if !(step.is_finite() && step > 0.0 && step <= 1.0) {
        return Err(Error::InvalidSamples(format!(
            "grid step {step} must lie in (0, 1]"
        )));
    }
    let steps = (1.0 / step).round();
    if (steps * step - 1.0).abs() < 1e-9 {
        let steps = steps as usize;
        return Ok((0..=steps).map(|i| i as f64 / steps as f64).collect());
    }
    let mut points: Vec<f64> = (0..)
        .map(|i| i as f64 * step)
        .take_while(|&f| f < 1.0 - 1e-12)
        .collect();
    points.push(1.0);
    Ok(points)
}

pub fn build_schedule(
    g: &RoadGraph,
    scores: Option<&EdgeScoreTable>,
    strategy: Strategy,
    seed: u64,
) -> Result<AttackSchedule> {
    let label = strategy.label();
    match (strategy.score_kind(), scores) {
        (None, None) => {
            let mut order: Vec<usize> = (0..g.edge_count()).collect();
            order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            Ok(AttackSchedule {
                strategy,
                order,
                seed: Some(seed),
            })
        }
        (None, Some(_)) => Err(Error::Schedule {
            strategy: label,
            problem: "does not take a score table",
        }),
        (Some(_), None) => Err(Error::Schedule {
            strategy: label,
            problem: "needs a score table",
        }),
        (Some(kind), Some(table)) => {
            if table.kind() != kind {
                return Err(Error::Schedule {
                    strategy: label,
                    problem: "was given a score table of the wrong kind",
                });
            }
            if !table.covers(g) {
                return Err(Error::ScoreTableMismatch);
            }
            let s = table.scores();
            let mut order: Vec<usize> = (0..g.edge_count()).collect();
            // Edge indices follow canonical (u, v) order, so a stable sort
            // leaves ties in lexicographic edge order.
            match strategy {
                Strategy::Curvature => order.sort_by(|&a, &b| s[a].total_cmp(&s[b])),
                _ => order.sort_by(|&a, &b| s[b].total_cmp(&s[a])),
            }
            Ok(AttackSchedule {
                strategy,
                order,
                seed: None,
            })
        }
    }
}

fn validate_samples(points: &[f64]) -> Result<()> {
    match points.first() {
        Some(&0.0) => {}
        _ => return Err(Error::InvalidSamples("must start at 0".into())),
    }
    if points.iter().any(|f| !(0.0..=1.0).contains(f)) {
        return Err(Error::InvalidSamples("fractions must lie in [0, 1]".into()));
    }
    if points.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidSamples(
            "fractions must be strictly increasing".into(),
        ));
    }
    Ok(())
}

fn removal_count(fraction: f64, edges: usize) -> usize {
    ((fraction * edges as f64 + COUNT_SLACK).floor() as usize).min(edges)
}

/// TVR after removing the prefix of `order` at each sample fraction.
fn tvr_trajectory(g: &RoadGraph, order: &[usize], points: &[f64]) -> Vec<f64> {
    let n = g.node_count() as f64;
    lcc_trajectory(g, order, points)
        .into_iter()
        .map(|l| l as f64 / n)
        .collect()
}

/// Largest-component size after removing the prefix of `order` at each
/// sample fraction.
fn lcc_trajectory(g: &RoadGraph, order: &[usize], points: &[f64]) -> Vec<usize> {
    let m = order.len();
    let counts: Vec<usize> = points.iter().map(|&f| removal_count(f, m)).collect();

    // lcc_after[k] = LCC once the first k edges are removed; fill from k = m
    // (nothing left) down to 0 by restoring edges in reverse order.
    let mut lcc_after = vec![0usize; m + 1];
    let mut sets = DisjointSets::new(g.node_count());
    lcc_after[m] = sets.largest();
    for k in (0..m).rev() {
        let e = g.edges()[order[k]];
        sets.union(e.u, e.v);
        lcc_after[k] = sets.largest();
    }
    counts.iter().map(|&k| lcc_after[k]).collect()
}

fn validate_order(g: &RoadGraph, schedule: &AttackSchedule) -> Result<()> {
    let mut seen = vec![false; g.edge_count()];
    if schedule.order.len() != g.edge_count() {
        return Err(Error::ScoreTableMismatch);
    }
    for &k in &schedule.order {
        if k >= seen.len() || std::mem::replace(&mut seen[k], true) {
            return Err(Error::InvalidArgument(
                "schedule is not a permutation of the edges".into(),
            ));
        }
    }
    Ok(())
}

/// Single-trial curve for a fixed schedule.
pub fn run_attack(
    g: &RoadGraph,
    schedule: &AttackSchedule,
    sample_points: &[f64],
) -> Result<TvrCurve> {
    validate_samples(sample_points)?;
    validate_order(g, schedule)?;
    let tvr = tvr_trajectory(g, &schedule.order, sample_points);
    Ok(TvrCurve {
        strategy: schedule.strategy,
        samples: sample_points
            .iter()
            .zip(tvr)
            .map(|(&f, t)| TvrSample {
                fraction_removed: f,
                tvr_mean: t,
                tvr_std: 0.0,
                trials: 1,
            })
            .collect(),
    })
}

/// Mean and sample standard deviation over `trials` seeded shuffles using
/// seeds `seed, seed + 1, ...`.
pub fn run_random_attack(
    g: &RoadGraph,
    trials: usize,
    seed: u64,
    sample_points: &[f64],
) -> Result<TvrCurve> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    validate_samples(sample_points)?;
    let runs: Vec<Vec<usize>> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let schedule = build_schedule(g, None, Strategy::Random, seed.wrapping_add(t))
                .expect("random schedules need no scores");
            lcc_trajectory(g, &schedule.order, sample_points)
        })
        .collect();

    let samples = sample_points
        .iter()
        .enumerate()
        .map(|(i, &f)| {
            let sizes: Vec<usize> = runs.iter().map(|r| r[i]).collect();
            let (mean, std) = mean_and_std(&sizes, g.node_count());
            TvrSample {
                fraction_removed: f,
                tvr_mean: mean,
                tvr_std: std,
                trials,
            }
        })
        .collect();
    Ok(TvrCurve {
        strategy: Strategy::Random,
        samples,
    })
}

/// Mean and sample standard deviation of `sizes / nodes`. Sums are taken
/// over the integer sizes so each statistic is rounded only once.
fn mean_and_std(sizes: &[usize], nodes: usize) -> (f64, f64) {
    let t = sizes.len() as u128;
    let sum: u128 = sizes.iter().map(|&s| s as u128).sum();
    let mean = sum as f64 / (t as f64 * nodes as f64);
    if t < 2 {
        return (mean, 0.0);
    }
    let squares: u128 = sizes.iter().map(|&s| (s as u128).pow(2)).sum();
    // t * sum of squared deviations, exact.
    let spread = t * squares - sum * sum;
    let std = (spread as f64 / (t * (t - 1)) as f64).sqrt() / nodes as f64;
    (mean, std)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_triangles() -> RoadGraph {
        RoadGraph::from_edges([
            ("a", "b"),
            ("b", "c"),
            ("c", "a"),
            ("x", "y"),
            ("y", "z"),
            ("z", "x"),
            ("c", "x"),
        ])
        .unwrap()
    }

    #[test]
    fn grid_includes_both_ends() {
        let g = sample_grid(0.01).unwrap();
        assert_eq!(g.len(), 101);
        assert_eq!((g[0], g[29], g[100]), (0.0, 0.29, 1.0));
        let odd = sample_grid(0.3).unwrap();
        assert_eq!(odd.len(), 5);
        assert_eq!(*odd.last().unwrap(), 1.0);
        assert!(sample_grid(0.0).is_err());
    }

    #[test]
    fn removal_count_floors_without_drift() {
        assert_eq!(removal_count(0.29, 100), 29);
        assert_eq!(removal_count(1.0 / 7.0, 7), 1);
        assert_eq!(removal_count(0.0, 7), 0);
        assert_eq!(removal_count(1.0, 7), 7);
        assert_eq!(removal_count(0.5, 7), 3);
    }

    #[test]
    fn curvature_order_breaks_ties_lexicographically() {
        let g = RoadGraph::from_edges([("a", "b"), ("b", "c"), ("c", "d")]).unwrap();
        // e1 = (a,b), e2 = (b,c), e3 = (c,d)
        let t = EdgeScoreTable::for_graph(ScoreKind::Curvature, &g, vec![-0.5, 0.2, -0.5]).unwrap();
        let s = build_schedule(&g, Some(&t), Strategy::Curvature, 0).unwrap();
        assert_eq!(s.order, vec![0, 2, 1]);
    }

    #[test]
    fn betweenness_order_is_descending() {
        let g = RoadGraph::from_edges([("a", "b"), ("b", "c")]).unwrap();
        let t = EdgeScoreTable::for_graph(ScoreKind::Betweenness, &g, vec![1.5, 9.0]).unwrap();
        let s = build_schedule(&g, Some(&t), Strategy::Betweenness, 0).unwrap();
        assert_eq!(s.order, vec![1, 0]);
    }

    #[test]
    fn random_schedule_is_seeded() {
        let g = two_triangles();
        let a = build_schedule(&g, None, Strategy::Random, 7).unwrap();
        let b = build_schedule(&g, None, Strategy::Random, 7).unwrap();
        assert_eq!(a, b);
        let mut sorted = a.order.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..7).collect::<Vec<_>>());
    }

    #[test]
    fn schedule_errors() {
        let g = two_triangles();
        assert!(build_schedule(&g, None, Strategy::Curvature, 0).is_err());
        let other = RoadGraph::from_edges([("a", "b")]).unwrap();
        let t = EdgeScoreTable::for_graph(ScoreKind::Curvature, &other, vec![0.0]).unwrap();
        assert!(matches!(
            build_schedule(&g, Some(&t), Strategy::Curvature, 0),
            Err(Error::ScoreTableMismatch)
        ));
        assert!(build_schedule(&other, Some(&t), Strategy::Random, 0).is_err());
        assert!(build_schedule(&other, Some(&t), Strategy::Betweenness, 0).is_err());
    }

    #[test]
    fn bridge_first_halves_the_network() {
        let g = two_triangles();
        let bridge = g.edge_index(g.edge_by_ids("c", "x").unwrap()).unwrap();
        let mut order = vec![bridge];
        order.extend((0..7).filter(|&k| k != bridge));
        let schedule = AttackSchedule {
            strategy: Strategy::Curvature,
            order,
            seed: None,
        };
        let curve = run_attack(&g, &schedule, &[0.0, 1.0 / 7.0, 1.0]).unwrap();
        let tvr: Vec<f64> = curve.samples.iter().map(|s| s.tvr_mean).collect();
        assert_eq!(tvr, vec![1.0, 0.5, 1.0 / 6.0]);
    }

    #[test]
    fn lcc_counts_isolated_nodes_of_the_original_graph() {
        // 10-cycle cut into pieces of 4, 3, 2 and 1 nodes.
        let g =
            RoadGraph::from_edges((0..10).map(|i| (format!("{i}"), format!("{}", (i + 1) % 10))))
                .unwrap();
        let cut: Vec<usize> = [(3, 4), (6, 7), (8, 9), (0, 9)]
            .iter()
            .map(|&(a, b)| {
                g.edge_index(g.edge_by_ids(&a.to_string(), &b.to_string()).unwrap())
                    .unwrap()
            })
            .collect();
        let mut order = cut.clone();
        order.extend((0..10).filter(|k| !cut.contains(k)));
        let schedule = AttackSchedule {
            strategy: Strategy::Random,
            order,
            seed: None,
        };
        let curve = run_attack(&g, &schedule, &[0.0, 0.4]).unwrap();
        assert_eq!(curve.samples[1].tvr_mean, 0.4);
    }

    #[test]
    fn invalid_samples() {
        let g = two_triangles();
        let s = build_schedule(&g, None, Strategy::Random, 1).unwrap();
        assert!(run_attack(&g, &s, &[0.1, 0.2]).is_err());
        assert!(run_attack(&g, &s, &[0.0, 0.5, 0.5]).is_err());
        assert!(run_attack(&g, &s, &[0.0, 1.5]).is_err());
        assert!(run_random_attack(&g, 0, 1, &[0.0]).is_err());
    }

    #[test]
    fn single_random_trial_matches_run_attack() {
        let g = two_triangles();
        let pts = sample_grid(0.1).unwrap();
        let single = run_random_attack(&g, 1, 99, &pts).unwrap();
        let schedule = build_schedule(&g, None, Strategy::Random, 99).unwrap();
        let direct = run_attack(&g, &schedule, &pts).unwrap();
        assert_eq!(single, direct);
    }

    #[test]
    fn k5_survives_two_removals() {
        let ids = ["1", "2", "3", "4", "5"];
        let mut edges = Vec::new();
        for i in 0..5 {
            for j in i + 1..5 {
                edges.push((ids[i], ids[j]));
            }
        }
        let g = RoadGraph::from_edges(edges).unwrap();
        let curve = run_random_attack(&g, 25, 3, &[0.0, 0.2]).unwrap();
        assert_eq!(curve.samples[0].tvr_mean, 1.0);
        assert_eq!(curve.samples[0].tvr_std, 0.0);
        assert_eq!(curve.samples[1].tvr_mean, 1.0);
    }
}
