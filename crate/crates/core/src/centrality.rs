//! Exact shortest-path edge betweenness.
//!
//! One BFS per source counts shortest paths, then dependencies are pushed
//! back from the farthest nodes, crediting each edge with its share of the
//! paths through it. Summing over all sources counts every unordered pair
//! twice, so totals are halved.

use std::collections::VecDeque;
use std::ops::{Add, Div, Mul};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::graph::RoadGraph;
use crate::scores::{EdgeScoreTable, ScoreKind};

/// Sources handled per parallel task; per-chunk sums are combined in chunk
/// order so the floating-point result does not depend on scheduling.
const SOURCE_CHUNK: usize = 32;

/// Arithmetic needed for dependency accumulation.
trait Credit:
    Clone + Zero + One + Add<Output = Self> + Mul<Output = Self> + Div<Output = Self>
{
}

impl Credit for f64 {}
impl Credit for BigRational {}

/// Per-source dependency pass, adding edge credits into `acc`.
fn accumulate_source<T: Credit>(g: &RoadGraph, source: usize, acc: &mut [T]) {
    let n = g.node_count();
    let mut dist = vec![u32::MAX; n];
    let mut sigma = vec![T::zero(); n];
    let mut delta = vec![T::zero(); n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::new();

    dist[source] = 0;
    sigma[source] = T::one();
    queue.push_back(source);
    while let Some(x) = queue.pop_front() {
        order.push(x);
        for &y in g.neighbors(x) {
            if dist[y] == u32::MAX {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
            if dist[y] == dist[x] + 1 {
                sigma[y] = sigma[y].clone() + sigma[x].clone();
            }
        }
    }

    for &w in order.iter().rev() {
        if dist[w] == 0 {
            continue;
        }
        let carried = T::one() + delta[w].clone();
        for (v, edge) in g.incident(w) {
            if dist[v] != u32::MAX && dist[v] + 1 == dist[w] {
                let c = sigma[v].clone() / sigma[w].clone() * carried.clone();
                acc[edge] = acc[edge].clone() + c.clone();
                delta[v] = delta[v].clone() + c;
            }
        }
    }
}

/// Unnormalized or normalized edge betweenness of every edge.
///
/// Normalization divides by the number of unordered node pairs,
/// `n (n - 1) / 2`.
pub fn edge_betweenness(g: &RoadGraph, normalized: bool) -> EdgeScoreTable {
    let n = g.node_count();
    let m = g.edge_count();
    let sources: Vec<usize> = (0..n).collect();
    let partials: Vec<Vec<f64>> = sources
        .par_chunks(SOURCE_CHUNK)
        .map(|chunk| {
            let mut acc = vec![0.0; m];
            for &s in chunk {
                accumulate_source(g, s, &mut acc);
            }
            acc
        })
        .collect();
    let mut totals = vec![0.0; m];
    for part in &partials {
        for (t, p) in totals.iter_mut().zip(part) {
            *t += p;
        }
    }
    let scale = if normalized && n >= 2 {
        0.5 / ((n * (n - 1)) as f64 / 2.0)
    } else {
        0.5
    };
    let scores = totals.into_iter().map(|t| t * scale).collect();
    EdgeScoreTable::for_graph(ScoreKind::Betweenness, g, scores)
        .expect("scores are aligned with the graph's edges")
}

/// Unnormalized edge betweenness in exact rational arithmetic.
///
/// Meant for verification on small graphs: shortest-path counts and credits
/// are arbitrary-precision, so pair sums can be compared without rounding.
pub fn edge_betweenness_exact(g: &RoadGraph) -> Vec<BigRational> {
    let mut acc = vec![BigRational::zero(); g.edge_count()];
    for s in 0..g.node_count() {
        accumulate_source(g, s, &mut acc);
    }
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    acc.into_iter().map(|x| x * half.clone()).collect()
}
