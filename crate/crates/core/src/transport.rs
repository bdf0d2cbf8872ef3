//! Exact discrete optimal transport between finitely supported measures.
//!
//! Masses are carried as integer weights over a common denominator. Two
//! measures are brought to the least common multiple of their denominators,
//! and the resulting integer transportation problem is solved by successive
//! shortest augmenting paths on the bipartite residual network. The returned
//! plan is integral in those scaled units, so optimality does not depend on
//! floating-point pivoting.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::graph::RoadGraph;

/// Tolerance for mass sums given as floats.
pub const MASS_TOLERANCE: f64 = 1e-12;

const MAX_DENOMINATOR: u64 = 1 << 20;

/// A probability measure with rational masses `weights[i] / total`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscreteMeasure {
    support: Vec<usize>,
    weights: Vec<u64>,
    total: u64,
}

impl DiscreteMeasure {
    pub fn uniform(support: Vec<usize>) -> Result<Self> {
        let weights = vec![1; support.len()];
        Self::from_weights(support, weights)
    }

    /// Masses proportional to strictly positive integer weights.
    pub fn from_weights(support: Vec<usize>, weights: Vec<u64>) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::InvalidMeasure("empty support".into()));
        }
        if support.len() != weights.len() {
            return Err(Error::InvalidMeasure(format!(
                "{} support points but {} weights",
                support.len(),
                weights.len()
            )));
        }
        if weights.contains(&0) {
            return Err(Error::InvalidMeasure(
                "masses must be strictly positive".into(),
            ));
        }
        let mut sorted = support.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidMeasure(
                "support points must be distinct".into(),
            ));
        }
        let total = weights
            .iter()
            .try_fold(0u64, |acc, &w| acc.checked_add(w))
            .ok_or_else(|| Error::InvalidMeasure("weight total overflows".into()))?;
        let g = weights.iter().fold(total, |g, &w| gcd(g, w));
        Ok(DiscreteMeasure {
            support,
            weights: weights.iter().map(|w| w / g).collect(),
            total: total / g,
        })
    }

    /// Recovers exact rational masses from floats. Each mass must be within
    /// [`MASS_TOLERANCE`] of a fraction with denominator at most 2^20, and
    /// those fractions must sum to exactly one.
    pub fn from_masses(support: Vec<usize>, masses: &[f64]) -> Result<Self> {
        if masses.iter().any(|m| !m.is_finite() || *m <= 0.0) {
            return Err(Error::InvalidMeasure(
                "masses must be finite and strictly positive".into(),
            ));
        }
        let sum: f64 = masses.iter().sum();
        if (sum - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::InvalidMeasure(format!("masses sum to {sum}, not 1")));
        }
        let fractions: Vec<(u64, u64)> = masses
            .iter()
            .map(|&m| {
                let (p, q) = best_rational(m, MAX_DENOMINATOR);
                if (p as f64 / q as f64 - m).abs() > MASS_TOLERANCE {
                    Err(Error::InvalidMeasure(format!(
                        "mass {m} is not a small-denominator fraction"
                    )))
                } else {
                    Ok((p, q))
                }
            })
            .collect::<Result<_>>()?;
        let denom = fractions
            .iter()
            .try_fold(1u64, |acc, &(_, q)| checked_lcm(acc, q))
            .ok_or_else(|| Error::InvalidMeasure("common denominator overflows".into()))?;
        let weights: Vec<u64> = fractions.iter().map(|&(p, q)| p * (denom / q)).collect();
        if weights.iter().sum::<u64>() != denom {
            return Err(Error::InvalidMeasure(
                "rational masses do not sum to exactly 1".into(),
            ));
        }
        Self::from_weights(support, weights)
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    /// Common denominator of the masses.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn mass(&self, i: usize) -> f64 {
        self.weights[i] as f64 / self.total as f64
    }

    pub fn masses(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.mass(i)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Flow {
    pub from: usize,
    pub to: usize,
    /// Mass in units of `1 / TransportPlan::denominator`.
    pub units: u64,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransportPlan {
    /// Nonzero entries of the coupling, ordered by (supply, demand) position.
    pub flows: Vec<Flow>,
    pub total_cost: f64,
    pub denominator: u64,
}

/// Minimum-cost coupling of `mu` onto `nu` under `cost`.
///
/// `cost` is evaluated once for every support pair and must be finite and
/// non-negative; a non-finite value is reported as an unreachable pair.
pub fn wasserstein<F>(mu: &DiscreteMeasure, nu: &DiscreteMeasure, cost: F) -> Result<TransportPlan>
where
    F: Fn(usize, usize) -> f64,
{
    let mut costs = Vec::with_capacity(mu.len());
    for &x in mu.support() {
        let mut row = Vec::with_capacity(nu.len());
        for &y in nu.support() {
            let c = cost(x, y);
            if !c.is_finite() {
                return Err(Error::Unreachable { from: x, to: y });
            }
            if c < 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "negative cost {c} for ({x}, {y})"
                )));
            }
            row.push(c);
        }
        costs.push(row);
    }

    let denominator = checked_lcm(mu.total(), nu.total())
        .ok_or_else(|| Error::InvalidMeasure("common denominator overflows".into()))?;
    let supply: Vec<u64> = mu
        .weights()
        .iter()
        .map(|w| w * (denominator / mu.total()))
        .collect();
    let demand: Vec<u64> = nu
        .weights()
        .iter()
        .map(|w| w * (denominator / nu.total()))
        .collect();

    let units = solve_transportation(&supply, &demand, &costs);

    let mut flows = Vec::new();
    let mut scaled_cost = 0.0;
    for (i, row) in units.iter().enumerate() {
        for (j, &f) in row.iter().enumerate() {
            if f > 0 {
                scaled_cost += f as f64 * costs[i][j];
                flows.push(Flow {
                    from: mu.support()[i],
                    to: nu.support()[j],
                    units: f,
                    mass: f as f64 / denominator as f64,
                });
            }
        }
    }
    Ok(TransportPlan {
        flows,
        total_cost: scaled_cost / denominator as f64,
        denominator,
    })
}

/// Integer transportation problem with balanced `supply` and `demand`.
/// Returns the flow matrix of a minimum-cost plan.
///
/// Successive shortest paths from a super source to a super sink, with
/// Dijkstra on reduced costs. Costs are non-negative, so zero potentials are
/// valid at the start.
fn solve_transportation(supply: &[u64], demand: &[u64], cost: &[Vec<f64>]) -> Vec<Vec<u64>> {
    let (m, n) = (supply.len(), demand.len());
    debug_assert_eq!(supply.iter().sum::<u64>(), demand.iter().sum::<u64>());

    // Node labels: supplies 0..m, demands m..m+n, then source and sink.
    let (source, sink) = (m + n, m + n + 1);
    let nodes = m + n + 2;
    const NONE: usize = usize::MAX;

    let mut flow = vec![vec![0u64; n]; m];
    let mut rem_supply = supply.to_vec();
    let mut rem_demand = demand.to_vec();
    let mut potential = vec![0.0f64; nodes];
    let mut dist = vec![f64::INFINITY; nodes];
    let mut pred = vec![NONE; nodes];
    let mut done = vec![false; nodes];

    while rem_supply.iter().any(|&s| s > 0) {
        dist.fill(f64::INFINITY);
        pred.fill(NONE);
        done.fill(false);
        dist[source] = 0.0;

        while let Some(u) = (0..nodes)
            .filter(|&v| !done[v] && dist[v].is_finite())
            .min_by(|&a, &b| dist[a].total_cmp(&dist[b]))
        {
            done[u] = true;
            if u == sink {
                break;
            }
            let pu = potential[u];
            let mut relax = |v: usize, c: f64| {
                let d = dist[u] + (c + pu - potential[v]).max(0.0);
                if d < dist[v] {
                    dist[v] = d;
                    pred[v] = u;
                }
            };
            if u == source {
                for i in (0..m).filter(|&i| rem_supply[i] > 0) {
                    relax(i, 0.0);
                }
            } else if u < m {
                if rem_supply[u] < supply[u] {
                    relax(source, 0.0);
                }
                for (j, &c) in cost[u].iter().enumerate() {
                    relax(m + j, c);
                }
            } else if u < m + n {
                let j = u - m;
                for i in (0..m).filter(|&i| flow[i][j] > 0) {
                    relax(i, -cost[i][j]);
                }
                if rem_demand[j] > 0 {
                    relax(sink, 0.0);
                }
            }
        }
        debug_assert!(
            dist[sink].is_finite(),
            "balanced problem has an augmenting path"
        );

        let cap = dist[sink];
        for v in 0..nodes {
            potential[v] += dist[v].min(cap);
        }

        // Bottleneck over the arcs with finite residual capacity.
        let mut bottleneck = u64::MAX;
        let mut v = sink;
        while v != source {
            let u = pred[v];
            if u == source {
                bottleneck = bottleneck.min(rem_supply[v]);
            } else if v == sink {
                bottleneck = bottleneck.min(rem_demand[u - m]);
            } else if v < m {
                bottleneck = bottleneck.min(flow[v][u - m]);
            }
            v = u;
        }
        debug_assert!(bottleneck > 0 && bottleneck < u64::MAX);

        let mut v = sink;
        while v != source {
            let u = pred[v];
            if u == source {
                rem_supply[v] -= bottleneck;
            } else if v == sink {
                rem_demand[u - m] -= bottleneck;
            } else if v < m {
                flow[v][u - m] -= bottleneck;
            } else {
                flow[u][v - m] += bottleneck;
            }
            v = u;
        }
    }
    flow
}

/// Memoized hop distances from a fixed set of source nodes.
///
/// Lookups use the table of `from` when it is a source, otherwise the table
/// of `to`; `None` means the pair is unreachable (or beyond the search
/// radius, for a bounded evaluator) or neither endpoint is a source.
#[derive(Debug, Clone)]
pub struct HopCost {
    tables: Vec<(usize, HopTable)>,
}

#[derive(Debug, Clone)]
enum HopTable {
    Full(Vec<u32>),
    Ball(HashMap<usize, u32>),
}

impl HopTable {
    fn get(&self, node: usize) -> Option<u32> {
        match self {
            HopTable::Full(d) => d.get(node).copied().filter(|&d| d != u32::MAX),
            HopTable::Ball(d) => d.get(&node).copied(),
        }
    }
}

/// One full BFS per source.
pub fn hop_cost(g: &RoadGraph, sources: &[usize]) -> HopCost {
    let mut tables: Vec<(usize, HopTable)> = sources
        .iter()
        .map(|&s| (s, HopTable::Full(crate::graph::bfs_hops(g, s))))
        .collect();
    tables.sort_unstable_by_key(|t| t.0);
    tables.dedup_by_key(|t| t.0);
    HopCost { tables }
}

impl HopCost {
    /// BFS from each source truncated at `radius` hops. Distances up to the
    /// radius are exact.
    pub fn within_radius(g: &RoadGraph, sources: &[usize], radius: u32) -> HopCost {
        let mut tables: Vec<(usize, HopTable)> = sources
            .iter()
            .map(|&s| {
                let mut ball = HashMap::new();
                let mut queue = VecDeque::new();
                ball.insert(s, 0u32);
                queue.push_back(s);
                while let Some(x) = queue.pop_front() {
                    let d = ball[&x];
                    if d == radius {
                        continue;
                    }
                    for &y in g.neighbors(x) {
                        ball.entry(y).or_insert_with(|| {
                            queue.push_back(y);
                            d + 1
                        });
                    }
                }
                (s, HopTable::Ball(ball))
            })
            .collect();
        tables.sort_unstable_by_key(|t| t.0);
        tables.dedup_by_key(|t| t.0);
        HopCost { tables }
    }

    fn table(&self, source: usize) -> Option<&HopTable> {
        self.tables
            .binary_search_by_key(&source, |t| t.0)
            .ok()
            .map(|k| &self.tables[k].1)
    }

    pub fn distance(&self, from: usize, to: usize) -> Option<u32> {
        match self.table(from) {
            Some(t) => t.get(to),
            None => self.table(to)?.get(from),
        }
    }

    /// Distance as a transport cost; unreachable pairs cost infinity.
    pub fn cost(&self, from: usize, to: usize) -> f64 {
        self.distance(from, to).map_or(f64::INFINITY, f64::from)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn checked_lcm(a: u64, b: u64) -> Option<u64> {
    (a / gcd(a, b)).checked_mul(b)
}

/// Closest fraction `p / q` to `x` in [0, 1] with `q <= max_den`, by
/// walking the continued-fraction convergents.
fn best_rational(x: f64, max_den: u64) -> (u64, u64) {
    let (mut p0, mut q0, mut p1, mut q1) = (0u64, 1u64, 1u64, 0u64);
    let mut r = x;
    loop {
        let a = r.floor();
        if a > u32::MAX as f64 {
            break;
        }
        let a = a as u64;
        let (p2, q2) = (a * p1 + p0, a * q1 + q0);
        if q2 > max_den {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = r - a as f64;
        if frac < 1e-15 || (p1 as f64 / q1 as f64 - x).abs() < 1e-15 {
            break;
        }
        r = 1.0 / frac;
    }
    if q1 == 0 {
        (p0, q0)
    } else {
        (p1, q1)
    }
}
