//! Synthetic road networks standing in for the two city archetypes:
//! grid-like (centrifugal) layouts and layouts whose districts are tied
//! together by trunk roads (centripetal).
//!
//! Node ids are zero-padded integers so that lexicographic and numeric
//! order agree.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{GraphBuilder, RoadGraph};

/// Satellite districts around the core in `grid-radial`.
pub const RADIAL_SATELLITES: usize = 6;
/// Districts attached to the hub in `grid-star`.
pub const STAR_DISTRICTS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BenchmarkKind {
    /// `size x size` lattice.
    Grid,
    /// Core lattice with satellite lattices, joined by spokes to the core
    /// and a ring road between neighboring satellites.
    GridRadial,
    /// Lattice districts joined only through a central star hub.
    GridStar,
    /// Random recursive tree on `size` nodes.
    Tree,
}

impl BenchmarkKind {
    pub fn label(self) -> &'static str {
        match self {
            BenchmarkKind::Grid => "grid",
            BenchmarkKind::GridRadial => "grid-radial",
            BenchmarkKind::GridStar => "grid-star",
            BenchmarkKind::Tree => "tree",
        }
    }
}

impl fmt::Display for BenchmarkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for BenchmarkKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "grid" => Ok(BenchmarkKind::Grid),
            "grid-radial" => Ok(BenchmarkKind::GridRadial),
            "grid-star" => Ok(BenchmarkKind::GridStar),
            "tree" => Ok(BenchmarkKind::Tree),
            other => Err(Error::InvalidArgument(format!(
                "unknown benchmark kind {other:?}"
            ))),
        }
    }
}

/// A generated network plus the edges that play the role of trunk roads
/// (as node-id pairs, smaller id first).
#[derive(Debug, Clone)]
pub struct Benchmark {
    pub graph: RoadGraph,
    pub trunk_edges: Vec<(String, String)>,
}

#[derive(Default)]
struct Layout {
    coords: Vec<(f64, f64)>,
    edges: Vec<(usize, usize)>,
    trunks: Vec<(usize, usize)>,
}

impl Layout {
    fn node(&mut self, x: f64, y: f64) -> usize {
        self.coords.push((x, y));
        self.coords.len() - 1
    }

    /// Adds a `size x size` lattice centered at `(cx, cy)`; returns its nodes.
    fn lattice(&mut self, size: usize, cx: f64, cy: f64) -> Vec<usize> {
        let half = (size as f64 - 1.0) / 2.0;
        let first = self.coords.len();
        for r in 0..size {
            for c in 0..size {
                self.node(cx + c as f64 - half, cy + r as f64 - half);
            }
        }
        for r in 0..size {
            for c in 0..size {
                let here = first + r * size + c;
                if c + 1 < size {
                    self.edges.push((here, here + 1));
                }
                if r + 1 < size {
                    self.edges.push((here, here + size));
                }
            }
        }
        (first..first + size * size).collect()
    }

    /// Node of `district` closest to `(x, y)`; ties go to the lowest index.
    fn nearest(&self, district: &[usize], (x, y): (f64, f64)) -> usize {
        let d2 = |n: usize| {
            let (a, b) = self.coords[n];
            (a - x).powi(2) + (b - y).powi(2)
        };
        district
            .iter()
            .copied()
            .fold(None, |best: Option<usize>, n| match best {
                Some(b) if d2(b) <= d2(n) => Some(b),
                _ => Some(n),
            })
            .expect("district is not empty")
    }

    fn trunk(&mut self, a: usize, b: usize) {
        self.edges.push((a, b));
        self.trunks.push((a.min(b), a.max(b)));
    }

    fn finish(self) -> Result<Benchmark> {
        let width = (self.coords.len().max(2) - 1).to_string().len();
        let id = |n: usize| format!("{n:0width$}");
        let mut b = GraphBuilder::new();
        for (n, &(x, y)) in self.coords.iter().enumerate() {
            b.add_node(id(n), Some((x, y)))?;
        }
        for &(u, v) in &self.edges {
            b.add_edge(id(u), id(v))?;
        }
        let (graph, _) = b.build()?;
        let trunk_edges = self.trunks.iter().map(|&(u, v)| (id(u), id(v))).collect();
        Ok(Benchmark { graph, trunk_edges })
    }
}

fn on_circle(radius: f64, k: usize, of: usize) -> (f64, f64) {
    let angle = std::f64::consts::TAU * k as f64 / of as f64;
    (radius * angle.cos(), radius * angle.sin())
}

/// Generates a benchmark network. `seed` only affects `tree`.
pub fn generate_benchmark(kind: BenchmarkKind, size: usize, seed: u64) -> Result<Benchmark> {
    if size < 3 {
        return Err(Error::InvalidArgument(format!(
            "benchmark size must be at least 3, got {size}"
        )));
    }
    let mut layout = Layout::default();
    match kind {
        BenchmarkKind::Grid => {
            layout.lattice(size, (size as f64 - 1.0) / 2.0, (size as f64 - 1.0) / 2.0);
        }
        BenchmarkKind::GridRadial => {
            let core = layout.lattice(size, 0.0, 0.0);
            let radius = 2.0 * size as f64;
            let centers: Vec<(f64, f64)> = (0..RADIAL_SATELLITES)
                .map(|k| on_circle(radius, k, RADIAL_SATELLITES))
                .collect();
            let satellites: Vec<Vec<usize>> = centers
                .iter()
                .map(|&(x, y)| layout.lattice(size, x, y))
                .collect();
            for (k, sat) in satellites.iter().enumerate() {
                let a = layout.nearest(&core, centers[k]);
                let b = layout.nearest(sat, (0.0, 0.0));
                layout.trunk(a, b);
            }
            for k in 0..RADIAL_SATELLITES {
                let next = (k + 1) % RADIAL_SATELLITES;
                let a = layout.nearest(&satellites[k], centers[next]);
                let b = layout.nearest(&satellites[next], centers[k]);
                layout.trunk(a, b);
            }
        }
        BenchmarkKind::GridStar => {
            let hub = layout.node(0.0, 0.0);
            let radius = 1.5 * size as f64;
            for k in 0..STAR_DISTRICTS {
                let center = on_circle(radius, k, STAR_DISTRICTS);
                let district = layout.lattice(size, center.0, center.1);
                let gate = layout.nearest(&district, (0.0, 0.0));
                layout.trunk(hub, gate);
            }
        }
        BenchmarkKind::Tree => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut depth = vec![0usize; size];
            layout.node(0.0, 0.0);
            for n in 1..size {
                let parent = rng.random_range(0..n);
                depth[n] = depth[parent] + 1;
                layout.node(n as f64, depth[n] as f64);
                layout.edges.push((parent, n));
            }
        }
    }
    layout.finish()
}
