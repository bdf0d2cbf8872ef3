//! Brute-force reference computations for the roadricci test suites.
//!
//! Nothing here calls into the library under test. Graphs are plain
//! adjacency lists over `0..n`.

use std::collections::VecDeque;

use rand::Rng;

pub type Adjacency = Vec<Vec<usize>>;

pub fn adjacency(n: usize, edges: &[(usize, usize)]) -> Adjacency {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    for nbrs in &mut adj {
        nbrs.sort_unstable();
    }
    adj
}

/// Hop distances from `source`; `None` for unreachable nodes.
pub fn bfs(adj: &Adjacency, source: usize) -> Vec<Option<u64>> {
    let mut dist = vec![None; adj.len()];
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(x) = queue.pop_front() {
        let d = dist[x].unwrap();
        for &y in &adj[x] {
            if dist[y].is_none() {
                dist[y] = Some(d + 1);
                queue.push_back(y);
            }
        }
    }
    dist
}

/// Sum of hop distances over unordered, mutually reachable pairs.
pub fn pair_distance_sum(adj: &Adjacency) -> u64 {
    let mut total = 0;
    for s in 0..adj.len() {
        total += bfs(adj, s)
            .iter()
            .enumerate()
            .filter(|&(t, _)| t > s)
            .filter_map(|(_, d)| *d)
            .sum::<u64>();
    }
    total
}

/// Largest component size by explicit labeling.
pub fn largest_component(adj: &Adjacency) -> usize {
    let mut seen = vec![false; adj.len()];
    let mut best = 0;
    for s in 0..adj.len() {
        if seen[s] {
            continue;
        }
        let reach = bfs(adj, s);
        let size = reach.iter().filter(|d| d.is_some()).count();
        for (t, d) in reach.iter().enumerate() {
            if d.is_some() {
                seen[t] = true;
            }
        }
        best = best.max(size);
    }
    best
}

/// Result of enumerating every vertex of an integer transportation polytope.
#[derive(Debug, Clone, Copy)]
pub struct VertexSearch {
    /// Minimum of `sum f_ij c_ij` over vertices, in scaled units.
    pub min_scaled_cost: f64,
    pub vertices: u64,
}

/// Largest support size per side accepted by [`transport_vertices`].
pub const MAX_SUPPORT: usize = 16;

/// Enumerates all vertices of `{F >= 0 integer : row sums = supply, column
/// sums = demand}`. A feasible point is a vertex exactly when its support is
/// acyclic as a bipartite graph, so cells are filled in row-major order and
/// any nonzero entry that would close a cycle is skipped.
pub fn transport_vertices(supply: &[u64], demand: &[u64], cost: &[Vec<f64>]) -> VertexSearch {
    assert_eq!(
        supply.iter().sum::<u64>(),
        demand.iter().sum::<u64>(),
        "unbalanced problem"
    );
    let (m, n) = (supply.len(), demand.len());
    assert!(
        m <= MAX_SUPPORT && n <= MAX_SUPPORT,
        "support too large for enumeration"
    );
    let mut search = Search {
        m,
        n,
        cost,
        rs: supply.to_vec(),
        rd: demand.to_vec(),
        best: f64::INFINITY,
        vertices: 0,
    };
    let mut labels = [0u8; 2 * MAX_SUPPORT];
    for (k, l) in labels.iter_mut().enumerate() {
        *l = k as u8;
    }
    search.visit(0, labels, 0.0);
    VertexSearch {
        min_scaled_cost: search.best,
        vertices: search.vertices,
    }
}

struct Search<'a> {
    m: usize,
    n: usize,
    cost: &'a [Vec<f64>],
    rs: Vec<u64>,
    rd: Vec<u64>,
    best: f64,
    vertices: u64,
}

impl Search<'_> {
    /// `labels` names the support-forest component of each row and column.
    fn visit(&mut self, cell: usize, labels: [u8; 2 * MAX_SUPPORT], acc: f64) {
        if cell == self.m * self.n {
            debug_assert!(self.rs.iter().chain(&self.rd).all(|&r| r == 0));
            self.vertices += 1;
            self.best = self.best.min(acc);
            return;
        }
        let (i, j) = (cell / self.n, cell % self.n);
        let (lo, hi) = if j == self.n - 1 {
            // The last column takes what is left of the row, the last row
            // what is left of the column.
            if self.rs[i] > self.rd[j] || (i == self.m - 1 && self.rs[i] != self.rd[j]) {
                return;
            }
            (self.rs[i], self.rs[i])
        } else if i == self.m - 1 {
            if self.rd[j] > self.rs[i] {
                return;
            }
            (self.rd[j], self.rd[j])
        } else {
            (0, self.rs[i].min(self.rd[j]))
        };
        let (a, b) = (labels[i], labels[self.m + j]);
        for f in lo..=hi {
            let mut next = labels;
            if f > 0 {
                if a == b {
                    break;
                }
                for l in next.iter_mut() {
                    if *l == b {
                        *l = a;
                    }
                }
            }
            self.rs[i] -= f;
            self.rd[j] -= f;
            self.visit(cell + 1, next, acc + f as f64 * self.cost[i][j]);
            self.rs[i] += f;
            self.rd[j] += f;
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Curvature `1 - W` of edge `(u, v)` with uniform neighbor measures and
/// full-graph hop costs, via vertex enumeration.
pub fn curvature_by_vertex_enumeration(adj: &Adjacency, u: usize, v: usize) -> f64 {
    let (nu, nv) = (&adj[u], &adj[v]);
    let (du, dv) = (nu.len() as u64, nv.len() as u64);
    let scale = du / gcd(du, dv) * dv;
    let supply = vec![scale / du; nu.len()];
    let demand = vec![scale / dv; nv.len()];
    let cost: Vec<Vec<f64>> = nu
        .iter()
        .map(|&x| {
            let d = bfs(adj, x);
            nv.iter()
                .map(|&y| d[y].expect("connected") as f64)
                .collect()
        })
        .collect();
    let search = transport_vertices(&supply, &demand, &cost);
    1.0 - search.min_scaled_cost / scale as f64
}

/// Random connected simple graph on `n` nodes with degrees capped at
/// `max_degree`: a random spanning tree plus up to `n` extra edges.
pub fn random_connected_graph<R: Rng>(
    rng: &mut R,
    n: usize,
    max_degree: usize,
) -> Vec<(usize, usize)> {
    assert!(n >= 2 && max_degree >= 2);
    let mut degree = vec![0usize; n];
    let mut edges = Vec::new();
    for i in 1..n {
        let open: Vec<usize> = (0..i).filter(|&j| degree[j] < max_degree).collect();
        let j = open[rng.random_range(0..open.len())];
        edges.push((j, i));
        degree[i] += 1;
        degree[j] += 1;
    }
    let extra = rng.random_range(0..=n);
    for _ in 0..extra {
        let (a, b) = (rng.random_range(0..n), rng.random_range(0..n));
        let (a, b) = (a.min(b), a.max(b));
        if a == b || degree[a] >= max_degree || degree[b] >= max_degree || edges.contains(&(a, b)) {
            continue;
        }
        edges.push((a, b));
        degree[a] += 1;
        degree[b] += 1;
    }
    edges
        .into_iter()
        .map(|(a, b)| (a.min(b), a.max(b)))
        .collect()
}

/// Pearson correlation straight from the definition: covariance over the
/// product of standard deviations, each in its own pass.
pub fn pearson_by_definition(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let cov = x
        .iter()
        .zip(y)
        .map(|(a, b)| (a - mx) * (b - my))
        .sum::<f64>()
        / (n - 1.0);
    let sx = (x.iter().map(|a| (a - mx).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    let sy = (y.iter().map(|b| (b - my).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    cov / (sx * sy)
}
