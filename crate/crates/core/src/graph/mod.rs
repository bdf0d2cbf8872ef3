//! Undirected, unweighted road graphs in L-space form: intersections are
//! nodes and road segments are edges.
//!
//! Node identifiers are opaque strings. Internally every node gets a dense
//! index in lexicographic id order, so comparing indices is the same as
//! comparing ids and every downstream tie-break is deterministic.

mod io;
mod stats;

use std::collections::{BTreeMap, HashMap};

pub use io::{load_graph, read_graph, write_edges_csv, write_nodes_csv, LoadedGraph};
pub(crate) use stats::bfs_hops;
pub use stats::{clustering_coefficient, network_stats, NetworkStats};

use crate::error::{Error, Result};

/// A canonical undirected edge between node indices, `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
}

impl Edge {
    pub fn new(a: usize, b: usize) -> Self {
        if a <= b {
            Edge { u: a, v: b }
        } else {
            Edge { u: b, v: a }
        }
    }
}

/// Warnings collected while building a graph.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize)]
pub struct BuildReport {
    pub duplicate_edges: usize,
    pub isolated_nodes_dropped: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoadGraph {
    ids: Vec<String>,
    index: HashMap<String, usize>,
    coords: Vec<Option<(f64, f64)>>,
    // CSR adjacency; `slot_edge[k]` is the edge index of slot `k`.
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
    slot_edge: Vec<usize>,
    edges: Vec<Edge>,
}

impl RoadGraph {
    /// Builds a graph from an edge list, registering every endpoint as a node.
    pub fn from_edges<I, S>(edges: I) -> Result<RoadGraph>
    where
        I: IntoIterator<Item = (S, S)>,
        S: Into<String>,
    {
        let mut builder = GraphBuilder::new();
        for (a, b) in edges {
            let (a, b) = (a.into(), b.into());
            builder.ensure_node(&a);
            builder.ensure_node(&b);
            builder.add_edge(a, b)?;
        }
        builder.build().map(|(g, _)| g)
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn id(&self, node: usize) -> &str {
        &self.ids[node]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn coord(&self, node: usize) -> Option<(f64, f64)> {
        self.coords[node]
    }

    pub fn has_coords(&self) -> bool {
        self.coords.iter().any(Option::is_some)
    }

    pub fn degree(&self, node: usize) -> usize {
        self.offsets[node + 1] - self.offsets[node]
    }

    /// Sorted neighbor indices of `node`.
    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.neighbors[self.offsets[node]..self.offsets[node + 1]]
    }

    /// Neighbors of `node` paired with the index of the connecting edge.
    pub fn incident(&self, node: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        let range = self.offsets[node]..self.offsets[node + 1];
        self.neighbors[range.clone()]
            .iter()
            .copied()
            .zip(self.slot_edge[range].iter().copied())
    }

    pub fn edge_index(&self, e: Edge) -> Option<usize> {
        self.edges.binary_search(&e).ok()
    }

    /// Looks up an edge by its endpoint ids, in either order.
    pub fn edge_by_ids(&self, a: &str, b: &str) -> Result<Edge> {
        let not_an_edge = || Error::NotAnEdge {
            u: a.to_string(),
            v: b.to_string(),
        };
        let (ia, ib) = match (self.node_index(a), self.node_index(b)) {
            (Some(ia), Some(ib)) => (ia, ib),
            _ => return Err(not_an_edge()),
        };
        let e = Edge::new(ia, ib);
        self.edge_index(e).map(|_| e).ok_or_else(not_an_edge)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.node_count())
            .map(|n| self.degree(n))
            .max()
            .unwrap_or(0)
    }

    /// Component label for each node, labels assigned in order of first node.
    pub fn component_labels(&self) -> Vec<usize> {
        let mut sets = DisjointSets::new(self.node_count());
        for e in &self.edges {
            sets.union(e.u, e.v);
        }
        let mut label_of_root = HashMap::new();
        (0..self.node_count())
            .map(|n| {
                let root = sets.find(n);
                let next = label_of_root.len();
                *label_of_root.entry(root).or_insert(next)
            })
            .collect()
    }

    /// Node count of the largest connected component.
    pub fn largest_connected_component(&self) -> usize {
        let mut sets = DisjointSets::new(self.node_count());
        for e in &self.edges {
            sets.union(e.u, e.v);
        }
        sets.largest()
    }
}

/// Free-function form of [`RoadGraph::largest_connected_component`].
pub fn largest_connected_component(g: &RoadGraph) -> usize {
    g.largest_connected_component()
}

/// Accumulates nodes and edges, then canonicalizes them into a [`RoadGraph`].
#[derive(Debug, Default)]
pub struct GraphBuilder {
    nodes: BTreeMap<String, Option<(f64, f64)>>,
    edges: Vec<(String, String)>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, id: impl Into<String>, coord: Option<(f64, f64)>) -> Result<()> {
        let id = id.into();
        if self.nodes.contains_key(&id) {
            return Err(Error::DuplicateNode(id));
        }
        self.nodes.insert(id, coord);
        Ok(())
    }

    fn ensure_node(&mut self, id: &str) {
        if !self.nodes.contains_key(id) {
            self.nodes.insert(id.to_string(), None);
        }
    }

    pub fn contains_node(&self, id: &str) -> bool {
        self.nodes.contains_key(id)
    }

    /// Adds an edge between two registered nodes. Self-loops are rejected.
    pub fn add_edge(&mut self, a: impl Into<String>, b: impl Into<String>) -> Result<()> {
        let (a, b) = (a.into(), b.into());
        if a == b {
            return Err(Error::SelfLoop(a));
        }
        for id in [&a, &b] {
            if !self.nodes.contains_key(id) {
                return Err(Error::UnknownNode(id.clone()));
            }
        }
        self.edges.push((a, b));
        Ok(())
    }

    pub fn build(self) -> Result<(RoadGraph, BuildReport)> {
        if self.edges.is_empty() {
            return Err(Error::EmptyEdgeSet);
        }
        let mut report = BuildReport::default();

        // Keep only nodes with at least one incident edge.
        let mut touched: BTreeMap<&str, ()> = BTreeMap::new();
        for (a, b) in &self.edges {
            touched.insert(a, ());
            touched.insert(b, ());
        }
        report.isolated_nodes_dropped = self.nodes.len() - touched.len();

        let ids: Vec<String> = touched.keys().map(|s| s.to_string()).collect();
        let index: HashMap<String, usize> = ids
            .iter()
            .enumerate()
            .map(|(i, id)| (id.clone(), i))
            .collect();
        let coords = ids.iter().map(|id| self.nodes[id]).collect();

        let mut edges: Vec<Edge> = self
            .edges
            .iter()
            .map(|(a, b)| Edge::new(index[a], index[b]))
            .collect();
        edges.sort_unstable();
        let before = edges.len();
        edges.dedup();
        report.duplicate_edges = before - edges.len();
        if report.duplicate_edges > 0 {
            log::warn!("merged {} duplicate edges", report.duplicate_edges);
        }
        if report.isolated_nodes_dropped > 0 {
            log::warn!("dropped {} isolated nodes", report.isolated_nodes_dropped);
        }

        Ok((RoadGraph::assemble(ids, index, coords, edges), report))
    }
}

impl RoadGraph {
    fn assemble(
        ids: Vec<String>,
        index: HashMap<String, usize>,
        coords: Vec<Option<(f64, f64)>>,
        edges: Vec<Edge>,
    ) -> RoadGraph {
        let n = ids.len();
        let mut degree = vec![0usize; n];
        for e in &edges {
            degree[e.u] += 1;
            degree[e.v] += 1;
        }
        let mut offsets = vec![0usize; n + 1];
        for i in 0..n {
            offsets[i + 1] = offsets[i] + degree[i];
        }
        let mut fill = offsets.clone();
        let mut neighbors = vec![0usize; offsets[n]];
        let mut slot_edge = vec![0usize; offsets[n]];
        // Edges are sorted, so each node's slots come out sorted by neighbor.
        for (k, e) in edges.iter().enumerate() {
            neighbors[fill[e.v]] = e.u;
            slot_edge[fill[e.v]] = k;
            fill[e.v] += 1;
        }
        for (k, e) in edges.iter().enumerate() {
            neighbors[fill[e.u]] = e.v;
            slot_edge[fill[e.u]] = k;
            fill[e.u] += 1;
        }
        RoadGraph {
            ids,
            index,
            coords,
            offsets,
            neighbors,
            slot_edge,
            edges,
        }
    }
}

/// Union-find with union by size and path halving.
#[derive(Debug, Clone)]
pub struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
    largest: usize,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
            size: vec![1; n],
            largest: usize::from(n > 0),
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns `true` if the two sets were distinct.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        self.largest = self.largest.max(self.size[ra]);
        true
    }

    /// Size of the largest set.
    pub fn largest(&self) -> usize {
        self.largest
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> RoadGraph {
        RoadGraph::from_edges((1..n).map(|i| (i.to_string(), (i + 1).to_string()))).unwrap()
    }

    #[test]
    fn path_graph_construction() {
        let g = path(3);
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.neighbors(g.node_index("2").unwrap()).len(), 2);
    }

    #[test]
    fn reversed_duplicate_is_merged() {
        let mut b = GraphBuilder::new();
        for id in ["1", "2"] {
            b.add_node(id, None).unwrap();
        }
        b.add_edge("1", "2").unwrap();
        b.add_edge("2", "1").unwrap();
        let (g, report) = b.build().unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.edges()[0], Edge { u: 0, v: 1 });
        assert_eq!(report.duplicate_edges, 1);
    }

    #[test]
    fn self_loop_is_rejected() {
        let mut b = GraphBuilder::new();
        b.add_node("5", None).unwrap();
        assert!(matches!(b.add_edge("5", "5"), Err(Error::SelfLoop(id)) if id == "5"));
    }

    #[test]
    fn isolated_nodes_are_dropped() {
        let mut b = GraphBuilder::new();
        for id in ["a", "b", "c"] {
            b.add_node(id, None).unwrap();
        }
        b.add_edge("a", "b").unwrap();
        let (g, report) = b.build().unwrap();
        assert_eq!(g.node_count(), 2);
        assert_eq!(report.isolated_nodes_dropped, 1);
    }

    #[test]
    fn unknown_endpoint_and_empty_graph() {
        let mut b = GraphBuilder::new();
        b.add_node("a", None).unwrap();
        assert!(matches!(b.add_edge("a", "z"), Err(Error::UnknownNode(_))));
        assert!(matches!(b.build(), Err(Error::EmptyEdgeSet)));
    }

    #[test]
    fn adjacency_is_sorted_and_consistent() {
        let g = RoadGraph::from_edges([("c", "a"), ("a", "b"), ("b", "c"), ("d", "a")]).unwrap();
        let degree_sum: usize = (0..g.node_count()).map(|n| g.degree(n)).sum();
        assert_eq!(degree_sum, 2 * g.edge_count());
        for n in 0..g.node_count() {
            assert!(g.neighbors(n).windows(2).all(|w| w[0] < w[1]));
            for (m, k) in g.incident(n) {
                assert_eq!(g.edges()[k], Edge::new(n, m));
            }
        }
    }

    #[test]
    fn lcc_of_connected_path() {
        assert_eq!(largest_connected_component(&path(5)), 5);
    }

    #[test]
    fn lcc_of_disjoint_pieces() {
        let g = RoadGraph::from_edges([
            ("a1", "a2"),
            ("a2", "a3"),
            ("a3", "a1"),
            ("b1", "b2"),
            ("b2", "b3"),
            ("b3", "b1"),
            ("c1", "c2"),
        ])
        .unwrap();
        assert_eq!(g.largest_connected_component(), 3);
    }

    #[test]
    fn lcc_of_split_cycle() {
        // 10-cycle 0..9; drop edges so the pieces are {0,1,2,3}, {4,5,6}, {7,8}, {9}.
        let removed = [(3, 4), (6, 7), (8, 9), (9, 0)];
        let edges = (0..10usize)
            .map(|i| (i, (i + 1) % 10))
            .filter(|&(a, b)| !removed.contains(&(a, b)))
            .map(|(a, b)| (a.to_string(), b.to_string()));
        let mut b = GraphBuilder::new();
        for i in 0..10 {
            b.add_node(i.to_string(), None).unwrap();
        }
        for (x, y) in edges {
            b.add_edge(x, y).unwrap();
        }
        // Node 9 is isolated and gets dropped; the remaining labeling is explicit.
        let (g, report) = b.build().unwrap();
        assert_eq!(report.isolated_nodes_dropped, 1);
        let labels = g.component_labels();
        let mut sizes: HashMap<usize, usize> = HashMap::new();
        for l in labels {
            *sizes.entry(l).or_default() += 1;
        }
        let mut sizes: Vec<usize> = sizes.into_values().collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![2, 3, 4]);
        assert_eq!(g.largest_connected_component(), 4);
    }
}
