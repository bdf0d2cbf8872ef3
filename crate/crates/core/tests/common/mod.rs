#![allow(dead_code)]

use roadricci::RoadGraph;

/// Zero-padded ids so that dense index `i` is node `i` of the edge list.
pub fn id(i: usize) -> String {
    format!("n{i:03}")
}

pub fn road_graph(edges: &[(usize, usize)]) -> RoadGraph {
    RoadGraph::from_edges(edges.iter().map(|&(a, b)| (id(a), id(b)))).unwrap()
}

pub fn complete(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect()
}

pub fn cycle(n: usize) -> Vec<(usize, usize)> {
    (0..n).map(|i| (i, (i + 1) % n)).collect()
}

pub fn star(leaves: usize) -> Vec<(usize, usize)> {
    (1..=leaves).map(|i| (0, i)).collect()
}

pub fn lattice(w: usize, h: usize) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for r in 0..h {
        for c in 0..w {
            let i = r * w + c;
            if c + 1 < w {
                edges.push((i, i + 1));
            }
            if r + 1 < h {
                edges.push((i, i + w));
            }
        }
    }
    edges
}
