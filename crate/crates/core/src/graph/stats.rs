use std::collections::VecDeque;

use rayon::prelude::*;
use serde::Serialize;

use super::RoadGraph;
use crate::error::{Error, Result};

/// Global statistics of a road graph. Diameter and average path length are
/// hop counts over the largest connected component; `connected` is false
/// when the graph had other components that were left out of them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NetworkStats {
    pub node_count: usize,
    pub edge_count: usize,
    pub max_degree: usize,
    pub avg_degree: f64,
    #[serde(rename = "diameter_D")]
    pub diameter: u32,
    #[serde(rename = "avg_path_L")]
    pub avg_path_length: f64,
    #[serde(rename = "avg_clustering_C")]
    pub avg_clustering: f64,
    pub connected: bool,
    pub lcc_node_count: usize,
}

/// Local clustering coefficient `2 m / (k (k - 1))`, zero below degree 2.
pub fn clustering_coefficient(g: &RoadGraph, node: usize) -> f64 {
    let k = g.degree(node);
    if k < 2 {
        return 0.0;
    }
    let nbrs = g.neighbors(node);
    let mut links = 0usize;
    for &a in nbrs {
        links += count_common(g.neighbors(a), nbrs);
    }
    // Each neighbor-neighbor link was seen from both ends.
    let m = links / 2;
    (2 * m) as f64 / (k * (k - 1)) as f64
}

fn count_common(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

/// Single-source BFS hop distances; `u32::MAX` marks unreachable nodes.
pub(crate) fn bfs_hops(g: &RoadGraph, source: usize) -> Vec<u32> {
    let mut dist = vec![u32::MAX; g.node_count()];
    let mut queue = VecDeque::new();
    dist[source] = 0;
    queue.push_back(source);
    while let Some(x) = queue.pop_front() {
        for &y in g.neighbors(x) {
            if dist[y] == u32::MAX {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    dist
}

pub fn network_stats(g: &RoadGraph) -> Result<NetworkStats> {
    let n = g.node_count();
    if n < 2 {
        return Err(Error::TooFewNodes);
    }

    let labels = g.component_labels();
    let mut sizes = vec![0usize; labels.iter().max().map_or(0, |m| m + 1)];
    for &l in &labels {
        sizes[l] += 1;
    }
    // First label wins ties, which is the component holding the smallest id.
    let (lcc_label, lcc_size) =
        sizes.iter().copied().enumerate().fold(
            (0, 0),
            |best, (l, s)| if s > best.1 { (l, s) } else { best },
        );
    let members: Vec<usize> = (0..n).filter(|&x| labels[x] == lcc_label).collect();

    // Per-source BFS; max and integer sums are order-independent.
    let (diameter, hop_sum) = members
        .par_iter()
        .map(|&s| {
            let dist = bfs_hops(g, s);
            members.iter().fold((0u32, 0u64), |(mx, sum), &t| {
                let d = dist[t];
                (mx.max(d), sum + u64::from(d))
            })
        })
        .reduce(|| (0, 0), |a, b| (a.0.max(b.0), a.1 + b.1));

    let ordered_pairs = (lcc_size as u64) * (lcc_size as u64 - 1);
    let avg_path_length = if ordered_pairs == 0 {
        0.0
    } else {
        hop_sum as f64 / ordered_pairs as f64
    };

    let clustering_sum: f64 = (0..n).map(|x| clustering_coefficient(g, x)).sum();

    Ok(NetworkStats {
        node_count: n,
        edge_count: g.edge_count(),
        max_degree: g.max_degree(),
        avg_degree: 2.0 * g.edge_count() as f64 / n as f64,
        diameter,
        avg_path_length,
        avg_clustering: clustering_sum / n as f64,
        connected: lcc_size == n,
        lcc_node_count: lcc_size,
    })
}
