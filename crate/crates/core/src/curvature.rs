//! Coarse Ricci curvature of road segments.
//!
//! Each endpoint of an edge spreads unit mass uniformly over its neighbors
//! (none on itself). The curvature of edge `(u, v)` is `1 - W(m_u, m_v)`,
//! where `W` is the exact transport cost under hop distance on the whole
//! graph. Every supply point is within three hops of every demand point, so
//! a BFS truncated at radius 3 yields exact costs.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Edge, RoadGraph};
use crate::scores::{EdgeScoreTable, ScoreKind};
use crate::transport::{wasserstein, DiscreteMeasure, HopCost};

/// Any two points of adjacent neighborhoods are joined by a path x-u-v-y.
const SUPPORT_RADIUS: u32 = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeCurvature {
    pub edge: Edge,
    pub kappa: f64,
}

/// Uniform measure over the neighbors of `node`.
pub fn neighbor_measure(g: &RoadGraph, node: usize) -> Result<DiscreteMeasure> {
    if node >= g.node_count() {
        return Err(Error::InvalidArgument(format!("unknown node index {node}")));
    }
    DiscreteMeasure::uniform(g.neighbors(node).to_vec())
}

/// [`neighbor_measure`] by node id.
pub fn neighbor_measure_of(g: &RoadGraph, id: &str) -> Result<DiscreteMeasure> {
    let node = g
        .node_index(id)
        .ok_or_else(|| Error::InvalidArgument(format!("unknown node {id:?}")))?;
    neighbor_measure(g, node)
}

pub fn edge_curvature(g: &RoadGraph, e: Edge) -> Result<EdgeCurvature> {
    if g.edge_index(e).is_none() {
        return Err(Error::NotAnEdge {
            u: index_label(g, e.u),
            v: index_label(g, e.v),
        });
    }
    let mu = neighbor_measure(g, e.u)?;
    let nu = neighbor_measure(g, e.v)?;
    let hops = HopCost::within_radius(g, mu.support(), SUPPORT_RADIUS);
    let plan = wasserstein(&mu, &nu, |x, y| hops.cost(x, y)).map_err(|err| match err {
        Error::Unreachable { .. } => Error::UnreachableEdge {
            u: g.id(e.u).to_string(),
            v: g.id(e.v).to_string(),
        },
        other => other,
    })?;
    Ok(EdgeCurvature {
        edge: e,
        kappa: 1.0 - plan.total_cost,
    })
}

fn index_label(g: &RoadGraph, n: usize) -> String {
    if n < g.node_count() {
        g.id(n).to_string()
    } else {
        format!("#{n}")
    }
}

/// Curvature of every edge, in the graph's edge order.
pub fn curvature_table(g: &RoadGraph) -> Result<EdgeScoreTable> {
    let kappas = g
        .edges()
        .par_iter()
        .map(|&e| edge_curvature(g, e).map(|c| c.kappa))
        .collect::<Result<Vec<f64>>>()?;
    EdgeScoreTable::for_graph(ScoreKind::Curvature, g, kappas)
}
