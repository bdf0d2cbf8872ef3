//! Python bindings. Graphs are exposed as an opaque `RoadGraph`; per-edge
//! scores come back as `{(u, v): value}` dicts keyed by node id.

use std::collections::BTreeMap;

use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;

use roadricci::transport::DiscreteMeasure;
use roadricci::{report, scores::EdgeScoreTable, Error, Strategy};

fn to_py(err: Error) -> PyErr {
    match err {
        Error::Io { .. } => PyOSError::new_err(err.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

type EdgeKey = (String, String);

#[pyclass(name = "RoadGraph", module = "roadricci", frozen)]
pub struct PyRoadGraph {
    inner: roadricci::RoadGraph,
}

impl PyRoadGraph {
    fn node(&self, id: &str) -> PyResult<usize> {
        self.inner
            .node_index(id)
            .ok_or_else(|| PyValueError::new_err(format!("unknown node {id:?}")))
    }

    fn key(&self, e: roadricci::Edge) -> EdgeKey {
        (
            self.inner.id(e.u).to_string(),
            self.inner.id(e.v).to_string(),
        )
    }

    fn table_dict(&self, t: &EdgeScoreTable) -> BTreeMap<EdgeKey, f64> {
        t.iter().map(|(e, s)| (self.key(e), s)).collect()
    }
}

#[pymethods]
impl PyRoadGraph {
    /// Builds a graph from `(u, v)` id pairs. Duplicate edges are merged.
    #[new]
    fn new(edges: Vec<EdgeKey>) -> PyResult<Self> {
        let inner = roadricci::RoadGraph::from_edges(edges).map_err(to_py)?;
        Ok(PyRoadGraph { inner })
    }

    /// Loads `id,x,y` and `u,v` CSV files.
    #[staticmethod]
    fn load(nodes: &str, edges: &str) -> PyResult<Self> {
        let loaded = roadricci::load_graph(nodes, edges).map_err(to_py)?;
        Ok(PyRoadGraph {
            inner: loaded.graph,
        })
    }

    #[getter]
    fn node_count(&self) -> usize {
        self.inner.node_count()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    fn nodes(&self) -> Vec<String> {
        self.inner.ids().to_vec()
    }

    fn edges(&self) -> Vec<EdgeKey> {
        self.inner.edges().iter().map(|&e| self.key(e)).collect()
    }

    fn degree(&self, id: &str) -> PyResult<usize> {
        Ok(self.inner.degree(self.node(id)?))
    }

    fn neighbors(&self, id: &str) -> PyResult<Vec<String>> {
        let n = self.node(id)?;
        Ok(self
            .inner
            .neighbors(n)
            .iter()
            .map(|&m| self.inner.id(m).to_string())
            .collect())
    }

    fn coord(&self, id: &str) -> PyResult<Option<(f64, f64)>> {
        Ok(self.inner.coord(self.node(id)?))
    }

    fn largest_component(&self) -> usize {
        self.inner.largest_connected_component()
    }

    fn stats(&self) -> PyResult<NetworkStats> {
        let s = roadricci::network_stats(&self.inner).map_err(to_py)?;
        Ok(NetworkStats {
            node_count: s.node_count,
            edge_count: s.edge_count,
            max_degree: s.max_degree,
            avg_degree: s.avg_degree,
            diameter: s.diameter,
            avg_path_length: s.avg_path_length,
            avg_clustering: s.avg_clustering,
            connected: s.connected,
            lcc_node_count: s.lcc_node_count,
        })
    }

    fn curvature(&self, py: Python<'_>) -> PyResult<BTreeMap<EdgeKey, f64>> {
        let t = py
            .detach(|| roadricci::curvature_table(&self.inner))
            .map_err(to_py)?;
        Ok(self.table_dict(&t))
    }

    fn edge_curvature(&self, u: &str, v: &str) -> PyResult<f64> {
        let e = self.inner.edge_by_ids(u, v).map_err(to_py)?;
        Ok(roadricci::edge_curvature(&self.inner, e)
            .map_err(to_py)?
            .kappa)
    }

    #[pyo3(signature = (normalized = false))]
    fn betweenness(&self, py: Python<'_>, normalized: bool) -> BTreeMap<EdgeKey, f64> {
        let t = py.detach(|| roadricci::edge_betweenness(&self.inner, normalized));
        self.table_dict(&t)
    }

    /// TVR curve for `strategy` in {"random", "curvature", "betweenness"}.
    #[pyo3(signature = (strategy, trials = 10, seed = 42, grid_step = 0.01))]
    fn attack(
        &self,
        py: Python<'_>,
        strategy: &str,
        trials: usize,
        seed: u64,
        grid_step: f64,
    ) -> PyResult<TvrCurve> {
        let strategy: Strategy = strategy.parse().map_err(to_py)?;
        let g = &self.inner;
        let curve = py
            .detach(|| -> roadricci::Result<_> {
                let grid = roadricci::sample_grid(grid_step)?;
                match strategy {
                    Strategy::Random => roadricci::run_random_attack(g, trials, seed, &grid),
                    Strategy::Curvature => {
                        let t = roadricci::curvature_table(g)?;
                        roadricci::run_attack(
                            g,
                            &roadricci::build_schedule(g, Some(&t), strategy, seed)?,
                            &grid,
                        )
                    }
                    Strategy::Betweenness => {
                        let t = roadricci::edge_betweenness(g, false);
                        roadricci::run_attack(
                            g,
                            &roadricci::build_schedule(g, Some(&t), strategy, seed)?,
                            &grid,
                        )
                    }
                }
            })
            .map_err(to_py)?;
        Ok(TvrCurve {
            strategy: curve.strategy.label().to_string(),
            fractions: curve.samples.iter().map(|s| s.fraction_removed).collect(),
            tvr_mean: curve.samples.iter().map(|s| s.tvr_mean).collect(),
            tvr_std: curve.samples.iter().map(|s| s.tvr_std).collect(),
            trials: curve.samples.first().map_or(0, |s| s.trials),
        })
    }

    /// Pearson correlation between curvature and unnormalized betweenness.
    fn correlate(&self) -> PyResult<Correlation> {
        let k = roadricci::curvature_table(&self.inner).map_err(to_py)?;
        let b = roadricci::edge_betweenness(&self.inner, false);
        roadricci::correlate(&k, &b)
            .map(Correlation::from)
            .map_err(to_py)
    }

    /// GeoJSON FeatureCollection text with curvature and betweenness.
    fn geojson(&self) -> PyResult<String> {
        let k = roadricci::curvature_table(&self.inner).map_err(to_py)?;
        let b = roadricci::edge_betweenness(&self.inner, false);
        let doc = roadricci::export_geojson(&self.inner, &[&k, &b]).map_err(to_py)?;
        Ok(doc.to_string())
    }

    fn __repr__(&self) -> String {
        format!(
            "RoadGraph(nodes={}, edges={})",
            self.inner.node_count(),
            self.inner.edge_count()
        )
    }
}

#[pyclass(module = "roadricci", frozen, get_all)]
pub struct NetworkStats {
    node_count: usize,
    edge_count: usize,
    max_degree: usize,
    avg_degree: f64,
    diameter: u32,
    avg_path_length: f64,
    avg_clustering: f64,
    connected: bool,
    lcc_node_count: usize,
}

#[pyclass(module = "roadricci", frozen, get_all)]
pub struct TvrCurve {
    strategy: String,
    fractions: Vec<f64>,
    tvr_mean: Vec<f64>,
    tvr_std: Vec<f64>,
    trials: usize,
}

#[pyclass(module = "roadricci", frozen, get_all)]
pub struct Correlation {
    pearson_r: f64,
    n: usize,
    mean_x: f64,
    mean_y: f64,
    std_x: f64,
    std_y: f64,
}

impl From<report::CorrelationReport> for Correlation {
    fn from(r: report::CorrelationReport) -> Self {
        Correlation {
            pearson_r: r.pearson_r,
            n: r.n,
            mean_x: r.mean_x,
            mean_y: r.mean_y,
            std_x: r.std_x,
            std_y: r.std_y,
        }
    }
}

#[pyclass(module = "roadricci", frozen, get_all)]
pub struct Histogram {
    bin_edges: Vec<f64>,
    counts: Vec<usize>,
    frequencies: Vec<f64>,
    out_of_range: usize,
}

#[pyfunction]
#[pyo3(signature = (values, bins = report::DEFAULT_BINS, lo = report::CURVATURE_RANGE.0, hi = report::CURVATURE_RANGE.1))]
fn histogram(values: Vec<f64>, bins: usize, lo: f64, hi: f64) -> PyResult<Histogram> {
    let h = report::histogram_of(&values, bins, (lo, hi)).map_err(to_py)?;
    Ok(Histogram {
        bin_edges: h.bin_edges,
        counts: h.counts,
        frequencies: h.frequencies,
        out_of_range: h.out_of_range,
    })
}

#[pyfunction]
fn pearson(x: Vec<f64>, y: Vec<f64>) -> PyResult<Correlation> {
    report::pearson(&x, &y)
        .map(Correlation::from)
        .map_err(to_py)
}

/// Exact transport cost between two discrete distributions, with `cost[i][j]`
/// the price of moving mass from point `i` of `mu` to point `j` of `nu`.
/// Masses must be rational with denominators up to about a million.
#[pyfunction]
fn wasserstein(mu: Vec<f64>, nu: Vec<f64>, cost: Vec<Vec<f64>>) -> PyResult<f64> {
    if cost.len() != mu.len() || cost.iter().any(|row| row.len() != nu.len()) {
        return Err(PyValueError::new_err(
            "cost must be a len(mu) x len(nu) matrix",
        ));
    }
    let m = mu.len();
    let a = DiscreteMeasure::from_masses((0..m).collect(), &mu).map_err(to_py)?;
    let b = DiscreteMeasure::from_masses((m..m + nu.len()).collect(), &nu).map_err(to_py)?;
    let plan = roadricci::wasserstein(&a, &b, |x, y| cost[x][y - m]).map_err(to_py)?;
    Ok(plan.total_cost)
}

/// Synthetic benchmark: returns the graph and its trunk edges.
#[pyfunction]
#[pyo3(signature = (kind, size, seed = 42))]
fn generate_benchmark(kind: &str, size: usize, seed: u64) -> PyResult<(PyRoadGraph, Vec<EdgeKey>)> {
    let kind: roadricci::BenchmarkKind = kind.parse().map_err(to_py)?;
    let b = roadricci::generate_benchmark(kind, size, seed).map_err(to_py)?;
    Ok((PyRoadGraph { inner: b.graph }, b.trunk_edges))
}

#[pymodule]
#[pyo3(name = "roadricci")]
mod module {
    #[pymodule_export]
    use super::{
        generate_benchmark, histogram, pearson, wasserstein, Correlation, Histogram, NetworkStats,
        PyRoadGraph, TvrCurve,
    };
}
