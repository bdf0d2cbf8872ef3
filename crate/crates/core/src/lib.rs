//! Road-network topology vulnerability through Ollivier-Ricci curvature.
//!
//! The crate loads L-space road graphs, computes per-edge coarse Ricci
//! curvature from exact optimal transport between neighbor measures, and
//! compares curvature-ordered edge-removal attacks against random and
//! betweenness-ordered ones by tracking the largest connected component.

pub mod attack;
pub mod centrality;
pub mod curvature;
pub mod error;
pub mod generate;
pub mod graph;
pub mod report;
pub mod scores;
pub mod transport;

pub use attack::{
    build_schedule, run_attack, run_random_attack, sample_grid, AttackSchedule, Strategy, TvrCurve,
    TvrSample,
};
pub use centrality::{edge_betweenness, edge_betweenness_exact};
pub use curvature::{curvature_table, edge_curvature, neighbor_measure, EdgeCurvature};
pub use error::{Error, Result};
pub use generate::{generate_benchmark, Benchmark, BenchmarkKind};
pub use graph::{
    largest_connected_component, load_graph, network_stats, BuildReport, Edge, GraphBuilder,
    LoadedGraph, NetworkStats, RoadGraph,
};
pub use report::{correlate, export_geojson, histogram, CorrelationReport, Histogram};
pub use scores::{EdgeScoreTable, ScoreKind};
pub use transport::{hop_cost, wasserstein, DiscreteMeasure, HopCost, TransportPlan};
