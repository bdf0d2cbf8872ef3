use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use roadricci::attack::{DEFAULT_GRID_STEP, DEFAULT_TRIALS};
use roadricci::graph::{write_edges_csv, write_nodes_csv};
use roadricci::report::{
    write_histogram_csv, write_scores_csv, write_tvr_csv, CURVATURE_RANGE, DEFAULT_BINS,
};
use roadricci::{
    build_schedule, correlate, curvature_table, edge_betweenness, export_geojson,
    generate_benchmark, histogram, load_graph, network_stats, run_attack, run_random_attack,
    sample_grid, BenchmarkKind, BuildReport, RoadGraph, Strategy, TvrCurve,
};

/// Correlations below this magnitude are flagged as divergent indicators.
const WEAK_CORRELATION: f64 = 0.1;

#[derive(Parser)]
#[command(
    name = "roadricci",
    version,
    about = "Road-network vulnerability analysis with Ollivier-Ricci curvature"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Size, degree, diameter, mean path length and clustering -> stats.json
    Stats(GraphCmd),
    /// Per-edge curvature -> curvature.csv and histogram.csv
    Curvature(GraphCmd),
    /// Per-edge shortest-path betweenness -> betweenness.csv
    Betweenness {
        #[command(flatten)]
        cmd: GraphCmd,
        /// Divide by the number of node pairs
        #[arg(long)]
        normalized: bool,
    },
    /// Edge-removal attacks tracked by largest-component share -> tvr.csv
    Attack {
        #[command(flatten)]
        cmd: GraphCmd,
        /// Comma-separated subset of random, curvature, betweenness
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "random,curvature,betweenness"
        )]
        strategies: Vec<Strategy>,
    },
    /// Pearson correlation of curvature and betweenness -> correlation.json
    Correlate(GraphCmd),
    /// Edges with curvature and betweenness as GeoJSON -> network.geojson
    ExportGeojson(GraphCmd),
    /// Synthetic benchmark network -> nodes.csv, edges.csv, trunks.csv
    GenBenchmark {
        #[command(flatten)]
        common: Common,
        /// grid, grid-radial, grid-star or tree
        #[arg(long)]
        kind: BenchmarkKind,
        /// Lattice side length, or node count for tree
        #[arg(long, default_value_t = 15)]
        size: usize,
    },
}

#[derive(Args)]
struct GraphCmd {
    /// Node CSV with header id,x,y
    #[arg(long)]
    nodes: PathBuf,
    /// Edge CSV with header u,v
    #[arg(long)]
    edges: PathBuf,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Serialize)]
struct Common {
    /// Directory for output files (created if missing)
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
    /// Base seed for random attack trials and generated trees
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Random attack trials
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: usize,
    /// Histogram bins over the curvature range [-2, 1]
    #[arg(long, default_value_t = DEFAULT_BINS)]
    bins: usize,
    /// Spacing of removal fractions in attack curves
    #[arg(long, default_value_t = DEFAULT_GRID_STEP)]
    grid_step: f64,
}

/// Everything a run echoes into manifest.json.
#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    node_file: Option<&'a Path>,
    edge_file: Option<&'a Path>,
    #[serde(flatten)]
    common: &'a Common,
    options: Value,
    input: Option<BuildReport>,
    outputs: Vec<&'static str>,
}

/// Writes through a temp file in the target directory, then renames.
fn write_atomic(
    dir: &Path,
    name: &str,
    write: impl FnOnce(&mut dyn Write) -> Result<()>,
) -> Result<()> {
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("creating temp file in {}", dir.display()))?;
    {
        let mut w = BufWriter::new(tmp.as_file_mut());
        write(&mut w)?;
        w.flush()?;
    }
    let path = dir.join(name);
    tmp.persist(&path)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn write_json(dir: &Path, name: &str, value: &impl Serialize) -> Result<()> {
    write_atomic(dir, name, |w| {
        serde_json::to_writer_pretty(&mut *w, value)?;
        writeln!(w)?;
        Ok(())
    })
}

struct Loaded {
    graph: RoadGraph,
    report: BuildReport,
}

fn load(cmd: &GraphCmd) -> Result<Loaded> {
    let loaded = load_graph(&cmd.nodes, &cmd.edges)?;
    Ok(Loaded {
        graph: loaded.graph,
        report: loaded.report,
    })
}

fn prepare(common: &Common) -> Result<()> {
    fs::create_dir_all(&common.out_dir)
        .with_context(|| format!("creating {}", common.out_dir.display()))
}

fn run(cli: Cli) -> Result<()> {
    let (label, graph_cmd, common, options) = match &cli.command {
        Command::Stats(c) => ("stats", Some(c), &c.common, json!({})),
        Command::Curvature(c) => ("curvature", Some(c), &c.common, json!({})),
        Command::Betweenness { cmd, normalized } => (
            "betweenness",
            Some(cmd),
            &cmd.common,
            json!({ "normalized": normalized }),
        ),
        Command::Attack { cmd, strategies } => (
            "attack",
            Some(cmd),
            &cmd.common,
            json!({ "strategies": strategies }),
        ),
        Command::Correlate(c) => ("correlate", Some(c), &c.common, json!({})),
        Command::ExportGeojson(c) => ("export-geojson", Some(c), &c.common, json!({})),
        Command::GenBenchmark { common, kind, size } => (
            "gen-benchmark",
            None,
            common,
            json!({ "kind": kind.label(), "size": size }),
        ),
    };
    prepare(common)?;
    let dir = common.out_dir.as_path();
    let loaded = graph_cmd.map(load).transpose()?;

    let outputs: Vec<&'static str> = match &cli.command {
        Command::Stats(_) => {
            let g = &loaded.as_ref().unwrap().graph;
            let stats = network_stats(g)?;
            write_json(dir, "stats.json", &stats)?;
            println!(
                "nodes {} edges {} D {} L {:.4} C {:.4}",
                stats.node_count,
                stats.edge_count,
                stats.diameter,
                stats.avg_path_length,
                stats.avg_clustering
            );
            vec!["stats.json"]
        }
        Command::Curvature(_) => {
            let g = &loaded.as_ref().unwrap().graph;
            let table = curvature_table(g)?;
            let h = histogram(&table, common.bins, CURVATURE_RANGE)?;
            write_atomic(dir, "curvature.csv", |w| {
                Ok(write_scores_csv(g, &table, w)?)
            })?;
            write_atomic(dir, "histogram.csv", |w| Ok(write_histogram_csv(&h, w)?))?;
            if h.out_of_range > 0 {
                log::warn!("{} curvature values fell outside [-2, 1]", h.out_of_range);
            }
            println!("{} edges scored", table.len());
            vec!["curvature.csv", "histogram.csv"]
        }
        Command::Betweenness { normalized, .. } => {
            let g = &loaded.as_ref().unwrap().graph;
            let table = edge_betweenness(g, *normalized);
            write_atomic(dir, "betweenness.csv", |w| {
                Ok(write_scores_csv(g, &table, w)?)
            })?;
            println!("{} edges scored", table.len());
            vec!["betweenness.csv"]
        }
        Command::Attack { strategies, .. } => {
            let g = &loaded.as_ref().unwrap().graph;
            let curves = attack(g, strategies, common)?;
            write_atomic(dir, "tvr.csv", |w| Ok(write_tvr_csv(&curves, w)?))?;
            for c in &curves {
                if let Some(s) = c.at(0.2) {
                    println!("{:<12} TVR at f=0.2: {:.4}", c.strategy.label(), s.tvr_mean);
                }
            }
            vec!["tvr.csv"]
        }
        Command::Correlate(_) => {
            let g = &loaded.as_ref().unwrap().graph;
            let kappa = curvature_table(g)?;
            let bc = edge_betweenness(g, false);
            let r = correlate(&kappa, &bc)?;
            let below = r.pearson_r.abs() < WEAK_CORRELATION;
            let mut record = serde_json::to_value(&r)?;
            record["abs_r_below_0.1"] = json!(below);
            write_json(dir, "correlation.json", &record)?;
            println!("pearson r {:.6} (|r| < 0.1: {below})", r.pearson_r);
            vec!["correlation.json"]
        }
        Command::ExportGeojson(_) => {
            let g = &loaded.as_ref().unwrap().graph;
            let kappa = curvature_table(g)?;
            let bc = edge_betweenness(g, false);
            let doc = export_geojson(g, &[&kappa, &bc])?;
            write_json(dir, "network.geojson", &doc)?;
            println!("{} features", g.edge_count());
            vec!["network.geojson"]
        }
        Command::GenBenchmark { kind, size, .. } => {
            let b = generate_benchmark(*kind, *size, common.seed)?;
            let g = &b.graph;
            write_atomic(dir, "nodes.csv", |w| Ok(write_nodes_csv(g, w)?))?;
            write_atomic(dir, "edges.csv", |w| Ok(write_edges_csv(g, w)?))?;
            write_atomic(dir, "trunks.csv", |w| {
                let mut wtr = csv::Writer::from_writer(w);
                wtr.write_record(["u", "v"])?;
                for (u, v) in &b.trunk_edges {
                    wtr.write_record([u, v])?;
                }
                wtr.flush()?;
                Ok(())
            })?;
            println!(
                "{} nodes, {} edges, {} trunk edges",
                g.node_count(),
                g.edge_count(),
                b.trunk_edges.len()
            );
            vec!["nodes.csv", "edges.csv", "trunks.csv"]
        }
    };

    let manifest = Manifest {
        tool: "roadricci",
        version: env!("CARGO_PKG_VERSION"),
        command: label,
        node_file: graph_cmd.map(|c| c.nodes.as_path()),
        edge_file: graph_cmd.map(|c| c.edges.as_path()),
        common,
        options,
        input: loaded.map(|l| l.report),
        outputs,
    };
    write_json(dir, "manifest.json", &manifest)
}

fn attack(g: &RoadGraph, strategies: &[Strategy], common: &Common) -> Result<Vec<TvrCurve>> {
    if strategies.is_empty() {
        bail!("no attack strategies given");
    }
    let grid = sample_grid(common.grid_step)?;
    let mut curves = Vec::new();
    let mut seen = Vec::new();
    for &s in strategies {
        if seen.contains(&s) {
            continue;
        }
        seen.push(s);
        let curve = match s {
            Strategy::Random => run_random_attack(g, common.trials, common.seed, &grid)?,
            Strategy::Curvature => {
                let kappa = curvature_table(g)?;
                run_attack(g, &build_schedule(g, Some(&kappa), s, common.seed)?, &grid)?
            }
            Strategy::Betweenness => {
                let bc = edge_betweenness(g, false);
                run_attack(g, &build_schedule(g, Some(&bc), s, common.seed)?, &grid)?
            }
        };
        curves.push(curve);
    }
    Ok(curves)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
