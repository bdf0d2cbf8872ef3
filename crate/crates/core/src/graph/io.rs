//! Node and edge CSV files.
//!
//! Node file: header `id,x,y`, with `x` and `y` optionally empty.
//! Edge file: header `u,v`, one edge per row.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use super::{BuildReport, GraphBuilder, RoadGraph};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub graph: RoadGraph,
    pub report: BuildReport,
}

pub fn load_graph(node_file: impl AsRef<Path>, edge_file: impl AsRef<Path>) -> Result<LoadedGraph> {
    let (node_file, edge_file) = (node_file.as_ref(), edge_file.as_ref());
    let open = |p: &Path| {
        File::open(p).map_err(|source| Error::Io {
            path: p.to_path_buf(),
            source,
        })
    };
    read_graph(open(node_file)?, node_file, open(edge_file)?, edge_file)
}

/// Reads a graph from already-open node and edge sources. The paths are used
/// only in error messages.
pub fn read_graph<N: Read, E: Read>(
    nodes: N,
    node_name: &Path,
    edges: E,
    edge_name: &Path,
) -> Result<LoadedGraph> {
    let mut builder = GraphBuilder::new();

    let mut rdr = reader(nodes);
    check_header(&mut rdr, node_name, &["id", "x", "y"])?;
    for row in rdr.records() {
        let row = row.map_err(|e| csv_error(node_name, e))?;
        let line = line_of(&row);
        let err = |message: String| Error::Parse {
            file: node_name.to_path_buf(),
            line,
            message,
        };
        if row.len() != 3 {
            return Err(err(format!("expected 3 fields, found {}", row.len())));
        }
        let id = row[0].to_string();
        if id.is_empty() {
            return Err(err("empty node id".into()));
        }
        let coord = match (&row[1], &row[2]) {
            ("", "") => None,
            (x, y) => {
                let parse = |s: &str| {
                    s.parse::<f64>()
                        .ok()
                        .filter(|v| v.is_finite())
                        .ok_or_else(|| err(format!("invalid coordinate {s:?}")))
                };
                Some((parse(x)?, parse(y)?))
            }
        };
        builder
            .add_node(id.clone(), coord)
            .map_err(|_| err(format!("duplicate node id {id:?}")))?;
    }

    let mut rdr = reader(edges);
    check_header(&mut rdr, edge_name, &["u", "v"])?;
    for row in rdr.records() {
        let row = row.map_err(|e| csv_error(edge_name, e))?;
        let line = line_of(&row);
        let err = |message: String| Error::Parse {
            file: edge_name.to_path_buf(),
            line,
            message,
        };
        if row.len() != 2 {
            return Err(err(format!("expected 2 fields, found {}", row.len())));
        }
        builder
            .add_edge(&row[0], &row[1])
            .map_err(|e| err(e.to_string()))?;
    }

    let (graph, report) = builder.build()?;
    Ok(LoadedGraph { graph, report })
}

fn reader<R: Read>(r: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(r)
}

fn check_header<R: Read>(rdr: &mut csv::Reader<R>, file: &Path, expected: &[&str]) -> Result<()> {
    let header = rdr.headers().map_err(|e| csv_error(file, e))?;
    let found: Vec<&str> = header
        .iter()
        .map(|h| h.trim_start_matches('\u{feff}'))
        .collect();
    if found != expected {
        return Err(Error::Parse {
            file: file.to_path_buf(),
            line: 1,
            message: format!(
                "expected header {:?}, found {:?}",
                expected.join(","),
                found.join(",")
            ),
        });
    }
    Ok(())
}

fn line_of(row: &csv::StringRecord) -> u64 {
    row.position().map_or(0, |p| p.line())
}

fn csv_error(file: &Path, e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    Error::Parse {
        file: file.to_path_buf(),
        line,
        message: e.to_string(),
    }
}

/// Writes the node file, sorted by id.
pub fn write_nodes_csv<W: Write>(g: &RoadGraph, w: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["id", "x", "y"])?;
    for n in 0..g.node_count() {
        let (x, y) = match g.coord(n) {
            Some((x, y)) => (x.to_string(), y.to_string()),
            None => (String::new(), String::new()),
        };
        wtr.write_record([g.id(n), &x, &y])?;
    }
    wtr.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}

/// Writes the edge file, sorted by `(u, v)`.
pub fn write_edges_csv<W: Write>(g: &RoadGraph, w: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["u", "v"])?;
    for e in g.edges() {
        wtr.write_record([g.id(e.u), g.id(e.v)])?;
    }
    wtr.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}
