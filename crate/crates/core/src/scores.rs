use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Edge, RoadGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ScoreKind {
    Curvature,
    Betweenness,
}

impl ScoreKind {
    /// Column / property name used in exports.
    pub fn column(self) -> &'static str {
        match self {
            ScoreKind::Curvature => "kappa",
            ScoreKind::Betweenness => "betweenness",
        }
    }
}

impl fmt::Display for ScoreKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScoreKind::Curvature => "curvature",
            ScoreKind::Betweenness => "betweenness",
        })
    }
}

/// One score per edge, aligned with a graph's sorted edge list.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeScoreTable {
    kind: ScoreKind,
    edges: Vec<Edge>,
    scores: Vec<f64>,
}

impl EdgeScoreTable {
    pub fn new(kind: ScoreKind, edges: Vec<Edge>, scores: Vec<f64>) -> Result<Self> {
        if edges.len() != scores.len() {
            return Err(Error::ScoreTableMismatch);
        }
        if edges.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(
                "score table edges must be sorted and distinct".into(),
            ));
        }
        Ok(EdgeScoreTable {
            kind,
            edges,
            scores,
        })
    }

    /// Table over all edges of `g`, in `g`'s edge order.
    pub fn for_graph(kind: ScoreKind, g: &RoadGraph, scores: Vec<f64>) -> Result<Self> {
        Self::new(kind, g.edges().to_vec(), scores)
    }

    pub fn kind(&self) -> ScoreKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn get(&self, e: Edge) -> Option<f64> {
        self.edges.binary_search(&e).ok().map(|k| self.scores[k])
    }

    pub fn iter(&self) -> impl Iterator<Item = (Edge, f64)> + '_ {
        self.edges.iter().copied().zip(self.scores.iter().copied())
    }

    /// True when the table scores exactly the edges of `g`.
    pub fn covers(&self, g: &RoadGraph) -> bool {
        self.edges == g.edges()
    }
}

/// `%.9g`-style formatting: nine significant digits, trailing zeros dropped.
pub fn format_sig9(x: f64) -> String {
    format_significant(x, 9)
}

pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let m = trim_zeros(mantissa);
        return format!("{m}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs());
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    let fixed = format!("{:.*}", decimals, x);
    let out = trim_zeros(&fixed);
    if out == "-0" {
        "0".to_string()
    } else {
        out.to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
