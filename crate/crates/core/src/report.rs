//! Score histograms, curvature/betweenness correlation, and tabular and
//! GeoJSON exports.

use std::io::Write;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::attack::TvrCurve;
use crate::error::{Error, Result};
use crate::graph::RoadGraph;
use crate::scores::{format_sig9, EdgeScoreTable};

pub const DEFAULT_BINS: usize = 40;
/// Theoretical curvature range for unit-length edges.
pub const CURVATURE_RANGE: (f64, f64) = (-2.0, 1.0);

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub bin_edges: Vec<f64>,
    pub counts: Vec<usize>,
    pub frequencies: Vec<f64>,
    /// Values that fell outside the range and were clamped into an end bin.
    pub out_of_range: usize,
}

pub fn histogram(scores: &EdgeScoreTable, bins: usize, range: (f64, f64)) -> Result<Histogram> {
    histogram_of(scores.scores(), bins, range)
}

/// Uniform-width histogram of raw values over `[lo, hi]`; `hi` itself lands
/// in the last bin.
pub fn histogram_of(values: &[f64], bins: usize, (lo, hi): (f64, f64)) -> Result<Histogram> {
    if values.is_empty() {
        return Err(Error::EmptyScores);
    }
    if bins == 0 {
        return Err(Error::InvalidArgument("bins must be at least 1".into()));
    }
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidArgument(format!(
            "invalid histogram range ({lo}, {hi})"
        )));
    }
    let width = (hi - lo) / bins as f64;
    let mut bin_edges: Vec<f64> = (0..bins).map(|i| lo + width * i as f64).collect();
    bin_edges.push(hi);

    let mut counts = vec![0usize; bins];
    let mut out_of_range = 0;
    for &x in values {
        if !(lo..=hi).contains(&x) {
            out_of_range += 1;
        }
        let raw = ((x - lo) / width).floor();
        let k = if raw.is_nan() || raw < 0.0 {
            0
        } else {
            (raw as usize).min(bins - 1)
        };
        counts[k] += 1;
    }
    let total = values.len() as f64;
    let frequencies = counts.iter().map(|&c| c as f64 / total).collect();
    Ok(Histogram {
        bin_edges,
        counts,
        frequencies,
        out_of_range,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationReport {
    pub pearson_r: f64,
    pub n: usize,
    pub mean_x: f64,
    pub mean_y: f64,
    pub std_x: f64,
    pub std_y: f64,
}

/// Sample Pearson correlation between two tables over the same edges.
pub fn correlate(a: &EdgeScoreTable, b: &EdgeScoreTable) -> Result<CorrelationReport> {
    if a.edges() != b.edges() {
        return Err(Error::ScoreTableMismatch);
    }
    pearson(a.scores(), b.scores())
}

/// Pearson correlation of paired samples; `x` is labeled "first" and `y`
/// "second" in zero-variance errors.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<CorrelationReport> {
    if x.len() != y.len() {
        return Err(Error::ScoreTableMismatch);
    }
    let n = x.len();
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "correlation needs at least 3 pairs, got {n}"
        )));
    }
    let nf = n as f64;
    let mean_x = x.iter().sum::<f64>() / nf;
    let mean_y = y.iter().sum::<f64>() / nf;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (&a, &b) in x.iter().zip(y) {
        let (dx, dy) = (a - mean_x, b - mean_y);
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxx == 0.0 {
        return Err(Error::ZeroVariance("first"));
    }
    if syy == 0.0 {
        return Err(Error::ZeroVariance("second"));
    }
    let r = (sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0);
    Ok(CorrelationReport {
        pearson_r: r,
        n,
        mean_x,
        mean_y,
        std_x: (sxx / (nf - 1.0)).sqrt(),
        std_y: (syy / (nf - 1.0)).sqrt(),
    })
}

/// LineString feature collection, one feature per edge in `(u, v)` order.
pub fn export_geojson(g: &RoadGraph, tables: &[&EdgeScoreTable]) -> Result<Value> {
    let missing: Vec<String> = (0..g.node_count())
        .filter(|&n| g.coord(n).is_none())
        .map(|n| g.id(n).to_string())
        .collect();
    if !missing.is_empty() {
        return Err(Error::MissingCoordinates(missing));
    }
    for (i, t) in tables.iter().enumerate() {
        if !t.covers(g) {
            return Err(Error::ScoreTableMismatch);
        }
        if tables[..i].iter().any(|o| o.kind() == t.kind()) {
            return Err(Error::InvalidArgument(format!(
                "two {} tables given",
                t.kind()
            )));
        }
    }

    let features: Vec<Value> = g
        .edges()
        .iter()
        .enumerate()
        .map(|(k, e)| {
            let (a, b) = (g.coord(e.u).unwrap(), g.coord(e.v).unwrap());
            let mut props = Map::new();
            props.insert("u".into(), json!(g.id(e.u)));
            props.insert("v".into(), json!(g.id(e.v)));
            for t in tables {
                props.insert(t.kind().column().into(), json!(t.scores()[k]));
            }
            json!({
                "type": "Feature",
                "geometry": {
                    "type": "LineString",
                    "coordinates": [[a.0, a.1], [b.0, b.1]],
                },
                "properties": props,
            })
        })
        .collect();
    Ok(json!({ "type": "FeatureCollection", "features": features }))
}

/// `u,v,<kind>` rows in edge order, values to nine significant digits.
pub fn write_scores_csv<W: Write>(g: &RoadGraph, table: &EdgeScoreTable, w: W) -> Result<()> {
    if !table.covers(g) {
        return Err(Error::ScoreTableMismatch);
    }
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["u", "v", table.kind().column()])?;
    for (e, s) in table.iter() {
        wtr.write_record([g.id(e.u), g.id(e.v), &format_sig9(s)])?;
    }
    wtr.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}

pub fn write_histogram_csv<W: Write>(h: &Histogram, w: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["bin_lo", "bin_hi", "count", "frequency"])?;
    for (k, (&c, &f)) in h.counts.iter().zip(&h.frequencies).enumerate() {
        wtr.write_record([
            h.bin_edges[k].to_string(),
            h.bin_edges[k + 1].to_string(),
            c.to_string(),
            f.to_string(),
        ])?;
    }
    wtr.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}

pub fn write_tvr_csv<W: Write>(curves: &[TvrCurve], w: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record([
        "strategy",
        "fraction_removed",
        "tvr_mean",
        "tvr_std",
        "trials",
    ])?;
    for c in curves {
        for s in &c.samples {
            wtr.write_record([
                c.strategy.label().to_string(),
                s.fraction_removed.to_string(),
                s.tvr_mean.to_string(),
                s.tvr_std.to_string(),
                s.trials.to_string(),
            ])?;
        }
    }
    wtr.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scores::ScoreKind;

    #[test]
    fn direct_binning() {
        let h = histogram_of(&[-0.5, -0.5, 0.5], 3, (-1.0, 1.0)).unwrap();
        assert_eq!(h.counts, vec![2, 0, 1]);
        assert_eq!(h.bin_edges.len(), 4);
        assert_eq!(h.out_of_range, 0);
    }

    #[test]
    fn upper_bound_lands_in_last_bin_and_outliers_clamp() {
        let h = histogram_of(&[1.0, -3.0, 2.0, 0.0], 4, (-2.0, 1.0)).unwrap();
        assert_eq!(h.counts, vec![1, 0, 1, 2]);
        assert_eq!(h.out_of_range, 2);
        let s: f64 = h.frequencies.iter().sum();
        assert!((s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn identical_values_fill_one_bin() {
        let h = histogram_of(&[0.25; 17], 40, CURVATURE_RANGE).unwrap();
        assert_eq!(h.counts.iter().filter(|&&c| c > 0).count(), 1);
        assert_eq!(h.counts.iter().sum::<usize>(), 17);
    }

    #[test]
    fn histogram_errors() {
        assert!(matches!(
            histogram_of(&[], 3, (0.0, 1.0)),
            Err(Error::EmptyScores)
        ));
        assert!(histogram_of(&[0.0], 0, (0.0, 1.0)).is_err());
        assert!(histogram_of(&[0.0], 2, (1.0, 1.0)).is_err());
    }

    #[test]
    fn pearson_examples() {
        let a = [1.0, 2.0, 3.0, 5.0, 8.0];
        let affine: Vec<f64> = a.iter().map(|x| 2.0 * x + 7.0).collect();
        assert!((pearson(&a, &affine).unwrap().pearson_r - 1.0).abs() < 1e-15);
        let neg: Vec<f64> = a.iter().map(|x| -x).collect();
        assert!((pearson(&a, &neg).unwrap().pearson_r + 1.0).abs() < 1e-15);
        let r = pearson(&[1.0, 2.0, 3.0], &[2.0, 1.0, 3.0]).unwrap();
        assert!((r.pearson_r - 0.5).abs() < 1e-15);
        assert_eq!(r.n, 3);
        assert_eq!((r.mean_x, r.mean_y), (2.0, 2.0));
    }

    #[test]
    fn pearson_errors() {
        assert!(matches!(
            pearson(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]),
            Err(Error::ZeroVariance("first"))
        ));
        assert!(matches!(
            pearson(&[1.0, 2.0, 3.0], &[4.0, 4.0, 4.0]),
            Err(Error::ZeroVariance("second"))
        ));
        assert!(pearson(&[1.0, 2.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn correlate_requires_same_edges() {
        let g = RoadGraph::from_edges([("a", "b"), ("b", "c"), ("c", "d")]).unwrap();
        let h = RoadGraph::from_edges([("a", "b"), ("b", "c"), ("a", "d")]).unwrap();
        let t1 = EdgeScoreTable::for_graph(ScoreKind::Curvature, &g, vec![1.0, 2.0, 3.0]).unwrap();
        let t2 =
            EdgeScoreTable::for_graph(ScoreKind::Betweenness, &h, vec![1.0, 2.0, 3.0]).unwrap();
        assert!(matches!(
            correlate(&t1, &t2),
            Err(Error::ScoreTableMismatch)
        ));
    }

    #[test]
    fn geojson_needs_coordinates() {
        let g = RoadGraph::from_edges([("a", "b")]).unwrap();
        assert!(
            matches!(export_geojson(&g, &[]), Err(Error::MissingCoordinates(ids)) if ids == ["a", "b"])
        );
    }

    #[test]
    fn csv_exports() {
        let g = RoadGraph::from_edges([("a", "b"), ("b", "c")]).unwrap();
        let t = EdgeScoreTable::for_graph(ScoreKind::Curvature, &g, vec![-2.0 / 3.0, 0.0]).unwrap();
        let mut out = Vec::new();
        write_scores_csv(&g, &t, &mut out).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "u,v,kappa\na,b,-0.666666667\nb,c,0\n"
        );

        let h = histogram_of(&[-0.5, -0.5, 0.5], 2, (-1.0, 1.0)).unwrap();
        let mut out = Vec::new();
        write_histogram_csv(&h, &mut out).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "bin_lo,bin_hi,count,frequency\n-1,0,2,0.6666666666666666\n0,1,1,0.3333333333333333\n"
        );
    }
}
