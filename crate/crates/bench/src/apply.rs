//! HDR labels for two columns of an external CSV file.

use std::io::Write;
use std::path::{Path, PathBuf};

use hdr_core::prelude::*;

use crate::config::MeasureChoice;
use crate::csvio::{fmt_full, is_missing};
use crate::error::{usage, BenchError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scale {
    None,
    #[default]
    ZScore,
}

impl std::str::FromStr for Scale {
    type Err = BenchError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "none" => Ok(Scale::None),
            "zscore" | "z-score" => Ok(Scale::ZScore),
            _ => Err(usage(format!("unknown scale {s:?} (none, zscore)"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ApplyConfig {
    pub input: PathBuf,
    pub col_x: String,
    pub col_y: String,
    pub measures: Vec<MeasureChoice>,
    pub alpha: f64,
    pub scale: Scale,
    pub support: SupportClass,
}

#[derive(Debug, Clone)]
pub struct Applied {
    /// Points as read, before scaling.
    pub points: Vec<Point2>,
    /// Number of input rows dropped for missing values.
    pub dropped: usize,
    pub labels: Vec<(String, LabelVector)>,
    pub consensus: LabelVector,
}

/// Reads two numeric columns by header name. Rows with a missing value in
/// either column are dropped; the count is returned alongside the points.
pub fn read_columns(path: &Path, col_x: &str, col_y: &str) -> Result<(Vec<Point2>, usize)> {
    let csv_err = |source| BenchError::Csv { path: path.to_owned(), source };
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_path(path).map_err(csv_err)?;
    let headers = rdr.headers().map_err(csv_err)?.clone();
    let find = |name: &str| {
        headers.iter().position(|h| h.trim() == name).ok_or_else(|| BenchError::UnknownColumn {
            path: path.to_owned(),
            name: name.to_string(),
            available: headers.iter().collect::<Vec<_>>().join(", "),
        })
    };
    let (ix, iy) = (find(col_x)?, find(col_y)?);
    let mut points = Vec::new();
    let mut dropped = 0;
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        // the header is row 1
        let row = i + 2;
        let (cx, cy) = (rec.get(ix).unwrap_or(""), rec.get(iy).unwrap_or(""));
        if is_missing(cx) || is_missing(cy) {
            dropped += 1;
            continue;
        }
        let num = |cell: &str, column: &str| match cell.trim().parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(BenchError::NonNumeric {
                path: path.to_owned(),
                row,
                column: column.to_string(),
                value: cell.to_string(),
            }),
        };
        points.push(Point2::new(num(cx, col_x)?, num(cy, col_y)?));
    }
    Ok((points, dropped))
}

fn zscore(points: &[Point2]) -> Result<Vec<Point2>> {
    let n = points.len() as f64;
    let stats = |v: &dyn Fn(&Point2) -> f64| {
        let mean = points.iter().map(v).sum::<f64>() / n;
        let var = points.iter().map(|p| (v(p) - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (mean, var.sqrt())
    };
    let (m1, s1) = stats(&|p| p.x1);
    let (m2, s2) = stats(&|p| p.x2);
    if !(s1 > 0.0 && s2 > 0.0) {
        return Err(BenchError::Data("cannot z-score a constant column".into()));
    }
    Ok(points.iter().map(|p| Point2::new((p.x1 - m1) / s1, (p.x2 - m2) / s2)).collect())
}

pub fn run_apply(cfg: &ApplyConfig) -> Result<Applied> {
    crate::config::parse_alpha(cfg.alpha)?;
    if cfg.measures.is_empty() {
        return Err(usage("no measures given"));
    }
    let (points, dropped) = read_columns(&cfg.input, &cfg.col_x, &cfg.col_y)?;
    if dropped > 0 {
        log::info!("dropped {dropped} rows with missing values");
    }
    if points.len() < 2 {
        return Err(BenchError::Data(format!("{} usable rows; need at least 2", points.len())));
    }
    let scaled = match cfg.scale {
        Scale::None => points.clone(),
        Scale::ZScore => zscore(&points)?,
    };
    let sample = Sample2D::new(scaled)?;
    let mut labels = Vec::new();
    for choice in &cfg.measures {
        let mut spec = MeasureSpec::new(choice.kind).with_support(cfg.support);
        if let Some(k) = choice.k {
            spec = spec.with_k(k);
        }
        if let Some(e) = choice.eps {
            spec = spec.with_eps(e);
        }
        let fitted = fit_measure(&spec, &sample)?;
        let scores = fitted.score_sample(&sample)?;
        let region = estimate_hdr(&scores, cfg.alpha)?;
        let l = classify(&region, scores.scores());
        log::info!("{}: {} of {} inside", choice.label(), l.count_inside(), l.len());
        labels.push((choice.label(), l));
    }
    let matrix: Vec<LabelVector> = labels.iter().map(|(_, l)| l.clone()).collect();
    let consensus = measure_average(&matrix)?;
    Ok(Applied { points, dropped, labels, consensus })
}

fn label_str(l: Label) -> &'static str {
    if l.is_inside() {
        "inside"
    } else {
        "outside"
    }
}

pub fn write_labeled<W: Write>(w: W, cfg: &ApplyConfig, out: &Applied) -> csv::Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    let mut header = vec![cfg.col_x.clone(), cfg.col_y.clone()];
    header.extend(out.labels.iter().map(|(name, _)| name.clone()));
    header.push("consensus".into());
    wtr.write_record(&header)?;
    for (i, p) in out.points.iter().enumerate() {
        let mut row = vec![fmt_full(p.x1), fmt_full(p.x2)];
        row.extend(out.labels.iter().map(|(_, l)| label_str(l.labels[i]).to_string()));
        row.push(label_str(out.consensus.labels[i]).to_string());
        wtr.write_record(&row)?;
    }
    wtr.flush()?;
    Ok(())
}
