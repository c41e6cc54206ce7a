//! Confusion counts (Outside is the positive class), the six performance
//! metrics and replicate aggregation.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::hdr::{Label, LabelVector};
use crate::math;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub struct ConfusionCounts {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    pub fn_: u64,
}

impl ConfusionCounts {
    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.tn + self.fn_
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MetricsRow {
    pub err: f64,
    pub fpr: f64,
    pub fnr: f64,
    pub accuracy: f64,
    /// Sum of the positive- and negative-class F1 scores, in [0, 2].
    pub f1: f64,
    pub mcc: f64,
}

impl MetricsRow {
    pub const NAMES: [&'static str; 6] = ["err", "fpr", "fnr", "accuracy", "f1", "mcc"];

    pub fn values(&self) -> [f64; 6] {
        [self.err, self.fpr, self.fnr, self.accuracy, self.f1, self.mcc]
    }
}

pub fn confusion(pred: &LabelVector, truth: &LabelVector) -> Result<ConfusionCounts> {
    if pred.len() != truth.len() {
        return Err(Error::LengthMismatch { left: pred.len(), right: truth.len() });
    }
    let mut c = ConfusionCounts::default();
    for (p, t) in pred.labels.iter().zip(&truth.labels) {
        match (p, t) {
            (Label::Outside, Label::Outside) => c.tp += 1,
            (Label::Inside, Label::Inside) => c.tn += 1,
            (Label::Outside, Label::Inside) => c.fp += 1,
            (Label::Inside, Label::Outside) => c.fn_ += 1,
        }
    }
    Ok(c)
}

#[inline]
fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

pub fn metrics(c: &ConfusionCounts) -> Result<MetricsRow> {
    let total = c.total();
    if total == 0 {
        return Err(Error::EmptyCounts);
    }
    let (tp, fp, tn, fn_) = (c.tp as f64, c.fp as f64, c.tn as f64, c.fn_ as f64);
    let n = total as f64;
    let accuracy = (tp + tn) / n;
    let err = 1.0 - accuracy;
    let fnr = ratio(fn_, fn_ + tp);
    let fpr = ratio(fp, fp + tn);
    let f1 = ratio(2.0 * tp, 2.0 * tp + fp + fn_) + ratio(2.0 * tn, 2.0 * tn + fp + fn_);
    let factors = [tp + fp, tp + fn_, tn + fp, tn + fn_];
    let mcc = if factors.contains(&0.0) { 0.0 } else { (tp * tn - fp * fn_) / math::sqrt(factors.iter().product()) };
    Ok(MetricsRow { err, fpr, fnr, accuracy, f1, mcc })
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MeanSd {
    pub mean: f64,
    pub sd: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MetricsSummary {
    pub err: MeanSd,
    pub fpr: MeanSd,
    pub fnr: MeanSd,
    pub accuracy: MeanSd,
    pub f1: MeanSd,
    pub mcc: MeanSd,
}

impl MetricsSummary {
    pub fn values(&self) -> [MeanSd; 6] {
        [self.err, self.fpr, self.fnr, self.accuracy, self.f1, self.mcc]
    }
}

/// Per-metric mean and (n - 1)-denominator standard deviation.
pub fn aggregate(rows: &[MetricsRow]) -> Result<MetricsSummary> {
    if rows.len() < 2 {
        return Err(Error::TooFewRows(rows.len()));
    }
    let col = |f: fn(&MetricsRow) -> f64| {
        let xs: Vec<f64> = rows.iter().map(f).collect();
        let (mean, sd) = math::mean_sd(&xs);
        MeanSd { mean, sd }
    };
    Ok(MetricsSummary {
        err: col(|r| r.err),
        fpr: col(|r| r.fpr),
        fnr: col(|r| r.fnr),
        accuracy: col(|r| r.accuracy),
        f1: col(|r| r.f1),
        mcc: col(|r| r.mcc),
    })
}
