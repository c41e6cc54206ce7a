//! Plug-in HDR thresholds from score order statistics, labeling, and
//! majority-vote consensus across measures.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::measures::MeasureKind;
use crate::sample::{threshold_index, Orientation, ScoreVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    Inside,
    Outside,
}

impl Label {
    pub fn is_inside(self) -> bool {
        self == Label::Inside
    }

    pub fn flip(self) -> Label {
        match self {
            Label::Inside => Label::Outside,
            Label::Outside => Label::Inside,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LabelVector {
    pub labels: Vec<Label>,
}

impl LabelVector {
    pub fn new(labels: Vec<Label>) -> Self {
        LabelVector { labels }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn count_inside(&self) -> usize {
        self.labels.iter().filter(|l| l.is_inside()).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HdrRegion {
    pub threshold: f64,
    pub orientation: Orientation,
    pub alpha: f64,
    pub measure: Option<MeasureKind>,
}

impl HdrRegion {
    #[inline]
    pub fn contains(&self, score: f64) -> bool {
        match self.orientation {
            Orientation::Concentration => score >= self.threshold,
            Orientation::Sparsity => score <= self.threshold,
        }
    }

    pub fn with_measure(mut self, kind: MeasureKind) -> Self {
        self.measure = Some(kind);
        self
    }
}

/// Threshold at the ascending order statistic of rank
/// `threshold_index(n, alpha, orientation)`.
pub fn estimate_hdr(scores: &ScoreVector, alpha: f64) -> Result<HdrRegion> {
    let rank = threshold_index(scores.len(), alpha, scores.orientation())?;
    let mut sorted = scores.scores().to_vec();
    let (_, &mut threshold, _) = sorted.select_nth_unstable_by(rank - 1, f64::total_cmp);
    Ok(HdrRegion { threshold, orientation: scores.orientation(), alpha, measure: None })
}

pub fn classify(region: &HdrRegion, scores: &[f64]) -> LabelVector {
    LabelVector::new(scores.iter().map(|&s| if region.contains(s) { Label::Inside } else { Label::Outside }).collect())
}

/// Density-quantile form: the same estimator applied to density values
/// with Concentration orientation.
pub fn density_quantile_hdr(density_values: &[f64], alpha: f64) -> Result<HdrRegion> {
    let scores = ScoreVector::new(density_values.to_vec(), Orientation::Concentration)?;
    estimate_hdr(&scores, alpha)
}

/// Inside iff strictly more than half of the vectors say Inside.
pub fn measure_average(label_matrix: &[LabelVector]) -> Result<LabelVector> {
    let first = label_matrix.first().ok_or(Error::EmptySample)?;
    let len = first.len();
    if let Some(bad) = label_matrix.iter().find(|v| v.len() != len) {
        return Err(Error::LengthMismatch { left: len, right: bad.len() });
    }
    let m = label_matrix.len();
    let labels = (0..len)
        .map(|i| {
            let inside = label_matrix.iter().filter(|v| v.labels[i].is_inside()).count();
            if 2 * inside > m {
                Label::Inside
            } else {
                Label::Outside
            }
        })
        .collect();
    Ok(LabelVector::new(labels))
}
