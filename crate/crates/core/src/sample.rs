//! Data carriers, empirical CDFs, nearest-neighbor search and the
//! order-statistic rank rule shared by every estimator.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::math;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2 {
    pub x1: f64,
    pub x2: f64,
}

impl Point2 {
    pub const fn new(x1: f64, x2: f64) -> Self {
        Point2 { x1, x2 }
    }

    #[inline]
    pub fn is_finite(&self) -> bool {
        self.x1.is_finite() && self.x2.is_finite()
    }

    #[inline]
    pub fn dist2(&self, other: &Point2) -> f64 {
        let d1 = self.x1 - other.x1;
        let d2 = self.x2 - other.x2;
        d1 * d1 + d2 * d2
    }

    #[inline]
    pub fn dist(&self, other: &Point2) -> f64 {
        math::sqrt(self.dist2(other))
    }
}

impl From<(f64, f64)> for Point2 {
    fn from((x1, x2): (f64, f64)) -> Self {
        Point2 { x1, x2 }
    }
}

/// An immutable, ordered bivariate sample. Index `i` identifies `x_i` for
/// the lifetime of the value.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample2D {
    points: Vec<Point2>,
}

impl Sample2D {
    pub fn new(points: Vec<Point2>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptySample);
        }
        if let Some(i) = points.iter().position(|p| !p.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Sample2D { points })
    }

    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        Self::new(pairs.iter().copied().map(Point2::from).collect())
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.points.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    #[inline]
    pub fn get(&self, i: usize) -> Point2 {
        self.points[i]
    }

    pub fn column(&self, axis: usize) -> Vec<f64> {
        match axis {
            0 => self.points.iter().map(|p| p.x1).collect(),
            _ => self.points.iter().map(|p| p.x2).collect(),
        }
    }

    pub fn into_points(self) -> Vec<Point2> {
        self.points
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// Large scores mean low density.
    Sparsity,
    /// Large scores mean high density.
    Concentration,
}

/// Scores aligned with the indices of the sample they were computed on.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreVector {
    scores: Vec<f64>,
    orientation: Orientation,
}

impl ScoreVector {
    pub fn new(scores: Vec<f64>, orientation: Orientation) -> Result<Self> {
        if scores.is_empty() {
            return Err(Error::EmptySample);
        }
        if let Some(i) = scores.iter().position(|s| !s.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(ScoreVector { scores, orientation })
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }
}

/// Empirical CDF of a single column: `(1/n) #{i : column[i] <= t}`.
pub fn ecdf1(column: &[f64], t: f64) -> Result<f64> {
    if column.is_empty() {
        return Err(Error::EmptySample);
    }
    let count = column.iter().filter(|&&x| x <= t).count();
    Ok(count as f64 / column.len() as f64)
}

/// A sorted copy of one column, for repeated ECDF evaluation in O(log n).
#[derive(Debug, Clone, PartialEq)]
pub struct SortedColumn {
    sorted: Vec<f64>,
}

impl SortedColumn {
    pub fn new(column: &[f64]) -> Result<Self> {
        if column.is_empty() {
            return Err(Error::EmptySample);
        }
        let mut sorted = column.to_vec();
        sorted.sort_by(f64::total_cmp);
        Ok(SortedColumn { sorted })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    /// Number of entries `<= t`.
    #[inline]
    pub fn count_le(&self, t: f64) -> usize {
        self.sorted.partition_point(|&x| x <= t)
    }

    #[inline]
    pub fn ecdf(&self, t: f64) -> f64 {
        self.count_le(t) as f64 / self.sorted.len() as f64
    }

    pub fn values(&self) -> &[f64] {
        &self.sorted
    }
}

/// Number of sample points inside the closed rectangle `[lo, hi]`.
pub fn rect_count(sample: &Sample2D, lo: Point2, hi: Point2) -> Result<usize> {
    if !(lo.x1 <= hi.x1 && lo.x2 <= hi.x2) {
        return Err(Error::DegenerateRectangle);
    }
    Ok(sample.points().iter().filter(|p| p.x1 >= lo.x1 && p.x1 <= hi.x1 && p.x2 >= lo.x2 && p.x2 <= hi.x2).count())
}

#[inline]
fn by_distance_then_index(a: &(f64, usize), b: &(f64, usize)) -> Ordering {
    a.0.total_cmp(&b.0).then(a.1.cmp(&b.1))
}

/// The `k` nearest sample points to `query` as `(index, distance)` pairs,
/// ascending by distance with ties broken by ascending index.
pub fn knn(sample: &Sample2D, query: Point2, k: usize) -> Result<Vec<(usize, f64)>> {
    let n = sample.len();
    if k == 0 || k > n {
        return Err(Error::KOutOfRange { k, n });
    }
    let mut d: Vec<(f64, usize)> = sample.points().iter().enumerate().map(|(i, p)| (p.dist2(&query), i)).collect();
    if k < n {
        d.select_nth_unstable_by(k - 1, by_distance_then_index);
        d.truncate(k);
    }
    d.sort_unstable_by(by_distance_then_index);
    Ok(d.into_iter().map(|(d2, i)| (i, math::sqrt(d2))).collect())
}

pub fn knn_indices(sample: &Sample2D, query: Point2, k: usize) -> Result<Vec<usize>> {
    Ok(knn(sample, query, k)?.into_iter().map(|(i, _)| i).collect())
}

// Guards floor/ceil against representation error such as 0.95 * 100 = 94.999...
const RANK_SLACK: f64 = 1e-9;

/// 1-based ascending order-statistic rank of the HDR threshold:
/// `max(1, floor(alpha n))` for concentration measures and
/// `min(n, ceil((1 - alpha) n))` for sparsity measures.
pub fn threshold_index(n: usize, alpha: f64, orientation: Orientation) -> Result<usize> {
    if n == 0 {
        return Err(Error::ZeroCount);
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidAlpha(alpha));
    }
    let nf = n as f64;
    let rank = match orientation {
        Orientation::Concentration => libm::floor(alpha * nf + RANK_SLACK) as usize,
        Orientation::Sparsity => libm::ceil((1.0 - alpha) * nf - RANK_SLACK) as usize,
    };
    Ok(rank.clamp(1, n))
}
