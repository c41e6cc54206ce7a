//! The eight neighborhood measures. Each is fitted once on a sample and
//! then scores arbitrary query points.

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::copula::{
    copula_cdf, npcop_fit, npcop_pdf, npcop_rect_prob, select_copula_aic, CopulaFamily, CopulaModel, JointModel,
    NpCopulaFit, PseudoObservations, DEFAULT_CANDIDATES,
};
use crate::distributions::{fit_marginal_mle, MarginalFamily, MarginalModel};
use crate::error::{Error, Result};
use crate::math::{self, norm_pdf};
use crate::sample::{knn, Orientation, Point2, Sample2D, ScoreVector, SortedColumn};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MeasureKind {
    M0Kde,
    M0NpCop,
    M0PCop,
    M1KnnEucl,
    M2KnnCdf,
    M3EcdfRect,
    M3NpCopRect,
    M3PCopRect,
}

impl MeasureKind {
    pub const ALL: [MeasureKind; 8] = [
        MeasureKind::M0Kde,
        MeasureKind::M0NpCop,
        MeasureKind::M0PCop,
        MeasureKind::M1KnnEucl,
        MeasureKind::M2KnnCdf,
        MeasureKind::M3EcdfRect,
        MeasureKind::M3NpCopRect,
        MeasureKind::M3PCopRect,
    ];

    /// Short command-line name.
    pub fn name(self) -> &'static str {
        match self {
            MeasureKind::M0Kde => "m0-kde",
            MeasureKind::M0NpCop => "m0-npcop",
            MeasureKind::M0PCop => "m0-pcop",
            MeasureKind::M1KnnEucl => "m1",
            MeasureKind::M2KnnCdf => "m2",
            MeasureKind::M3EcdfRect => "m3-ecdf",
            MeasureKind::M3NpCopRect => "m3-npcop",
            MeasureKind::M3PCopRect => "m3-pcop",
        }
    }

    pub fn from_name(s: &str) -> Option<MeasureKind> {
        let s = s.trim().to_ascii_lowercase();
        MeasureKind::ALL.iter().copied().find(|k| k.name() == s).or(match s.as_str() {
            "m1-knn" | "m1-eucl" => Some(MeasureKind::M1KnnEucl),
            "m2-knn-cdf" | "m2-cdf" => Some(MeasureKind::M2KnnCdf),
            "m3" => Some(MeasureKind::M3EcdfRect),
            _ => None,
        })
    }

    pub fn orientation(self) -> Orientation {
        match self {
            MeasureKind::M1KnnEucl => Orientation::Sparsity,
            _ => Orientation::Concentration,
        }
    }

    pub fn uses_k(self) -> bool {
        matches!(self, MeasureKind::M1KnnEucl | MeasureKind::M2KnnCdf)
    }

    pub fn uses_eps(self) -> bool {
        matches!(self, MeasureKind::M3EcdfRect | MeasureKind::M3NpCopRect | MeasureKind::M3PCopRect)
    }

    pub fn is_parametric(self) -> bool {
        matches!(self, MeasureKind::M0PCop | MeasureKind::M3PCopRect)
    }

    pub fn is_model_based(self) -> bool {
        matches!(self, MeasureKind::M0NpCop | MeasureKind::M0PCop | MeasureKind::M3NpCopRect | MeasureKind::M3PCopRect)
    }
}

impl core::fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SupportClass {
    #[default]
    Unbounded,
    Simplex,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasureSpec {
    pub kind: MeasureKind,
    pub k: Option<usize>,
    pub eps: Option<f64>,
    pub copula_candidates: Option<Vec<CopulaFamily>>,
    pub marginal_families: Option<(MarginalFamily, MarginalFamily)>,
    pub support_class: SupportClass,
}

impl MeasureSpec {
    pub fn new(kind: MeasureKind) -> Self {
        MeasureSpec {
            kind,
            k: None,
            eps: None,
            copula_candidates: None,
            marginal_families: None,
            support_class: SupportClass::Unbounded,
        }
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.k = Some(k);
        self
    }

    pub fn with_eps(mut self, eps: f64) -> Self {
        self.eps = Some(eps);
        self
    }

    pub fn with_support(mut self, support: SupportClass) -> Self {
        self.support_class = support;
        self
    }

    pub fn with_marginals(mut self, f1: MarginalFamily, f2: MarginalFamily) -> Self {
        self.marginal_families = Some((f1, f2));
        self
    }

    pub fn with_candidates(mut self, c: Vec<CopulaFamily>) -> Self {
        self.copula_candidates = Some(c);
        self
    }
}

/// `round(sqrt(n / 2))`, at least 1.
pub fn heuristic_k(n: usize) -> usize {
    (libm::round(math::sqrt(n as f64 / 2.0)) as usize).max(1)
}

/// Neighbor count used for M2 regardless of n.
pub const M2_DEFAULT_K: usize = 30;

pub fn heuristic_eps(kind: MeasureKind, n: usize, support: SupportClass) -> Result<f64> {
    let ln_n = math::ln(n.max(1) as f64);
    let eps = match (kind, support) {
        (MeasureKind::M3EcdfRect, SupportClass::Unbounded) => math::exp(2.13 - 0.3 * ln_n),
        (MeasureKind::M3EcdfRect, SupportClass::Simplex) => 0.10,
        (MeasureKind::M3NpCopRect, SupportClass::Unbounded) => math::exp(1.74 - 0.26 * ln_n),
        (MeasureKind::M3NpCopRect, SupportClass::Simplex) => math::exp(-1.22 - 0.23 * ln_n),
        (MeasureKind::M3PCopRect, SupportClass::Unbounded) => math::exp(1.60 - 0.41 * ln_n),
        (MeasureKind::M3PCopRect, SupportClass::Simplex) => 0.02,
        _ => return Err(Error::NotEpsBased(kind)),
    };
    Ok(eps)
}

/// Normal-scale bandwidth for the bivariate Gaussian-kernel KDE:
/// `(4 / (d + 2))^(1 / (d + 4)) n^(-1 / (d + 4)) mean(sd_1, sd_2)` with d = 2.
pub fn kde_bandwidth(sample: &Sample2D) -> f64 {
    let n = sample.len() as f64;
    let s1 = math::mean_sd(&sample.column(0)).1;
    let s2 = math::mean_sd(&sample.column(1)).1;
    math::powf(n, -1.0 / 6.0) * 0.5 * (s1 + s2)
}

/// Univariate normal-scale bandwidth `(4/3)^(1/5) sd n^(-1/5)`.
pub fn kde1_bandwidth(column: &[f64]) -> f64 {
    let n = column.len() as f64;
    math::powf(4.0 / 3.0, 0.2) * math::mean_sd(column).1 * math::powf(n, -0.2)
}

/// Hyperparameters and fitted models actually used by a measure.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct HyperParams {
    pub k: Option<usize>,
    pub eps: Option<f64>,
    /// KDE bandwidth (bivariate for M0Kde; per-axis marginal bandwidths for M0NpCop).
    pub h: Option<(f64, f64)>,
    /// Copula-scale bandwidths of the nonparametric copula estimator.
    pub h_copula: Option<(f64, f64)>,
    pub copula: Option<CopulaModel>,
    pub marginals: Option<(MarginalModel, MarginalModel)>,
}

#[derive(Debug, Clone)]
struct EcdfPair {
    c1: SortedColumn,
    c2: SortedColumn,
}

impl EcdfPair {
    fn new(sample: &Sample2D) -> Result<Self> {
        Ok(EcdfPair { c1: SortedColumn::new(&sample.column(0))?, c2: SortedColumn::new(&sample.column(1))? })
    }

    #[inline]
    fn at(&self, p: Point2) -> (f64, f64) {
        (self.c1.ecdf(p.x1), self.c2.ecdf(p.x2))
    }
}

#[derive(Debug, Clone)]
enum State {
    Kde { points: Vec<Point2>, h: f64 },
    Knn { sample: Sample2D, k: usize },
    KnnCdf { sample: Sample2D, ecdf: EcdfPair, k: usize },
    EcdfRect { by_x1: Vec<Point2>, eps: f64 },
    NpCop { cols: (Vec<f64>, Vec<f64>), bw: (f64, f64), ecdf: EcdfPair, cop: NpCopulaFit },
    NpCopRect { ecdf: EcdfPair, cop: NpCopulaFit, eps: f64 },
    PCop { joint: JointModel },
    PCopRect { joint: JointModel, eps: f64 },
}

#[derive(Debug, Clone)]
pub struct FittedMeasure {
    spec: MeasureSpec,
    orientation: Orientation,
    n: usize,
    state: State,
    hyper: HyperParams,
}

fn wrap(kind: MeasureKind) -> impl Fn(Error) -> Error {
    move |e| match e {
        e @ Error::Measure { .. } => e,
        e => Error::Measure { kind, source: Box::new(e) },
    }
}

fn check_eps(eps: f64) -> Result<f64> {
    if eps > 0.0 && eps.is_finite() {
        Ok(eps)
    } else {
        Err(Error::invalid("eps must be positive and finite"))
    }
}

fn default_marginals(spec: &MeasureSpec) -> (MarginalFamily, MarginalFamily) {
    spec.marginal_families.unwrap_or(match spec.support_class {
        SupportClass::Unbounded => (MarginalFamily::Normal, MarginalFamily::Normal),
        SupportClass::Simplex => (MarginalFamily::Beta11a, MarginalFamily::Beta11a),
    })
}

/// Fits the parametric joint model: marginal MLE, parametric pseudo-
/// observations, then AIC copula selection.
pub fn fit_joint_model(
    sample: &Sample2D,
    families: (MarginalFamily, MarginalFamily),
    candidates: &[CopulaFamily],
) -> Result<JointModel> {
    let m1 = fit_marginal_mle(&sample.column(0), families.0)?.model;
    let m2 = fit_marginal_mle(&sample.column(1), families.1)?.model;
    let pseudo = PseudoObservations::from_marginals(sample, &m1, &m2);
    let (copula, _) = select_copula_aic(&pseudo, candidates)?;
    Ok(JointModel { m1, m2, copula })
}

pub const MIN_MODEL_OBS: usize = 20;

pub fn fit_measure(spec: &MeasureSpec, sample: &Sample2D) -> Result<FittedMeasure> {
    fit_measure_inner(spec, sample, None)
}

/// Like [`fit_measure`] for the parametric copula kinds, reusing an already
/// fitted joint model (from [`fit_joint_model`] on the same sample).
pub fn fit_measure_with_joint(spec: &MeasureSpec, sample: &Sample2D, joint: JointModel) -> Result<FittedMeasure> {
    if !spec.kind.is_parametric() {
        return Err(Error::invalid(alloc::format!("{} is not a parametric copula measure", spec.kind)));
    }
    fit_measure_inner(spec, sample, Some(joint))
}

fn fit_measure_inner(spec: &MeasureSpec, sample: &Sample2D, joint: Option<JointModel>) -> Result<FittedMeasure> {
    let kind = spec.kind;
    let n = sample.len();
    let mut spec = spec.clone();
    let mut hyper = HyperParams::default();
    if kind.is_model_based() && n < MIN_MODEL_OBS {
        return Err(wrap(kind)(Error::TooFewObservations { needed: MIN_MODEL_OBS, got: n }));
    }
    if kind.uses_k() {
        let k = spec.k.unwrap_or(if kind == MeasureKind::M2KnnCdf { M2_DEFAULT_K } else { heuristic_k(n) });
        if k == 0 || k > n {
            return Err(wrap(kind)(Error::KOutOfRange { k, n }));
        }
        spec.k = Some(k);
        hyper.k = Some(k);
    }
    if kind.uses_eps() {
        let eps = match spec.eps {
            Some(e) => e,
            None => heuristic_eps(kind, n, spec.support_class)?,
        };
        let eps = check_eps(eps).map_err(wrap(kind))?;
        spec.eps = Some(eps);
        hyper.eps = Some(eps);
    }
    let candidates: Vec<CopulaFamily> = spec.copula_candidates.clone().unwrap_or_else(|| DEFAULT_CANDIDATES.to_vec());
    let state = match kind {
        MeasureKind::M0Kde => {
            let h = kde_bandwidth(sample);
            if !(h > 0.0) {
                return Err(wrap(kind)(Error::DegenerateSample));
            }
            hyper.h = Some((h, h));
            State::Kde { points: sample.points().to_vec(), h }
        }
        MeasureKind::M1KnnEucl => State::Knn { sample: sample.clone(), k: spec.k.unwrap() },
        MeasureKind::M2KnnCdf => {
            State::KnnCdf { sample: sample.clone(), ecdf: EcdfPair::new(sample)?, k: spec.k.unwrap() }
        }
        MeasureKind::M3EcdfRect => {
            let mut by_x1 = sample.points().to_vec();
            by_x1.sort_by(|a, b| a.x1.total_cmp(&b.x1));
            State::EcdfRect { by_x1, eps: spec.eps.unwrap() }
        }
        MeasureKind::M0NpCop | MeasureKind::M3NpCopRect => {
            let pseudo = PseudoObservations::from_ranks(sample);
            let cop = npcop_fit(&pseudo).map_err(wrap(kind))?;
            hyper.h_copula = Some(cop.bandwidths());
            let ecdf = EcdfPair::new(sample)?;
            if kind == MeasureKind::M0NpCop {
                let cols = (sample.column(0), sample.column(1));
                let bw = (kde1_bandwidth(&cols.0), kde1_bandwidth(&cols.1));
                if !(bw.0 > 0.0 && bw.1 > 0.0) {
                    return Err(wrap(kind)(Error::DegenerateSample));
                }
                hyper.h = Some(bw);
                State::NpCop { cols, bw, ecdf, cop }
            } else {
                State::NpCopRect { ecdf, cop, eps: spec.eps.unwrap() }
            }
        }
        MeasureKind::M0PCop | MeasureKind::M3PCopRect => {
            let joint = match joint {
                Some(j) => j,
                None => fit_joint_model(sample, default_marginals(&spec), &candidates).map_err(wrap(kind))?,
            };
            hyper.copula = Some(joint.copula);
            hyper.marginals = Some((joint.m1, joint.m2));
            if kind == MeasureKind::M0PCop {
                State::PCop { joint }
            } else {
                State::PCopRect { joint, eps: spec.eps.unwrap() }
            }
        }
    };
    Ok(FittedMeasure { orientation: kind.orientation(), spec, n, state, hyper })
}

impl FittedMeasure {
    /// A parametric-copula measure built from a known joint model instead of
    /// a fit. `eps` is required for `M3PCopRect`.
    pub fn from_joint_model(kind: MeasureKind, joint: JointModel, eps: Option<f64>) -> Result<Self> {
        let mut spec = MeasureSpec::new(kind);
        let hyper = HyperParams {
            copula: Some(joint.copula),
            marginals: Some((joint.m1, joint.m2)),
            eps,
            ..HyperParams::default()
        };
        let state = match kind {
            MeasureKind::M0PCop => State::PCop { joint },
            MeasureKind::M3PCopRect => {
                let eps = check_eps(eps.ok_or(Error::invalid("M3PCopRect needs eps"))?)?;
                spec.eps = Some(eps);
                State::PCopRect { joint, eps }
            }
            other => return Err(Error::invalid(alloc::format!("{other} is not a parametric copula measure"))),
        };
        Ok(FittedMeasure { orientation: kind.orientation(), spec, n: 0, state, hyper })
    }

    /// M0Kde with an explicit bandwidth.
    pub fn kde_with_bandwidth(sample: &Sample2D, h: f64) -> Result<Self> {
        check_eps(h)?;
        Ok(FittedMeasure {
            spec: MeasureSpec::new(MeasureKind::M0Kde),
            orientation: Orientation::Concentration,
            n: sample.len(),
            state: State::Kde { points: sample.points().to_vec(), h },
            hyper: HyperParams { h: Some((h, h)), ..HyperParams::default() },
        })
    }

    pub fn kind(&self) -> MeasureKind {
        self.spec.kind
    }

    pub fn spec(&self) -> &MeasureSpec {
        &self.spec
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn hyperparams(&self) -> &HyperParams {
        &self.hyper
    }

    /// Size of the fitting sample (0 for injected models).
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn score(&self, x: Point2) -> f64 {
        match &self.state {
            State::Kde { points, h } => score_kde(points, *h, x),
            State::Knn { sample, k } => knn(sample, x, *k).map(|nn| nn.iter().map(|&(_, d)| d).sum()).unwrap_or(0.0),
            State::KnnCdf { sample, ecdf, k } => score_knn_cdf(sample, ecdf, *k, x),
            State::EcdfRect { by_x1, eps } => {
                let count = rect_count_sorted(by_x1, x, *eps);
                count as f64 / (by_x1.len() as f64 * 4.0 * eps * eps)
            }
            State::NpCop { cols, bw, ecdf, cop } => {
                let n = cols.0.len() as f64;
                let lo = 1.0 / (n + 1.0);
                let hi = n / (n + 1.0);
                let (f1, f2) = ecdf.at(x);
                let u = (f1 * n / (n + 1.0)).clamp(lo, hi);
                let v = (f2 * n / (n + 1.0)).clamp(lo, hi);
                let c = npcop_pdf(cop, u, v).unwrap_or(0.0);
                kde1(&cols.0, bw.0, x.x1) * kde1(&cols.1, bw.1, x.x2) * c
            }
            State::NpCopRect { ecdf, cop, eps } => {
                let lo = ecdf.at(Point2::new(x.x1 - eps, x.x2 - eps));
                let hi = ecdf.at(Point2::new(x.x1 + eps, x.x2 + eps));
                npcop_rect_prob(cop, lo.0, hi.0, lo.1, hi.1).unwrap_or(0.0) / (4.0 * eps * eps)
            }
            State::PCop { joint } => joint.pdf(x),
            State::PCopRect { joint, eps } => pcop_rect(joint, x, *eps) / (4.0 * eps * eps),
        }
    }

    pub fn score_all(&self, points: &[Point2]) -> Vec<f64> {
        points.iter().map(|&p| self.score(p)).collect()
    }

    /// Scores of the fitting sample itself, as a [`ScoreVector`].
    pub fn score_sample(&self, sample: &Sample2D) -> Result<ScoreVector> {
        ScoreVector::new(self.score_all(sample.points()), self.orientation)
    }
}

fn score_kde(points: &[Point2], h: f64, x: Point2) -> f64 {
    let inv2h2 = 0.5 / (h * h);
    let mut acc = 0.0;
    for p in points {
        acc += math::exp(-p.dist2(&x) * inv2h2);
    }
    acc * math::FRAC_1_2PI / (points.len() as f64 * h * h)
}

fn kde1(col: &[f64], h: f64, x: f64) -> f64 {
    let mut acc = 0.0;
    for &c in col {
        acc += norm_pdf((x - c) / h);
    }
    acc / (col.len() as f64 * h)
}

/// `d_P(x, y) / ||x - y||` given the marginal CDF values at both points.
pub fn cdf_distance_ratio(fx: (f64, f64), fy: (f64, f64), x: Point2, y: Point2) -> f64 {
    let d1 = fx.0 - fy.0;
    let d2 = fx.1 - fy.1;
    math::sqrt(d1 * d1 + d2 * d2) / x.dist(&y)
}

fn score_knn_cdf(sample: &Sample2D, ecdf: &EcdfPair, k: usize, x: Point2) -> f64 {
    if k <= 1 {
        return 0.0;
    }
    let nn = match knn(sample, x, k) {
        Ok(nn) => nn,
        Err(_) => return 0.0,
    };
    let fx = ecdf.at(x);
    let mut acc = 0.0;
    for &(i, d) in &nn[1..] {
        if d == 0.0 {
            continue;
        }
        let y = sample.get(i);
        acc += cdf_distance_ratio(fx, ecdf.at(y), x, y);
    }
    acc
}

fn rect_count_sorted(by_x1: &[Point2], x: Point2, eps: f64) -> usize {
    let (lo1, hi1) = (x.x1 - eps, x.x1 + eps);
    let (lo2, hi2) = (x.x2 - eps, x.x2 + eps);
    let start = by_x1.partition_point(|p| p.x1 < lo1);
    by_x1[start..].iter().take_while(|p| p.x1 <= hi1).filter(|p| p.x2 >= lo2 && p.x2 <= hi2).count()
}

/// Inclusion-exclusion of the joint CDF over the vertices of `[x - eps, x + eps]`.
fn pcop_rect(joint: &JointModel, x: Point2, eps: f64) -> f64 {
    let (m1, m2, c) = (&joint.m1, &joint.m2, &joint.copula);
    let u_lo = crate::distributions::marginal_cdf(m1, x.x1 - eps);
    let u_hi = crate::distributions::marginal_cdf(m1, x.x1 + eps);
    let v_lo = crate::distributions::marginal_cdf(m2, x.x2 - eps);
    let v_hi = crate::distributions::marginal_cdf(m2, x.x2 + eps);
    let p =
        copula_cdf(c, u_hi, v_hi) - copula_cdf(c, u_lo, v_hi) - copula_cdf(c, u_hi, v_lo) + copula_cdf(c, u_lo, v_lo);
    p.max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heuristics() {
        assert_eq!(heuristic_k(500), 16);
        assert_eq!(heuristic_k(50), 5);
        assert_eq!(heuristic_k(2), 1);
        let e = heuristic_eps(MeasureKind::M3EcdfRect, 500, SupportClass::Unbounded).unwrap();
        assert!((e - 1.30).abs() < 0.005, "{e}");
        let e = heuristic_eps(MeasureKind::M3PCopRect, 500, SupportClass::Unbounded).unwrap();
        assert!((e - 0.39).abs() < 0.005, "{e}");
        let e = heuristic_eps(MeasureKind::M3NpCopRect, 500, SupportClass::Unbounded).unwrap();
        assert!((e - 1.13).abs() < 0.005, "{e}");
        assert_eq!(heuristic_eps(MeasureKind::M3EcdfRect, 77, SupportClass::Simplex).unwrap(), 0.10);
        assert_eq!(
            heuristic_eps(MeasureKind::M1KnnEucl, 50, SupportClass::Unbounded),
            Err(Error::NotEpsBased(MeasureKind::M1KnnEucl))
        );
    }

    #[test]
    fn kde_examples() {
        let s = Sample2D::from_pairs(&[(0.0, 0.0)]).unwrap();
        let m = FittedMeasure::kde_with_bandwidth(&s, 1.0).unwrap();
        assert!((m.score(Point2::new(0.0, 0.0)) - 0.159_154_943_091_895_34).abs() < 1e-15);
        let far = m.score(Point2::new(3.0, 4.0));
        assert!((far - math::FRAC_1_2PI * libm::exp(-12.5)).abs() < 1e-20);
    }

    #[test]
    fn knn_examples() {
        let s = Sample2D::from_pairs(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]).unwrap();
        let m = fit_measure(&MeasureSpec::new(MeasureKind::M1KnnEucl).with_k(3), &s).unwrap();
        assert_eq!(m.score(Point2::new(0.0, 0.0)), 2.0);
        let m1 = fit_measure(&MeasureSpec::new(MeasureKind::M1KnnEucl).with_k(1), &s).unwrap();
        assert_eq!(m1.score(Point2::new(1.0, 0.0)), 0.0);
        let s = Sample2D::from_pairs(&[(0.0, 0.0), (2.0, 0.0)]).unwrap();
        let m = fit_measure(&MeasureSpec::new(MeasureKind::M1KnnEucl).with_k(2), &s).unwrap();
        assert_eq!(m.score(Point2::new(1.0, 0.0)), 2.0);
        assert_eq!(m.orientation(), Orientation::Sparsity);
    }

    #[test]
    fn knn_cdf_examples() {
        let s = Sample2D::from_pairs(&[(0.0, 0.0), (1.0, 1.0)]).unwrap();
        let m = fit_measure(&MeasureSpec::new(MeasureKind::M2KnnCdf).with_k(2), &s).unwrap();
        assert!((m.score(Point2::new(0.0, 0.0)) - 0.5).abs() < 1e-15);
        let m = fit_measure(&MeasureSpec::new(MeasureKind::M2KnnCdf).with_k(1), &s).unwrap();
        assert_eq!(m.score(Point2::new(0.3, 0.2)), 0.0);
        let dup = Sample2D::from_pairs(&[(0.0, 0.0), (0.0, 0.0), (1.0, 1.0)]).unwrap();
        let m = fit_measure(&MeasureSpec::new(MeasureKind::M2KnnCdf).with_k(3), &dup).unwrap();
        assert!(m.score(Point2::new(0.0, 0.0)).is_finite());
    }

    #[test]
    fn m2_triangle_violation() {
        let phi = |t: f64| math::norm_cdf(t);
        let p = |t: f64| Point2::new(t, 0.0);
        let f = |t: f64| (phi(t), 0.5);
        let d = |a: f64, b: f64| cdf_distance_ratio(f(a), f(b), p(a), p(b));
        assert!(d(1.0, 2.0) > d(1.0, 3.0) + d(3.0, 2.0));
        assert_eq!(d(1.0, 2.0), d(2.0, 1.0));
    }

    #[test]
    fn ecdf_rect_example() {
        let s = Sample2D::from_pairs(&[(0.0, 0.0), (5.0, 5.0), (-5.0, 3.0), (9.0, 9.0)]).unwrap();
        let m = fit_measure(&MeasureSpec::new(MeasureKind::M3EcdfRect).with_eps(0.5), &s).unwrap();
        assert_eq!(m.score(Point2::new(0.1, 0.1)), 0.25);
        assert!(fit_measure(&MeasureSpec::new(MeasureKind::M3EcdfRect).with_eps(0.0), &s).is_err());
    }

    #[test]
    fn independence_uniform_rect_is_one() {
        let u = MarginalModel::Uniform { lo: 0.0, hi: 1.0 };
        let joint = JointModel { m1: u, m2: u, copula: CopulaModel::Independence };
        for eps in [0.01, 0.1, 0.2] {
            let m = FittedMeasure::from_joint_model(MeasureKind::M3PCopRect, joint, Some(eps)).unwrap();
            let s = m.score(Point2::new(0.4, 0.7));
            assert!((s - 1.0).abs() < 1e-12, "eps={eps} s={s}");
        }
        let m = FittedMeasure::from_joint_model(MeasureKind::M0PCop, joint, None).unwrap();
        assert!((m.score(Point2::new(0.4, 0.7)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn k_defaults() {
        let pts: Vec<(f64, f64)> = (0..50).map(|i| (i as f64, (i * i % 7) as f64)).collect();
        let s = Sample2D::from_pairs(&pts).unwrap();
        let m = fit_measure(&MeasureSpec::new(MeasureKind::M1KnnEucl), &s).unwrap();
        assert_eq!(m.hyperparams().k, Some(5));
        let m = fit_measure(&MeasureSpec::new(MeasureKind::M2KnnCdf), &s).unwrap();
        assert_eq!(m.hyperparams().k, Some(30));
        let small = Sample2D::from_pairs(&pts[..10]).unwrap();
        let err = fit_measure(&MeasureSpec::new(MeasureKind::M2KnnCdf), &small).unwrap_err();
        assert!(matches!(err, Error::Measure { kind: MeasureKind::M2KnnCdf, .. }));
    }
}
