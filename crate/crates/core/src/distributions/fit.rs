//! Maximum-likelihood fitting of the marginal families.

use alloc::vec::Vec;

use super::{marginal_ln_pdf, MarginalFamily, MarginalModel};
use crate::error::{Error, Result};
use crate::math::{self, norm_pdf};

#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    pub model: MarginalModel,
    pub loglik: f64,
    pub iterations: usize,
    pub converged: bool,
}

pub const MIN_FIT_OBS: usize = 10;
const EM_TOL: f64 = 1e-8;
const EM_MAX_ITER: usize = 500;

/// ν grid {1, 1.5, ..., 30} for the Student-t marginal profile.
pub fn t_nu_grid() -> impl Iterator<Item = f64> {
    (2..=60).map(|i| i as f64 * 0.5)
}

pub fn loglik(model: &MarginalModel, column: &[f64]) -> f64 {
    column.iter().map(|&x| marginal_ln_pdf(model, x)).sum()
}

pub fn fit_marginal_mle(column: &[f64], family: MarginalFamily) -> Result<FitReport> {
    if column.len() < MIN_FIT_OBS {
        return Err(Error::TooFewObservations { needed: MIN_FIT_OBS, got: column.len() });
    }
    if let Some(i) = column.iter().position(|x| !x.is_finite()) {
        return Err(Error::NonFinite(i));
    }
    let first = column[0];
    if column.iter().all(|&x| x == first) {
        return Err(Error::DegenerateSample);
    }
    match family {
        MarginalFamily::Normal => {
            let n = column.len() as f64;
            let mu = column.iter().sum::<f64>() / n;
            let var = column.iter().map(|x| (x - mu) * (x - mu)).sum::<f64>() / n;
            let model = MarginalModel::Normal { mu, sigma: math::sqrt(var) };
            Ok(FitReport { model, loglik: loglik(&model, column), iterations: 1, converged: true })
        }
        MarginalFamily::StudentT => {
            let mut best: Option<(MarginalModel, f64)> = None;
            let mut iterations = 0;
            for nu in t_nu_grid() {
                iterations += 1;
                let model = MarginalModel::StudentT { nu };
                let ll = loglik(&model, column);
                if best.as_ref().is_none_or(|&(_, b)| ll > b) {
                    best = Some((model, ll));
                }
            }
            let (model, ll) = best.expect("grid is nonempty");
            Ok(FitReport { model, loglik: ll, iterations, converged: ll.is_finite() })
        }
        MarginalFamily::NormalMixture => fit_mixture(column),
        MarginalFamily::Uniform => {
            let (lo, hi) =
                column.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
            let model = MarginalModel::Uniform { lo, hi };
            Ok(FitReport { model, loglik: loglik(&model, column), iterations: 1, converged: true })
        }
        MarginalFamily::Beta11a => {
            if column.iter().any(|&x| !(0.0..1.0).contains(&x)) {
                return Err(Error::invalid("Beta11a observations must lie in [0, 1)"));
            }
            let s: f64 = column.iter().map(|&x| libm::log1p(-x)).sum();
            let a = (-(column.len() as f64) / s - 1.0).max(1e-6);
            let model = MarginalModel::Beta11a { a };
            let ll = loglik(&model, column);
            Ok(FitReport { model, loglik: ll, iterations: 1, converged: ll.is_finite() })
        }
    }
}

/// Shared-sigma two-component normal mixture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixtureParams {
    pub w: f64,
    pub mu1: f64,
    pub mu2: f64,
    pub sigma: f64,
}

impl MixtureParams {
    fn model(&self) -> MarginalModel {
        let (w, mu1, mu2) =
            if self.mu1 <= self.mu2 { (self.w, self.mu1, self.mu2) } else { (1.0 - self.w, self.mu2, self.mu1) };
        MarginalModel::NormalMixture { w, mu1, mu2, sigma: self.sigma }
    }
}

fn mixture_loglik(p: &MixtureParams, column: &[f64]) -> f64 {
    column
        .iter()
        .map(|&x| {
            let a = p.w * norm_pdf((x - p.mu1) / p.sigma);
            let b = (1.0 - p.w) * norm_pdf((x - p.mu2) / p.sigma);
            math::ln((a + b) / p.sigma)
        })
        .sum()
}

/// Runs EM from `init` and returns the final parameters with the
/// log-likelihood after every iteration (entry 0 is the initial value).
pub fn em_mixture(column: &[f64], init: MixtureParams) -> (MixtureParams, Vec<f64>, bool) {
    let n = column.len() as f64;
    let sigma_floor = 1e-6 * (1.0 + spread(column));
    let mut p = init;
    let mut trace = Vec::with_capacity(64);
    trace.push(mixture_loglik(&p, column));
    let mut resp = alloc::vec![0.0; column.len()];
    let mut converged = false;
    for _ in 0..EM_MAX_ITER {
        let mut sr = 0.0;
        for (r, &x) in resp.iter_mut().zip(column) {
            let a = p.w * norm_pdf((x - p.mu1) / p.sigma);
            let b = (1.0 - p.w) * norm_pdf((x - p.mu2) / p.sigma);
            let t = a + b;
            *r = if t > 0.0 {
                a / t
            } else if (x - p.mu1).abs() <= (x - p.mu2).abs() {
                1.0
            } else {
                0.0
            };
            sr += *r;
        }
        let sr = sr.clamp(1e-12, n - 1e-12);
        let mu1 = resp.iter().zip(column).map(|(r, x)| r * x).sum::<f64>() / sr;
        let mu2 = resp.iter().zip(column).map(|(r, x)| (1.0 - r) * x).sum::<f64>() / (n - sr);
        let ss: f64 =
            resp.iter().zip(column).map(|(r, x)| r * (x - mu1) * (x - mu1) + (1.0 - r) * (x - mu2) * (x - mu2)).sum();
        let next =
            MixtureParams { w: (sr / n).clamp(1e-9, 1.0 - 1e-9), mu1, mu2, sigma: math::sqrt(ss / n).max(sigma_floor) };
        let ll = mixture_loglik(&next, column);
        let gain = ll - trace[trace.len() - 1];
        p = next;
        trace.push(ll);
        if gain.abs() < EM_TOL {
            converged = true;
            break;
        }
    }
    (p, trace, converged)
}

fn spread(column: &[f64]) -> f64 {
    let (lo, hi) = column.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    hi - lo
}

/// Split-at-`cut` initialization: component means and pooled sd of the two
/// halves.
fn split_init(sorted: &[f64], cut: usize) -> MixtureParams {
    let cut = cut.clamp(1, sorted.len() - 1);
    let (left, right) = sorted.split_at(cut);
    let m1 = left.iter().sum::<f64>() / left.len() as f64;
    let m2 = right.iter().sum::<f64>() / right.len() as f64;
    let ss: f64 =
        left.iter().map(|x| (x - m1) * (x - m1)).sum::<f64>() + right.iter().map(|x| (x - m2) * (x - m2)).sum::<f64>();
    let n = sorted.len() as f64;
    MixtureParams {
        w: left.len() as f64 / n,
        mu1: m1,
        mu2: m2,
        sigma: math::sqrt(ss / n).max(1e-3 * (1.0 + spread(sorted))),
    }
}

/// One-dimensional 2-means on sorted data: the cut minimizing the pooled
/// within-cluster sum of squares (exact, via prefix sums).
fn kmeans_cut(sorted: &[f64]) -> usize {
    let n = sorted.len();
    let mut pre = alloc::vec![0.0; n + 1];
    let mut pre2 = alloc::vec![0.0; n + 1];
    for (i, &x) in sorted.iter().enumerate() {
        pre[i + 1] = pre[i] + x;
        pre2[i + 1] = pre2[i] + x * x;
    }
    let sse = |a: usize, b: usize| {
        let m = (b - a) as f64;
        let s = pre[b] - pre[a];
        (pre2[b] - pre2[a]) - s * s / m
    };
    let mut best = (f64::INFINITY, n / 2);
    for cut in 1..n {
        let v = sse(0, cut) + sse(cut, n);
        if v < best.0 {
            best = (v, cut);
        }
    }
    best.1
}

fn fit_mixture(column: &[f64]) -> Result<FitReport> {
    let mut sorted = column.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let inits = [
        split_init(&sorted, kmeans_cut(&sorted)),
        split_init(&sorted, n / 2),
        split_init(&sorted, n / 4),
        split_init(&sorted, 3 * n / 4),
    ];
    let mut best: Option<FitReport> = None;
    for init in inits {
        let (p, trace, converged) = em_mixture(column, init);
        let ll = trace[trace.len() - 1];
        if !ll.is_finite() {
            continue;
        }
        let report = FitReport { model: p.model(), loglik: ll, iterations: trace.len() - 1, converged };
        if best.as_ref().is_none_or(|b| ll > b.loglik) {
            best = Some(report);
        }
    }
    best.ok_or(Error::FitFailed { family: "NormalMixture", detail: "no finite EM solution".into() })
}
