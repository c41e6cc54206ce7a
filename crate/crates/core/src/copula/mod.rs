//! Parametric copulas, the Dirichlet(1, 1, a) copula, pseudo-observations,
//! MLE/AIC selection and the transformation-KDE copula estimator.

mod fit;
mod npcop;

pub use fit::{fit_copula_mle, select_copula_aic, AicEntry, DEFAULT_CANDIDATES, T_COPULA_NU_GRID};
pub use npcop::{npcop_fit, npcop_pdf, npcop_rect_prob, NpCopulaFit};

use alloc::vec::Vec;
use rand::distr::Open01;
use rand::Rng;
use rand_distr::{Gamma, StandardNormal};

use crate::distributions::{
    bvn_cdf, bvt_cdf, marginal_cdf, marginal_pdf, marginal_quantile, t_cdf, t_quantile, MarginalModel,
};
use crate::error::{Error, Result};
use crate::math::{self, norm_cdf, norm_quantile};
use crate::sample::{Point2, Sample2D};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CopulaModel {
    Gaussian {
        rho: f64,
    },
    StudentT {
        rho: f64,
        nu: f64,
    },
    Frank {
        theta: f64,
    },
    Clayton {
        theta: f64,
    },
    Independence,
    /// Copula of the first two coordinates of Dirichlet(1, 1, a).
    /// Evaluation only; never fitted.
    Dirichlet11a {
        a: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CopulaFamily {
    Gaussian,
    StudentT,
    Frank,
    Clayton,
    Independence,
    Dirichlet11a,
}

impl CopulaFamily {
    pub fn name(self) -> &'static str {
        match self {
            CopulaFamily::Gaussian => "gaussian",
            CopulaFamily::StudentT => "student-t",
            CopulaFamily::Frank => "frank",
            CopulaFamily::Clayton => "clayton",
            CopulaFamily::Independence => "independence",
            CopulaFamily::Dirichlet11a => "dirichlet11a",
        }
    }

    pub fn n_params(self) -> usize {
        match self {
            CopulaFamily::Independence => 0,
            CopulaFamily::StudentT => 2,
            _ => 1,
        }
    }
}

impl CopulaModel {
    pub fn family(&self) -> CopulaFamily {
        match self {
            CopulaModel::Gaussian { .. } => CopulaFamily::Gaussian,
            CopulaModel::StudentT { .. } => CopulaFamily::StudentT,
            CopulaModel::Frank { .. } => CopulaFamily::Frank,
            CopulaModel::Clayton { .. } => CopulaFamily::Clayton,
            CopulaModel::Independence => CopulaFamily::Independence,
            CopulaModel::Dirichlet11a { .. } => CopulaFamily::Dirichlet11a,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            CopulaModel::Gaussian { rho } => rho.abs() < 1.0,
            CopulaModel::StudentT { rho, nu } => rho.abs() < 1.0 && nu > 0.0 && nu.is_finite(),
            CopulaModel::Frank { theta } => theta != 0.0 && theta.is_finite(),
            CopulaModel::Clayton { theta } => theta > 0.0 && theta.is_finite(),
            CopulaModel::Independence => true,
            CopulaModel::Dirichlet11a { a } => a > 0.0 && a.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::invalid("copula parameter outside its domain"))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PseudoSource {
    /// Ranks divided by n + 1.
    EcdfRescaled,
    /// Fitted parametric marginal CDFs.
    ParametricCdf,
    /// Direct draws from a copula model.
    Simulated,
}

/// Points in the open unit square.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoObservations {
    u: Vec<(f64, f64)>,
    source: PseudoSource,
}

/// Clamp used for parametric pseudo-observations.
pub const PARAMETRIC_CLAMP: f64 = 1e-10;

impl PseudoObservations {
    pub fn new(u: Vec<(f64, f64)>, source: PseudoSource) -> Result<Self> {
        if u.is_empty() {
            return Err(Error::EmptySample);
        }
        if let Some(i) = u.iter().position(|&(a, b)| !(a > 0.0 && a < 1.0 && b > 0.0 && b < 1.0)) {
            return Err(Error::invalid(alloc::format!("pseudo-observation {i} is not inside (0, 1)^2")));
        }
        Ok(PseudoObservations { u, source })
    }

    /// `rank_i / (n + 1)` per axis, with `rank_i = #{j : x_j <= x_i}`.
    pub fn from_ranks(sample: &Sample2D) -> Self {
        let n1 = sample.len() as f64 + 1.0;
        let r1 = max_ranks(&sample.column(0));
        let r2 = max_ranks(&sample.column(1));
        let u = r1.into_iter().zip(r2).map(|(a, b)| (a as f64 / n1, b as f64 / n1)).collect();
        PseudoObservations { u, source: PseudoSource::EcdfRescaled }
    }

    /// Fitted-marginal CDF transform, clamped to `[1e-10, 1 - 1e-10]`.
    pub fn from_marginals(sample: &Sample2D, m1: &MarginalModel, m2: &MarginalModel) -> Self {
        let c = |x: f64| x.clamp(PARAMETRIC_CLAMP, 1.0 - PARAMETRIC_CLAMP);
        let u = sample.points().iter().map(|p| (c(marginal_cdf(m1, p.x1)), c(marginal_cdf(m2, p.x2)))).collect();
        PseudoObservations { u, source: PseudoSource::ParametricCdf }
    }

    pub fn pairs(&self) -> &[(f64, f64)] {
        &self.u
    }

    pub fn source(&self) -> PseudoSource {
        self.source
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }
}

/// `#{j : x_j <= x_i}` for every i.
fn max_ranks(column: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..column.len()).collect();
    idx.sort_by(|&a, &b| column[a].total_cmp(&column[b]));
    let mut ranks = alloc::vec![0usize; column.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && column[idx[j + 1]] == column[idx[i]] {
            j += 1;
        }
        for &k in &idx[i..=j] {
            ranks[k] = j + 1;
        }
        i = j + 1;
    }
    ranks
}

// ---------------------------------------------------------------------------
// Kendall's tau

/// First Debye function `D1(x) = (1/x) * int_0^x t / (e^t - 1) dt`.
pub fn debye1(x: f64) -> f64 {
    if x == 0.0 {
        return 1.0;
    }
    let f = |t: f64| if t == 0.0 { 1.0 } else { t / libm::expm1(t) };
    math::adaptive_simpson(&f, 0.0, x, 1e-14) / x
}

fn frank_tau(theta: f64) -> f64 {
    if theta.abs() < 1e-6 {
        return theta / 9.0;
    }
    1.0 - 4.0 / theta * (1.0 - debye1(theta))
}

fn dirichlet_tau(a: f64) -> f64 {
    -1.0 / (2.0 * a + 1.0)
}

/// Population Kendall's tau of a copula model.
pub fn kendall_tau(c: &CopulaModel) -> f64 {
    match *c {
        CopulaModel::Gaussian { rho } | CopulaModel::StudentT { rho, .. } => {
            2.0 / core::f64::consts::PI * libm::asin(rho)
        }
        CopulaModel::Frank { theta } => frank_tau(theta),
        CopulaModel::Clayton { theta } => theta / (theta + 2.0),
        CopulaModel::Independence => 0.0,
        CopulaModel::Dirichlet11a { a } => dirichlet_tau(a),
    }
}

/// Sample Kendall's tau-a (tied pairs count as neither concordant nor
/// discordant), O(n log n) by Knight's merge-sort algorithm.
pub fn empirical_kendall_tau(pairs: &[(f64, f64)]) -> f64 {
    let n = pairs.len();
    if n < 2 {
        return 0.0;
    }
    let mut v: Vec<(f64, f64)> = pairs.to_vec();
    v.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let tied_pairs = |runs: &mut dyn Iterator<Item = bool>| -> u64 {
        let (mut total, mut run) = (0u64, 1u64);
        for same in runs {
            if same {
                run += 1;
            } else {
                total += run * (run - 1) / 2;
                run = 1;
            }
        }
        total + run * (run - 1) / 2
    };
    let tie_x = tied_pairs(&mut v.windows(2).map(|w| w[0].0 == w[1].0));
    let tie_xy = tied_pairs(&mut v.windows(2).map(|w| w[0] == w[1]));
    let mut ys: Vec<f64> = v.iter().map(|p| p.1).collect();
    let mut buf = ys.clone();
    let swaps = merge_count(&mut ys, &mut buf);
    let tie_y = tied_pairs(&mut ys.windows(2).map(|w| w[0] == w[1]));
    let n0 = (n as u64) * (n as u64 - 1) / 2;
    let diff = n0 as f64 - tie_x as f64 - tie_y as f64 + tie_xy as f64 - 2.0 * swaps as f64;
    diff / n0 as f64
}

/// Sorts `a` ascending and returns the number of strict inversions.
fn merge_count(a: &mut [f64], buf: &mut [f64]) -> u64 {
    let n = a.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut count = {
        let (l, r) = a.split_at_mut(mid);
        let (bl, br) = buf.split_at_mut(mid);
        merge_count(l, bl) + merge_count(r, br)
    };
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < n {
        if a[j] < a[i] {
            buf[k] = a[j];
            count += (mid - i) as u64;
            j += 1;
        } else {
            buf[k] = a[i];
            i += 1;
        }
        k += 1;
    }
    buf[k..k + mid - i].copy_from_slice(&a[i..mid]);
    k += mid - i;
    buf[k..k + n - j].copy_from_slice(&a[j..n]);
    a.copy_from_slice(&buf[..n]);
    count
}

/// Inverts Kendall's tau for a family.
pub fn tau_to_param(family: CopulaFamily, tau: f64) -> Result<CopulaModel> {
    let unattainable = Err(Error::UnattainableTau { family: family.name(), tau });
    if !(tau > -1.0 && tau < 1.0) {
        return unattainable;
    }
    match family {
        CopulaFamily::Gaussian => Ok(CopulaModel::Gaussian { rho: libm::sin(core::f64::consts::FRAC_PI_2 * tau) }),
        CopulaFamily::StudentT => Err(Error::invalid("student-t copula needs nu; use tau_to_param_t")),
        CopulaFamily::Clayton => {
            if tau <= 0.0 {
                return unattainable;
            }
            Ok(CopulaModel::Clayton { theta: 2.0 * tau / (1.0 - tau) })
        }
        CopulaFamily::Frank => {
            if tau == 0.0 {
                return unattainable;
            }
            let target = tau.abs();
            let mut hi = 1.0;
            while frank_tau(hi) < target {
                hi *= 2.0;
                if hi > 1e6 {
                    return unattainable;
                }
            }
            let theta = math::bisect(|t| frank_tau(t) - target, 0.0, hi, 1e-10);
            Ok(CopulaModel::Frank { theta: theta.copysign(tau) })
        }
        CopulaFamily::Independence => {
            if tau == 0.0 {
                Ok(CopulaModel::Independence)
            } else {
                unattainable
            }
        }
        CopulaFamily::Dirichlet11a => {
            if tau >= 0.0 {
                return unattainable;
            }
            Ok(CopulaModel::Dirichlet11a { a: 0.5 * (-1.0 / tau - 1.0) })
        }
    }
}

pub fn tau_to_param_t(tau: f64, nu: f64) -> Result<CopulaModel> {
    match tau_to_param(CopulaFamily::Gaussian, tau)? {
        CopulaModel::Gaussian { rho } => Ok(CopulaModel::StudentT { rho, nu }),
        _ => unreachable!(),
    }
}

// ---------------------------------------------------------------------------
// CDF and density

pub fn copula_cdf(c: &CopulaModel, u: f64, v: f64) -> f64 {
    if u <= 0.0 || v <= 0.0 {
        return 0.0;
    }
    if u >= 1.0 {
        return v.min(1.0);
    }
    if v >= 1.0 {
        return u;
    }
    let value = match *c {
        CopulaModel::Gaussian { rho } => bvn_cdf(rho, norm_quantile(u), norm_quantile(v)),
        CopulaModel::StudentT { rho, nu } => bvt_cdf(rho, nu, t_quantile(nu, u), t_quantile(nu, v)),
        CopulaModel::Frank { theta } => {
            let num = libm::expm1(-theta * u) * libm::expm1(-theta * v);
            -libm::log1p(num / libm::expm1(-theta)) / theta
        }
        CopulaModel::Clayton { theta } => {
            let s = math::powf(u, -theta) + math::powf(v, -theta) - 1.0;
            math::powf(s, -1.0 / theta)
        }
        CopulaModel::Independence => u * v,
        CopulaModel::Dirichlet11a { a } => {
            let e = 1.0 / (a + 1.0);
            let s = math::powf(1.0 - u, e) + math::powf(1.0 - v, e) - 1.0;
            let tail = if s > 0.0 { math::powf(s, a + 1.0) } else { 0.0 };
            u + v - 1.0 + tail
        }
    };
    value.clamp((u + v - 1.0).max(0.0), u.min(v))
}

/// Log density at an interior point; no boundary check.
pub(crate) fn ln_pdf_interior(c: &CopulaModel, u: f64, v: f64) -> f64 {
    match *c {
        CopulaModel::Gaussian { rho } => gaussian_ln_pdf_z(rho, norm_quantile(u), norm_quantile(v)),
        CopulaModel::StudentT { rho, nu } => t_ln_pdf_x(rho, nu, t_quantile(nu, u), t_quantile(nu, v)),
        CopulaModel::Frank { theta } => frank_ln_pdf(theta, u, v),
        CopulaModel::Clayton { theta } => clayton_ln_pdf(theta, u, v),
        CopulaModel::Independence => 0.0,
        CopulaModel::Dirichlet11a { a } => {
            let e = 1.0 / (a + 1.0);
            let (pu, pv) = (math::powf(1.0 - u, e), math::powf(1.0 - v, e));
            let s = pu + pv - 1.0;
            if s <= 0.0 {
                return f64::NEG_INFINITY;
            }
            math::ln(a * e) + (a - 1.0) * math::ln(s) - a * e * (libm::log1p(-u) + libm::log1p(-v))
        }
    }
}

pub(crate) fn gaussian_ln_pdf_z(rho: f64, s: f64, t: f64) -> f64 {
    let r2 = rho * rho;
    let q = 1.0 - r2;
    -0.5 * libm::log1p(-r2) - (r2 * (s * s + t * t) - 2.0 * rho * s * t) / (2.0 * q)
}

/// Student-t copula log density at t-quantile coordinates `(x, y)`.
pub(crate) fn t_ln_pdf_x(rho: f64, nu: f64, x: f64, y: f64) -> f64 {
    let q = 1.0 - rho * rho;
    let lg = math::ln_gamma(0.5 * (nu + 2.0)) + math::ln_gamma(0.5 * nu) - 2.0 * math::ln_gamma(0.5 * (nu + 1.0));
    let quad = (x * x - 2.0 * rho * x * y + y * y) / (nu * q);
    lg - 0.5 * math::ln(q) - 0.5 * (nu + 2.0) * libm::log1p(quad)
        + 0.5 * (nu + 1.0) * (libm::log1p(x * x / nu) + libm::log1p(y * y / nu))
}

fn frank_ln_pdf(theta: f64, u: f64, v: f64) -> f64 {
    if theta.abs() < 1e-8 {
        return libm::log1p(theta * (1.0 - 2.0 * u) * (1.0 - 2.0 * v));
    }
    if theta < 0.0 {
        return frank_ln_pdf(-theta, 1.0 - u, v);
    }
    // denominator e^{-tu}(1 - e^{-tv}) + e^{-tv}(1 - e^{-t(1-v)}), both terms positive
    let p = -theta * u + math::ln(-libm::expm1(-theta * v));
    let q = -theta * v + math::ln(-libm::expm1(-theta * (1.0 - v)));
    let m = p.max(q);
    let ln_d = m + libm::log1p(math::exp(p.min(q) - m));
    math::ln(theta) + math::ln(-libm::expm1(-theta)) - theta * (u + v) - 2.0 * ln_d
}

fn clayton_ln_pdf(theta: f64, u: f64, v: f64) -> f64 {
    let (lu, lv) = (math::ln(u), math::ln(v));
    // log(u^-t + v^-t - 1) without overflow
    let (a, b) = (-theta * lu, -theta * lv);
    let m = a.max(b);
    let ln_s = m + math::ln(math::exp(a - m) + math::exp(b - m) - math::exp(-m));
    libm::log1p(theta) - (theta + 1.0) * (lu + lv) - (1.0 / theta + 2.0) * ln_s
}

pub fn copula_ln_pdf(c: &CopulaModel, u: f64, v: f64) -> Result<f64> {
    if !(u > 0.0 && u < 1.0 && v > 0.0 && v < 1.0) {
        return Err(Error::CopulaBoundary);
    }
    Ok(ln_pdf_interior(c, u, v))
}

pub fn copula_pdf(c: &CopulaModel, u: f64, v: f64) -> Result<f64> {
    copula_ln_pdf(c, u, v).map(math::exp)
}

// ---------------------------------------------------------------------------
// Sklar composition

/// Two marginals joined by a copula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointModel {
    pub m1: MarginalModel,
    pub m2: MarginalModel,
    pub copula: CopulaModel,
}

impl JointModel {
    /// `c(F1(x1), F2(x2)) f1(x1) f2(x2)`.
    pub fn pdf(&self, x: Point2) -> f64 {
        let f1 = marginal_pdf(&self.m1, x.x1);
        let f2 = marginal_pdf(&self.m2, x.x2);
        if f1 == 0.0 || f2 == 0.0 {
            return 0.0;
        }
        let u = interior(marginal_cdf(&self.m1, x.x1));
        let v = interior(marginal_cdf(&self.m2, x.x2));
        math::exp(ln_pdf_interior(&self.copula, u, v)) * f1 * f2
    }

    pub fn cdf(&self, x: Point2) -> f64 {
        copula_cdf(&self.copula, marginal_cdf(&self.m1, x.x1), marginal_cdf(&self.m2, x.x2))
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Point2 {
        let (u, v) = copula_draw(&self.copula, rng);
        // (u, v) are strictly interior, so the quantiles exist
        Point2::new(
            marginal_quantile(&self.m1, u).unwrap_or(f64::NAN),
            marginal_quantile(&self.m2, v).unwrap_or(f64::NAN),
        )
    }
}

// ---------------------------------------------------------------------------
// Sampling

const U_MAX: f64 = 1.0 - f64::EPSILON / 2.0;

#[inline]
fn interior(x: f64) -> f64 {
    x.clamp(f64::MIN_POSITIVE, U_MAX)
}

/// Draws one pair from the copula.
pub fn copula_draw<R: Rng + ?Sized>(c: &CopulaModel, rng: &mut R) -> (f64, f64) {
    let (u, v) = match *c {
        CopulaModel::Gaussian { rho } => {
            let z1: f64 = rng.sample(StandardNormal);
            let z2: f64 = rng.sample(StandardNormal);
            let y = rho * z1 + math::sqrt(1.0 - rho * rho) * z2;
            (norm_cdf(z1), norm_cdf(y))
        }
        CopulaModel::StudentT { rho, nu } => {
            let z1: f64 = rng.sample(StandardNormal);
            let z2: f64 = rng.sample(StandardNormal);
            let y = rho * z1 + math::sqrt(1.0 - rho * rho) * z2;
            let w: f64 = rng.sample(Gamma::new(0.5 * nu, 2.0).expect("nu > 0"));
            let scale = math::sqrt(nu / w);
            (t_cdf(nu, z1 * scale), t_cdf(nu, y * scale))
        }
        CopulaModel::Frank { theta } => {
            let u: f64 = rng.sample(Open01);
            let w: f64 = rng.sample(Open01);
            let den = w + (1.0 - w) * math::exp(-theta * u);
            let v = -libm::log1p(w * libm::expm1(-theta) / den) / theta;
            (u, v)
        }
        CopulaModel::Clayton { theta } => {
            let u: f64 = rng.sample(Open01);
            let w: f64 = rng.sample(Open01);
            let inner = math::powf(u, -theta) * (math::powf(w, -theta / (1.0 + theta)) - 1.0) + 1.0;
            (u, math::powf(inner, -1.0 / theta))
        }
        CopulaModel::Independence => (rng.sample(Open01), rng.sample(Open01)),
        CopulaModel::Dirichlet11a { a } => {
            let (x1, x2) = dirichlet11a_draw(a, rng);
            let m = MarginalModel::Beta11a { a };
            (marginal_cdf(&m, x1), marginal_cdf(&m, x2))
        }
    };
    (interior(u), interior(v))
}

/// First two coordinates of a Dirichlet(1, 1, a) draw via Gamma ratios.
pub fn dirichlet11a_draw<R: Rng + ?Sized>(a: f64, rng: &mut R) -> (f64, f64) {
    let exp1 = Gamma::new(1.0, 1.0).expect("valid shape");
    let g1: f64 = rng.sample(exp1);
    let g2: f64 = rng.sample(exp1);
    let g3: f64 = rng.sample(Gamma::new(a, 1.0).expect("a > 0"));
    let total = g1 + g2 + g3;
    let x1 = g1 / total;
    // keeps x1 + x2 <= 1 after rounding
    (x1, (g2 / total).min(1.0 - x1))
}

pub fn copula_sample<R: Rng + ?Sized>(c: &CopulaModel, n: usize, rng: &mut R) -> Result<PseudoObservations> {
    if n == 0 {
        return Err(Error::ZeroCount);
    }
    c.validate()?;
    let u = (0..n).map(|_| copula_draw(c, rng)).collect();
    Ok(PseudoObservations { u, source: PseudoSource::Simulated })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const FRAC_1_SQRT_2: f64 = core::f64::consts::FRAC_1_SQRT_2;

    fn tau_half_models() -> Vec<CopulaModel> {
        alloc::vec![
            CopulaModel::Gaussian { rho: FRAC_1_SQRT_2 },
            CopulaModel::StudentT { rho: FRAC_1_SQRT_2, nu: 6.0 },
            tau_to_param(CopulaFamily::Frank, 0.5).unwrap(),
            CopulaModel::Clayton { theta: 2.0 },
            CopulaModel::Independence,
            CopulaModel::Dirichlet11a { a: 2.0 },
        ]
    }

    fn dirichlet_tau_quadrature(a: f64) -> f64 {
        // With p = (1-u)^(1/(a+1)), q = (1-v)^(1/(a+1)) and s = p + q - 1,
        // int C_u C_v du dv = (a+1)^2 [ int_{s<=0} p^a q^a + int_{s>0} (p^a - s^a)(q^a - s^a) ].
        let gl = math::gauss_legendre(48);
        let mut lower = 0.0;
        let mut upper = 0.0;
        for &(xp, wp) in &gl {
            let p = 0.5 * (xp + 1.0);
            // q in (0, 1 - p) and (1 - p, 1)
            let (lo_half, hi_half) = (0.5 * (1.0 - p), 0.5 * p);
            for &(xq, wq) in &gl {
                let q = lo_half * (xq + 1.0);
                lower += 0.5 * wp * lo_half * wq * math::powf(p, a) * math::powf(q, a);
                let q = 1.0 - p + hi_half * (xq + 1.0);
                let s = p + q - 1.0;
                let sa = math::powf(s, a);
                upper += 0.5 * wp * hi_half * wq * (math::powf(p, a) - sa) * (math::powf(q, a) - sa);
            }
        }
        1.0 - 4.0 * (a + 1.0) * (a + 1.0) * (lower + upper)
    }

    #[test]
    fn dirichlet_tau_closed_form() {
        for a in [1.0, 2.0, 3.7, 10.0, 30.0] {
            let q = dirichlet_tau_quadrature(a);
            assert!((q - dirichlet_tau(a)).abs() < 1e-9, "a={a} quadrature={q}");
        }
        // s^a is singular at s = 0 for a < 1, so the rule is less accurate there
        assert!((dirichlet_tau_quadrature(0.5) - dirichlet_tau(0.5)).abs() < 1e-5);
    }

    fn kendall_brute(pairs: &[(f64, f64)]) -> f64 {
        let n = pairs.len();
        let mut s: i64 = 0;
        for i in 0..n {
            for j in i + 1..n {
                let p = (pairs[i].0 - pairs[j].0) * (pairs[i].1 - pairs[j].1);
                s += (p > 0.0) as i64 - (p < 0.0) as i64;
            }
        }
        s as f64 / (n as f64 * (n as f64 - 1.0) / 2.0)
    }

    #[test]
    fn kendall_fast_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for n in [2usize, 3, 10, 57, 400] {
            // coarse rounding forces ties in x, y and both
            let pairs: Vec<(f64, f64)> = (0..n)
                .map(|_| {
                    let a: f64 = rng.random();
                    let b: f64 = rng.random::<f64>() + 0.5 * a;
                    (libm::round(a * 8.0), libm::round(b * 8.0))
                })
                .collect();
            assert!((empirical_kendall_tau(&pairs) - kendall_brute(&pairs)).abs() < 1e-12, "n={n}");
            let distinct: Vec<(f64, f64)> = (0..n).map(|_| (rng.random(), rng.random())).collect();
            assert!((empirical_kendall_tau(&distinct) - kendall_brute(&distinct)).abs() < 1e-12);
        }
    }

    #[test]
    fn tau_examples() {
        let CopulaModel::Gaussian { rho } = tau_to_param(CopulaFamily::Gaussian, 0.5).unwrap() else { panic!() };
        assert!((rho - FRAC_1_SQRT_2).abs() < 1e-15);
        assert_eq!(tau_to_param(CopulaFamily::Clayton, 0.5).unwrap(), CopulaModel::Clayton { theta: 2.0 });
        let CopulaModel::Frank { theta } = tau_to_param(CopulaFamily::Frank, 0.5).unwrap() else { panic!() };
        // independent oracle: trapezoid rule on the Debye integrand
        let oracle_tau = |th: f64| {
            let m = 200_000;
            let h = th / m as f64;
            let mut s = 0.5 * (1.0 + th / libm::expm1(th));
            for i in 1..m {
                let t = i as f64 * h;
                s += t / libm::expm1(t);
            }
            1.0 - 4.0 / th * (1.0 - s * h / th)
        };
        assert!((oracle_tau(theta) - 0.5).abs() < 1e-8);
        assert!((theta - 5.7363).abs() < 1e-3, "theta={theta}");
        assert!(tau_to_param(CopulaFamily::Clayton, -0.2).is_err());
        assert!(tau_to_param(CopulaFamily::Frank, 0.0).is_err());
        let CopulaModel::Frank { theta } = tau_to_param(CopulaFamily::Frank, -0.3).unwrap() else { panic!() };
        assert!((frank_tau(theta) + 0.3).abs() < 1e-9);
    }

    #[test]
    fn tau_round_trips() {
        for &tau in &[-0.8, -0.3, 0.1, 0.5, 0.9] {
            for fam in [CopulaFamily::Gaussian, CopulaFamily::Frank] {
                let m = tau_to_param(fam, tau).unwrap();
                assert!((kendall_tau(&m) - tau).abs() < 1e-8, "{m:?}");
            }
            if tau > 0.0 {
                let m = tau_to_param(CopulaFamily::Clayton, tau).unwrap();
                assert!((kendall_tau(&m) - tau).abs() < 1e-12);
            }
        }
        let d = CopulaModel::Dirichlet11a { a: 2.0 };
        let tau = kendall_tau(&d);
        let back = tau_to_param(CopulaFamily::Dirichlet11a, tau).unwrap();
        let CopulaModel::Dirichlet11a { a } = back else { panic!() };
        assert!((a - 2.0).abs() < 1e-7, "a={a}");
    }

    #[test]
    fn cdf_examples() {
        let c = copula_cdf(&CopulaModel::Clayton { theta: 2.0 }, 0.5, 0.5);
        assert!((c - 1.0 / libm::sqrt(7.0)).abs() < 1e-14);
        let f = copula_cdf(&CopulaModel::Frank { theta: 5.75 }, 0.5, 0.5);
        assert!((f - 0.3890).abs() < 1e-4, "frank={f}");
        for m in tau_half_models() {
            assert!((copula_cdf(&m, 0.3, 1.0) - 0.3).abs() < 1e-15);
            assert_eq!(copula_cdf(&m, 0.3, 0.0), 0.0);
        }
    }

    #[test]
    fn pdf_examples() {
        assert_eq!(copula_pdf(&CopulaModel::Independence, 0.2, 0.9).unwrap(), 1.0);
        let d = copula_pdf(&CopulaModel::Dirichlet11a { a: 2.0 }, 1e-12, 1e-12).unwrap();
        assert!((d - 2.0 / 3.0).abs() < 1e-9, "dirichlet origin={d}");
        let g = copula_pdf(&CopulaModel::Gaussian { rho: FRAC_1_SQRT_2 }, 0.5, 0.5).unwrap();
        assert!((g - core::f64::consts::SQRT_2).abs() < 1e-6);
        assert_eq!(copula_pdf(&CopulaModel::Independence, 0.0, 0.5), Err(Error::CopulaBoundary));
        assert_eq!(copula_pdf(&CopulaModel::Dirichlet11a { a: 2.0 }, 0.95, 0.95).unwrap(), 0.0);
    }

    #[test]
    fn sampling_matches_kendall_tau() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for m in [CopulaModel::Clayton { theta: 2.0 }, CopulaModel::Independence] {
            let s = copula_sample(&m, 20_000, &mut rng).unwrap();
            let tau = empirical_kendall_tau(s.pairs());
            assert!((tau - kendall_tau(&m)).abs() < 0.02, "{m:?} tau={tau}");
        }
        assert_eq!(copula_sample(&CopulaModel::Independence, 0, &mut rng), Err(Error::ZeroCount));
    }

    #[test]
    fn ranks_use_count_le() {
        let s = Sample2D::from_pairs(&[(3.0, 1.0), (1.0, 1.0), (2.0, 0.0)]).unwrap();
        let p = PseudoObservations::from_ranks(&s);
        assert_eq!(p.pairs(), &[(0.75, 0.75), (0.25, 0.75), (0.5, 0.25)]);
        assert!(PseudoObservations::new(alloc::vec![(0.0, 0.5)], PseudoSource::EcdfRescaled).is_err());
    }
}
