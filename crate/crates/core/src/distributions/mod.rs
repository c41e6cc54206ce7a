//! Univariate marginal families and the bivariate normal / Student-t CDFs
//! needed by the elliptical copulas.

pub mod bivariate;
pub mod fit;
pub mod student;

pub use bivariate::{bvn_cdf, bvt_cdf};
pub use fit::{fit_marginal_mle, FitReport};
pub use student::{t_cdf, t_pdf, t_quantile};

use crate::error::{Error, Result};
use crate::math::{self, invert_increasing, norm_cdf, norm_pdf, norm_quantile};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MarginalModel {
    Normal {
        mu: f64,
        sigma: f64,
    },
    /// Standard Student-t (location 0, scale 1).
    StudentT {
        nu: f64,
    },
    /// `w N(mu1, sigma^2) + (1 - w) N(mu2, sigma^2)`.
    NormalMixture {
        w: f64,
        mu1: f64,
        mu2: f64,
        sigma: f64,
    },
    /// Marginal of Dirichlet(1, 1, a): CDF `1 - (1 - x)^(a + 1)` on [0, 1].
    Beta11a {
        a: f64,
    },
    Uniform {
        lo: f64,
        hi: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MarginalFamily {
    Normal,
    StudentT,
    NormalMixture,
    Beta11a,
    Uniform,
}

impl MarginalModel {
    pub fn family(&self) -> MarginalFamily {
        match self {
            MarginalModel::Normal { .. } => MarginalFamily::Normal,
            MarginalModel::StudentT { .. } => MarginalFamily::StudentT,
            MarginalModel::NormalMixture { .. } => MarginalFamily::NormalMixture,
            MarginalModel::Beta11a { .. } => MarginalFamily::Beta11a,
            MarginalModel::Uniform { .. } => MarginalFamily::Uniform,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            MarginalModel::Normal { mu, sigma } => mu.is_finite() && sigma > 0.0 && sigma.is_finite(),
            MarginalModel::StudentT { nu } => nu > 0.0 && nu.is_finite(),
            MarginalModel::NormalMixture { w, mu1, mu2, sigma } => {
                w > 0.0 && w < 1.0 && mu1.is_finite() && mu2.is_finite() && sigma > 0.0 && sigma.is_finite()
            }
            MarginalModel::Beta11a { a } => a > 0.0 && a.is_finite(),
            MarginalModel::Uniform { lo, hi } => lo.is_finite() && hi.is_finite() && lo < hi,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::invalid("marginal parameter outside its domain"))
        }
    }

    /// Number of free parameters estimated by [`fit_marginal_mle`].
    pub fn n_params(&self) -> usize {
        match self {
            MarginalModel::Normal { .. } => 2,
            MarginalModel::StudentT { .. } => 1,
            MarginalModel::NormalMixture { .. } => 4,
            MarginalModel::Beta11a { .. } => 1,
            MarginalModel::Uniform { .. } => 2,
        }
    }
}

pub fn marginal_pdf(m: &MarginalModel, x: f64) -> f64 {
    match *m {
        MarginalModel::Normal { mu, sigma } => norm_pdf((x - mu) / sigma) / sigma,
        MarginalModel::StudentT { nu } => t_pdf(nu, x),
        MarginalModel::NormalMixture { w, mu1, mu2, sigma } => {
            (w * norm_pdf((x - mu1) / sigma) + (1.0 - w) * norm_pdf((x - mu2) / sigma)) / sigma
        }
        MarginalModel::Beta11a { a } => {
            if (0.0..=1.0).contains(&x) {
                (a + 1.0) * math::powf(1.0 - x, a)
            } else {
                0.0
            }
        }
        MarginalModel::Uniform { lo, hi } => {
            if (lo..=hi).contains(&x) {
                1.0 / (hi - lo)
            } else {
                0.0
            }
        }
    }
}

pub fn marginal_ln_pdf(m: &MarginalModel, x: f64) -> f64 {
    match *m {
        MarginalModel::Normal { mu, sigma } => {
            let z = (x - mu) / sigma;
            -0.5 * z * z - math::LN_SQRT_2PI - math::ln(sigma)
        }
        MarginalModel::StudentT { nu } => student::t_ln_pdf(nu, x),
        MarginalModel::NormalMixture { .. } => math::ln(marginal_pdf(m, x)),
        MarginalModel::Beta11a { a } => {
            if (0.0..=1.0).contains(&x) {
                math::ln(a + 1.0) + a * libm::log1p(-x)
            } else {
                f64::NEG_INFINITY
            }
        }
        MarginalModel::Uniform { .. } => math::ln(marginal_pdf(m, x)),
    }
}

pub fn marginal_cdf(m: &MarginalModel, x: f64) -> f64 {
    match *m {
        MarginalModel::Normal { mu, sigma } => norm_cdf((x - mu) / sigma),
        MarginalModel::StudentT { nu } => t_cdf(nu, x),
        MarginalModel::NormalMixture { w, mu1, mu2, sigma } => {
            w * norm_cdf((x - mu1) / sigma) + (1.0 - w) * norm_cdf((x - mu2) / sigma)
        }
        MarginalModel::Beta11a { a } => {
            if x <= 0.0 {
                0.0
            } else if x >= 1.0 {
                1.0
            } else {
                -libm::expm1((a + 1.0) * libm::log1p(-x))
            }
        }
        MarginalModel::Uniform { lo, hi } => ((x - lo) / (hi - lo)).clamp(0.0, 1.0),
    }
}

pub fn marginal_quantile(m: &MarginalModel, p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::QuantileAtBoundary(p));
    }
    Ok(match *m {
        MarginalModel::Normal { mu, sigma } => mu + sigma * norm_quantile(p),
        MarginalModel::StudentT { nu } => t_quantile(nu, p),
        MarginalModel::NormalMixture { mu1, mu2, sigma, .. } => {
            let z = norm_quantile(p);
            let lo = mu1.min(mu2) + sigma * z.min(0.0) - sigma;
            let hi = mu1.max(mu2) + sigma * z.max(0.0) + sigma;
            let start = if p < 0.5 { lo + sigma } else { hi - sigma };
            invert_increasing(|x| marginal_cdf(m, x), |x| marginal_pdf(m, x), p, lo, hi, start)
        }
        MarginalModel::Beta11a { a } => -libm::expm1(libm::log1p(-p) / (a + 1.0)),
        MarginalModel::Uniform { lo, hi } => lo + p * (hi - lo),
    })
}
