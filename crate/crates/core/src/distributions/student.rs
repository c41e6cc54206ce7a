//! Standard (location 0, scale 1) univariate Student-t distribution.

use crate::math::{self, invert_increasing};

/// Largest integer degrees of freedom handled by the finite series.
const SERIES_MAX_NU: f64 = 400.0;

fn integer_nu(nu: f64) -> Option<u32> {
    if (1.0..=SERIES_MAX_NU).contains(&nu) && nu == libm::floor(nu) {
        Some(nu as u32)
    } else {
        None
    }
}

pub fn t_ln_pdf(nu: f64, x: f64) -> f64 {
    math::ln_gamma(0.5 * (nu + 1.0))
        - math::ln_gamma(0.5 * nu)
        - 0.5 * math::ln(nu * core::f64::consts::PI)
        - 0.5 * (nu + 1.0) * libm::log1p(x * x / nu)
}

#[inline]
pub fn t_pdf(nu: f64, x: f64) -> f64 {
    math::exp(t_ln_pdf(nu, x))
}

/// CDF via the regularized incomplete beta function; valid for any nu > 0.
pub fn t_cdf_beta(nu: f64, x: f64) -> f64 {
    if x.is_infinite() {
        return if x > 0.0 { 1.0 } else { 0.0 };
    }
    let tail = 0.5 * math::reg_inc_beta(0.5 * nu, 0.5, nu / (nu + x * x));
    if x > 0.0 {
        1.0 - tail
    } else {
        tail
    }
}

/// CDF by the finite trigonometric series for integer degrees of freedom
/// (Abramowitz & Stegun 26.7.3 and 26.7.4).
pub fn t_cdf_series(nu: u32, x: f64) -> f64 {
    if x.is_infinite() {
        return if x > 0.0 { 1.0 } else { 0.0 };
    }
    let theta = libm::atan(x.abs() / math::sqrt(nu as f64));
    let (s, c) = (libm::sin(theta), libm::cos(theta));
    let c2 = c * c;
    let a = if nu % 2 == 1 {
        // odd
        let mut sum = 0.0;
        if nu > 1 {
            let mut term = c;
            sum = term;
            let mut j = 3;
            while j + 2 <= nu {
                term *= c2 * (j - 1) as f64 / j as f64;
                sum += term;
                j += 2;
            }
        }
        2.0 / core::f64::consts::PI * (theta + s * sum)
    } else {
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut j = 2;
        while j < nu {
            term *= c2 * (j - 1) as f64 / j as f64;
            sum += term;
            j += 2;
        }
        s * sum
    };
    if x >= 0.0 {
        0.5 + 0.5 * a
    } else {
        0.5 - 0.5 * a
    }
}

pub fn t_cdf(nu: f64, x: f64) -> f64 {
    match integer_nu(nu) {
        Some(k) => t_cdf_series(k, x),
        None => t_cdf_beta(nu, x),
    }
}

pub fn t_quantile(nu: f64, p: f64) -> f64 {
    if p <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if p >= 1.0 {
        return f64::INFINITY;
    }
    if p == 0.5 {
        return 0.0;
    }
    if nu == 1.0 {
        return libm::tan(core::f64::consts::PI * (p - 0.5));
    }
    if nu == 2.0 {
        return (2.0 * p - 1.0) / math::sqrt(2.0 * p * (1.0 - p));
    }
    // Cornish-Fisher start, then safeguarded Newton on the CDF.
    let z = math::norm_quantile(p);
    let z3 = z * z * z;
    let start = z + (z3 + z) / (4.0 * nu) + (5.0 * z3 * z * z + 16.0 * z3 + 3.0 * z) / (96.0 * nu * nu);
    let (mut lo, mut hi) = (-1.0, 1.0);
    while t_cdf(nu, lo) > p {
        lo *= 2.0;
    }
    while t_cdf(nu, hi) < p {
        hi *= 2.0;
    }
    invert_increasing(|x| t_cdf(nu, x), |x| t_pdf(nu, x), p, lo, hi, start)
}
