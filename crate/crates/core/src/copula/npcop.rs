//! Transformation Gaussian-KDE copula estimator with fixed normal-reference
//! bandwidths.

use alloc::vec::Vec;

use super::PseudoObservations;
use crate::error::{Error, Result};
use crate::math::{self, norm_cdf, norm_pdf, norm_quantile};

pub const MIN_NPCOP_OBS: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct NpCopulaFit {
    z: Vec<(f64, f64)>,
    h1: f64,
    h2: f64,
}

impl NpCopulaFit {
    /// Builds a fit from already-transformed points and explicit bandwidths.
    pub fn new(z: Vec<(f64, f64)>, h1: f64, h2: f64) -> Result<Self> {
        if z.is_empty() {
            return Err(Error::EmptySample);
        }
        if let Some(i) = z.iter().position(|&(a, b)| !(a.is_finite() && b.is_finite())) {
            return Err(Error::NonFinite(i));
        }
        if !(h1 > 0.0 && h2 > 0.0 && h1.is_finite() && h2.is_finite()) {
            return Err(Error::invalid("bandwidths must be positive"));
        }
        Ok(NpCopulaFit { z, h1, h2 })
    }

    pub fn z(&self) -> &[(f64, f64)] {
        &self.z
    }

    pub fn bandwidths(&self) -> (f64, f64) {
        (self.h1, self.h2)
    }
}

pub fn npcop_fit(pseudo: &PseudoObservations) -> Result<NpCopulaFit> {
    let n = pseudo.len();
    if n < MIN_NPCOP_OBS {
        return Err(Error::TooFewObservations { needed: MIN_NPCOP_OBS, got: n });
    }
    let z: Vec<(f64, f64)> = pseudo.pairs().iter().map(|&(u, v)| (norm_quantile(u), norm_quantile(v))).collect();
    let c1: Vec<f64> = z.iter().map(|p| p.0).collect();
    let c2: Vec<f64> = z.iter().map(|p| p.1).collect();
    let shrink = math::powf(n as f64, -1.0 / 6.0);
    let h1 = math::mean_sd(&c1).1 * shrink;
    let h2 = math::mean_sd(&c2).1 * shrink;
    if !(h1 > 0.0 && h2 > 0.0) {
        return Err(Error::DegenerateSample);
    }
    NpCopulaFit::new(z, h1, h2)
}

fn check_interior(u: f64, v: f64) -> Result<()> {
    if u > 0.0 && u < 1.0 && v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::CopulaBoundary)
    }
}

pub fn npcop_pdf(fit: &NpCopulaFit, u: f64, v: f64) -> Result<f64> {
    check_interior(u, v)?;
    let s = norm_quantile(u);
    let t = norm_quantile(v);
    let (h1, h2) = (fit.h1, fit.h2);
    let mut acc = 0.0;
    for &(a, b) in &fit.z {
        let d1 = (s - a) / h1;
        let d2 = (t - b) / h2;
        // one exp per point
        acc += math::exp(-0.5 * (d1 * d1 + d2 * d2));
    }
    let kde = acc * math::FRAC_1_2PI / (h1 * h2 * fit.z.len() as f64);
    Ok(kde / (norm_pdf(s) * norm_pdf(t)))
}

fn to_normal_scale(p: f64) -> f64 {
    if p <= 0.0 {
        f64::NEG_INFINITY
    } else if p >= 1.0 {
        f64::INFINITY
    } else {
        norm_quantile(p)
    }
}

/// Kernel mass of one axis over `[lo, hi]` on the normal scale.
#[inline]
fn axis_mass(lo: f64, hi: f64, centre: f64, h: f64) -> f64 {
    let a = (lo - centre) / h;
    let b = (hi - centre) / h;
    // difference of upper tails is more accurate on the right
    if a > 0.0 {
        norm_cdf(-a) - norm_cdf(-b)
    } else {
        norm_cdf(b) - norm_cdf(a)
    }
}

/// Estimated copula probability of `[u_lo, u_hi] x [v_lo, v_hi]`.
pub fn npcop_rect_prob(fit: &NpCopulaFit, u_lo: f64, u_hi: f64, v_lo: f64, v_hi: f64) -> Result<f64> {
    let in_unit = |x: f64| (0.0..=1.0).contains(&x);
    if !(in_unit(u_lo) && in_unit(u_hi) && in_unit(v_lo) && in_unit(v_hi)) {
        return Err(Error::invalid("rectangle corners must lie in [0, 1]"));
    }
    if u_lo > u_hi || v_lo > v_hi {
        return Err(Error::InvertedInterval);
    }
    if u_lo == u_hi || v_lo == v_hi {
        return Ok(0.0);
    }
    let (s_lo, s_hi) = (to_normal_scale(u_lo), to_normal_scale(u_hi));
    let (t_lo, t_hi) = (to_normal_scale(v_lo), to_normal_scale(v_hi));
    let mut acc = 0.0;
    for &(a, b) in &fit.z {
        let m1 = axis_mass(s_lo, s_hi, a, fit.h1);
        if m1 == 0.0 {
            continue;
        }
        acc += m1 * axis_mass(t_lo, t_hi, b, fit.h2);
    }
    Ok((acc / fit.z.len() as f64).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::copula::{copula_sample, CopulaModel, PseudoSource};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_kernel_cancels() {
        let fit = NpCopulaFit::new(alloc::vec![(0.0, 0.0)], 1.0, 1.0).unwrap();
        assert!((npcop_pdf(&fit, 0.5, 0.5).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rectangle_edge_cases() {
        let p = copula_sample(&CopulaModel::Independence, 50, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        let fit = npcop_fit(&p).unwrap();
        assert_eq!(npcop_rect_prob(&fit, 0.0, 1.0, 0.0, 1.0).unwrap(), 1.0);
        assert_eq!(npcop_rect_prob(&fit, 0.3, 0.3, 0.0, 1.0).unwrap(), 0.0);
        assert_eq!(npcop_rect_prob(&fit, 0.4, 0.3, 0.0, 1.0), Err(Error::InvertedInterval));
    }

    #[test]
    fn independence_consistency() {
        let p = copula_sample(&CopulaModel::Independence, 20_000, &mut ChaCha8Rng::seed_from_u64(2)).unwrap();
        let fit = npcop_fit(&p).unwrap();
        let (h1, h2) = fit.bandwidths();
        let r = math::powf(20_000.0, -1.0 / 6.0);
        assert!((h1 - r).abs() < 0.02 && (h2 - r).abs() < 0.02);
        assert!((npcop_pdf(&fit, 0.5, 0.5).unwrap() - 1.0).abs() < 0.05);
        assert!((npcop_rect_prob(&fit, 0.2, 0.4, 0.2, 0.4).unwrap() - 0.04).abs() < 0.005);
    }

    #[test]
    fn clayton_lower_tail() {
        let p = copula_sample(&CopulaModel::Clayton { theta: 2.0 }, 20_000, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        let fit = npcop_fit(&p).unwrap();
        assert!(npcop_pdf(&fit, 0.05, 0.05).unwrap() > npcop_pdf(&fit, 0.05, 0.95).unwrap());
    }

    #[test]
    fn minimal_and_boundary_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let pts: Vec<(f64, f64)> =
            (0..20).map(|_| (rng.random_range(0.01..0.99), rng.random_range(0.01..0.99))).collect();
        let fit = npcop_fit(&PseudoObservations::new(pts, PseudoSource::EcdfRescaled).unwrap()).unwrap();
        let (h1, h2) = fit.bandwidths();
        assert!(h1.is_finite() && h2.is_finite());
        assert!(npcop_pdf(&fit, 0.0, 0.5).is_err());
    }
}
