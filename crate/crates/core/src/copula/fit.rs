use alloc::vec::Vec;

use super::{gaussian_ln_pdf_z, ln_pdf_interior, t_ln_pdf_x, CopulaFamily, CopulaModel, PseudoObservations};
use crate::distributions::t_quantile;
use crate::error::{Error, Result};
use crate::math::{golden_max, norm_quantile};

pub const DEFAULT_CANDIDATES: [CopulaFamily; 4] =
    [CopulaFamily::Gaussian, CopulaFamily::StudentT, CopulaFamily::Frank, CopulaFamily::Clayton];

/// Integer ν profile grid for the Student-t copula.
pub const T_COPULA_NU_GRID: core::ops::RangeInclusive<u32> = 2..=30;

pub const MIN_COPULA_OBS: usize = 20;

const RHO_MAX: f64 = 0.999;
const FRANK_MAX: f64 = 60.0;
const CLAYTON_MIN: f64 = 1e-4;
const CLAYTON_MAX: f64 = 60.0;
const GRID_POINTS: usize = 48;

/// Coarse grid followed by golden-section refinement around the best node.
fn maximize<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64) -> (f64, f64) {
    let step = (hi - lo) / GRID_POINTS as f64;
    let mut best = (0usize, f64::NEG_INFINITY);
    for i in 0..=GRID_POINTS {
        let v = f(lo + step * i as f64);
        if v > best.1 {
            best = (i, v);
        }
    }
    let centre = lo + step * best.0 as f64;
    let a = (centre - step).max(lo);
    let b = (centre + step).min(hi);
    let (x, v) = golden_max(&mut f, a, b, 1e-9 * (1.0 + centre.abs()));
    if v >= best.1 {
        (x, v)
    } else {
        (centre, best.1)
    }
}

fn total<F: Fn(f64, f64) -> f64>(pairs: &[(f64, f64)], f: F) -> f64 {
    let mut s = 0.0;
    for &(a, b) in pairs {
        s += f(a, b);
    }
    if s.is_nan() {
        f64::NEG_INFINITY
    } else {
        s
    }
}

/// Maximum-likelihood fit of one family; returns the model and its
/// log-likelihood.
pub fn fit_copula_mle(pseudo: &PseudoObservations, family: CopulaFamily) -> Result<(CopulaModel, f64)> {
    let n = pseudo.len();
    if n < MIN_COPULA_OBS {
        return Err(Error::TooFewObservations { needed: MIN_COPULA_OBS, got: n });
    }
    let u = pseudo.pairs();
    let (model, ll) = match family {
        CopulaFamily::Independence => (CopulaModel::Independence, 0.0),
        CopulaFamily::Dirichlet11a => {
            return Err(Error::invalid("the Dirichlet copula is evaluation-only"));
        }
        CopulaFamily::Gaussian => {
            let z: Vec<(f64, f64)> = u.iter().map(|&(a, b)| (norm_quantile(a), norm_quantile(b))).collect();
            let (rho, ll) = maximize(|r| total(&z, |s, t| gaussian_ln_pdf_z(r, s, t)), -RHO_MAX, RHO_MAX);
            (CopulaModel::Gaussian { rho }, ll)
        }
        CopulaFamily::StudentT => {
            let mut best: Option<(CopulaModel, f64)> = None;
            for nu in T_COPULA_NU_GRID {
                let nu = nu as f64;
                let x: Vec<(f64, f64)> = u.iter().map(|&(a, b)| (t_quantile(nu, a), t_quantile(nu, b))).collect();
                let (rho, ll) = maximize(|r| total(&x, |s, t| t_ln_pdf_x(r, nu, s, t)), -RHO_MAX, RHO_MAX);
                if best.as_ref().is_none_or(|&(_, b)| ll > b) {
                    best = Some((CopulaModel::StudentT { rho, nu }, ll));
                }
            }
            best.expect("nonempty grid")
        }
        CopulaFamily::Frank => {
            let (theta, ll) = maximize(
                |th| total(u, |a, b| ln_pdf_interior(&CopulaModel::Frank { theta: th }, a, b)),
                -FRANK_MAX,
                FRANK_MAX,
            );
            let theta = if theta.abs() < 1e-8 { 1e-8f64.copysign(theta) } else { theta };
            (CopulaModel::Frank { theta }, ll)
        }
        CopulaFamily::Clayton => {
            // search in log(theta)
            let (lt, ll) = maximize(
                |lt| {
                    let th = libm::exp(lt);
                    total(u, |a, b| ln_pdf_interior(&CopulaModel::Clayton { theta: th }, a, b))
                },
                libm::log(CLAYTON_MIN),
                libm::log(CLAYTON_MAX),
            );
            (CopulaModel::Clayton { theta: libm::exp(lt) }, ll)
        }
    };
    if !ll.is_finite() {
        return Err(Error::FitFailed {
            family: family.name(),
            detail: alloc::format!("log-likelihood {ll} at {model:?}"),
        });
    }
    Ok((model, ll))
}

#[derive(Debug, Clone, PartialEq)]
pub struct AicEntry {
    pub family: CopulaFamily,
    pub fit: Result<(CopulaModel, f64)>,
    /// `2k - 2 loglik`, or +inf when the fit failed.
    pub aic: f64,
}

/// Fits every candidate and returns the AIC minimizer with the full table.
/// Ties go to fewer parameters, then to earlier list position.
pub fn select_copula_aic(
    pseudo: &PseudoObservations,
    candidates: &[CopulaFamily],
) -> Result<(CopulaModel, Vec<AicEntry>)> {
    if candidates.is_empty() {
        return Err(Error::invalid("empty copula candidate list"));
    }
    let mut table = Vec::with_capacity(candidates.len());
    for &family in candidates {
        let fit = fit_copula_mle(pseudo, family);
        let aic = match &fit {
            Ok((_, ll)) => 2.0 * family.n_params() as f64 - 2.0 * ll,
            Err(_) => f64::INFINITY,
        };
        table.push(AicEntry { family, fit, aic });
    }
    let mut best: Option<(f64, usize, CopulaModel)> = None;
    for e in &table {
        if let Ok((m, _)) = &e.fit {
            let k = e.family.n_params();
            let better = match &best {
                None => true,
                Some((aic, bk, _)) => e.aic < *aic || (e.aic == *aic && k < *bk),
            };
            if better {
                best = Some((e.aic, k, *m));
            }
        }
    }
    match best {
        Some((_, _, m)) => Ok((m, table)),
        None => {
            if let [single] = table.as_slice() {
                if let Err(e) = &single.fit {
                    return Err(e.clone());
                }
            }
            Err(Error::AllFitsFailed)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::copula::copula_sample;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn draws(m: CopulaModel, n: usize, seed: u64) -> PseudoObservations {
        copula_sample(&m, n, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
    }

    #[test]
    fn clayton_mle() {
        let p = draws(CopulaModel::Clayton { theta: 2.0 }, 10_000, 21);
        let (m, _) = fit_copula_mle(&p, CopulaFamily::Clayton).unwrap();
        let CopulaModel::Clayton { theta } = m else { panic!() };
        assert!((theta - 2.0).abs() < 0.15, "theta={theta}");
        let (sel, _) = select_copula_aic(&p, &DEFAULT_CANDIDATES).unwrap();
        assert_eq!(sel.family(), CopulaFamily::Clayton);
    }

    #[test]
    fn frank_on_independence() {
        let p = draws(CopulaModel::Independence, 10_000, 22);
        let (m, _) = fit_copula_mle(&p, CopulaFamily::Frank).unwrap();
        let CopulaModel::Frank { theta } = m else { panic!() };
        assert!(theta.abs() < 0.15, "theta={theta}");
    }

    #[test]
    fn gaussian_mle_and_selection() {
        let rho0 = core::f64::consts::FRAC_1_SQRT_2;
        let p = draws(CopulaModel::Gaussian { rho: rho0 }, 10_000, 23);
        let (m, _) = fit_copula_mle(&p, CopulaFamily::Gaussian).unwrap();
        let CopulaModel::Gaussian { rho } = m else { panic!() };
        assert!((rho - rho0).abs() < 0.02);
        let (sel, _) = select_copula_aic(&p, &DEFAULT_CANDIDATES).unwrap();
        let rho = match sel {
            CopulaModel::Gaussian { rho } => rho,
            CopulaModel::StudentT { rho, nu } => {
                assert!(nu >= 10.0, "nu={nu}");
                rho
            }
            other => panic!("selected {other:?}"),
        };
        assert!((rho - rho0).abs() < 0.02);
    }

    #[test]
    fn independence_only_candidate() {
        let p = draws(CopulaModel::Clayton { theta: 2.0 }, 200, 24);
        let (sel, table) = select_copula_aic(&p, &[CopulaFamily::Independence]).unwrap();
        assert_eq!(sel, CopulaModel::Independence);
        assert_eq!(table[0].aic, 0.0);
    }

    #[test]
    fn small_samples_rejected() {
        let p = draws(CopulaModel::Independence, 10, 25);
        assert!(fit_copula_mle(&p, CopulaFamily::Gaussian).is_err());
        assert_eq!(select_copula_aic(&p, &DEFAULT_CANDIDATES).unwrap_err(), Error::AllFitsFailed);
    }
}
