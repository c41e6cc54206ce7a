//! The seventeen benchmark laws, their closed-form densities and the Monte
//! Carlo truth oracle.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use rand::Rng;

use crate::copula::{dirichlet11a_draw, CopulaModel, JointModel};
use crate::distributions::{MarginalFamily, MarginalModel};
use crate::error::{Error, Result};
use crate::hdr::{Label, LabelVector};
use crate::math;
use crate::measures::SupportClass;
use crate::sample::{Point2, Sample2D};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScenarioLaw {
    Sklar(JointModel),
    /// First two coordinates of Dirichlet(1, 1, a3).
    Dirichlet {
        a3: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    id: u8,
    law: ScenarioLaw,
    description: &'static str,
}

pub const DIRICHLET_A3: f64 = 2.0;
const SIGMA: f64 = SQRT_2;
/// Frank parameter used by the grid (rounded; Kendall's tau is about 0.501).
pub const FRANK_THETA: f64 = 5.75;

const COPULA_NAMES: [&str; 4] = ["Gaussian", "Student-t", "Frank", "Clayton"];
const MARGIN_NAMES: [&str; 4] = ["heavy tails", "unimodal", "bimodal", "quadrimodal"];

const DESCRIPTIONS: [&str; 17] = [
    "S1: Gaussian copula, Student-t marginals",
    "S2: Gaussian copula, Gaussian marginals",
    "S3: Gaussian copula, Gaussian and bimodal mixture marginals",
    "S4: Gaussian copula, bimodal mixture marginals",
    "S5: Student-t copula, Student-t marginals",
    "S6: Student-t copula, Gaussian marginals",
    "S7: Student-t copula, Gaussian and bimodal mixture marginals",
    "S8: Student-t copula, bimodal mixture marginals",
    "S9: Frank copula, Student-t marginals",
    "S10: Frank copula, Gaussian marginals",
    "S11: Frank copula, Gaussian and bimodal mixture marginals",
    "S12: Frank copula, bimodal mixture marginals",
    "S13: Clayton copula, Student-t marginals",
    "S14: Clayton copula, Gaussian marginals",
    "S15: Clayton copula, Gaussian and bimodal mixture marginals",
    "S16: Clayton copula, bimodal mixture marginals",
    "S17: Dirichlet(1, 1, 2) on the simplex",
];

fn grid_copula(block: u8) -> CopulaModel {
    match block {
        0 => CopulaModel::Gaussian { rho: FRAC_1_SQRT_2 },
        1 => CopulaModel::StudentT { rho: FRAC_1_SQRT_2, nu: 6.0 },
        2 => CopulaModel::Frank { theta: FRANK_THETA },
        _ => CopulaModel::Clayton { theta: 2.0 },
    }
}

fn grid_marginals(scheme: u8) -> (MarginalModel, MarginalModel) {
    let normal = |mu: f64| MarginalModel::Normal { mu, sigma: SIGMA };
    let mix = |mu1: f64, mu2: f64| MarginalModel::NormalMixture { w: 0.5, mu1, mu2, sigma: SIGMA };
    match scheme {
        0 => (MarginalModel::StudentT { nu: 2.0 }, MarginalModel::StudentT { nu: 2.0 }),
        1 => (normal(0.0), normal(1.0)),
        2 => (normal(0.0), mix(1.0, 13.0)),
        _ => (mix(0.0, 9.0), mix(1.0, 8.0)),
    }
}

impl Scenario {
    pub fn new(id: u8) -> Result<Self> {
        let law = match id {
            1..=16 => {
                let (m1, m2) = grid_marginals((id - 1) % 4);
                ScenarioLaw::Sklar(JointModel { m1, m2, copula: grid_copula((id - 1) / 4) })
            }
            17 => ScenarioLaw::Dirichlet { a3: DIRICHLET_A3 },
            _ => return Err(Error::invalid(alloc::format!("unknown scenario S{id}"))),
        };
        Ok(Scenario { id, law, description: DESCRIPTIONS[id as usize - 1] })
    }

    /// Accepts `S7`, `s7` or `7`.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        let digits = t.strip_prefix('S').or_else(|| t.strip_prefix('s')).unwrap_or(t);
        let id: u8 = digits.parse().map_err(|_| Error::invalid(alloc::format!("unknown scenario {s:?}")))?;
        Scenario::new(id)
    }

    pub fn all() -> Vec<Scenario> {
        (1..=17).map(|i| Scenario::new(i).expect("valid id")).collect()
    }

    pub fn id(&self) -> u8 {
        self.id
    }

    pub fn name(&self) -> alloc::string::String {
        alloc::format!("S{}", self.id)
    }

    pub fn law(&self) -> &ScenarioLaw {
        &self.law
    }

    pub fn description(&self) -> &'static str {
        self.description
    }

    /// Grid labels `(copula, marginal scheme)`; `None` for S17.
    pub fn grid_labels(&self) -> Option<(&'static str, &'static str)> {
        match self.id {
            1..=16 => {
                let i = (self.id - 1) as usize;
                Some((COPULA_NAMES[i / 4], MARGIN_NAMES[i % 4]))
            }
            _ => None,
        }
    }

    /// For S17 this is the copula of the Dirichlet law.
    pub fn copula(&self) -> CopulaModel {
        match self.law {
            ScenarioLaw::Sklar(j) => j.copula,
            ScenarioLaw::Dirichlet { a3 } => CopulaModel::Dirichlet11a { a: a3 },
        }
    }

    pub fn marginals(&self) -> Option<(MarginalModel, MarginalModel)> {
        match self.law {
            ScenarioLaw::Sklar(j) => Some((j.m1, j.m2)),
            ScenarioLaw::Dirichlet { .. } => None,
        }
    }

    /// Marginal families a parametric fit should assume.
    pub fn marginal_families(&self) -> (MarginalFamily, MarginalFamily) {
        match self.law {
            ScenarioLaw::Sklar(j) => (j.m1.family(), j.m2.family()),
            ScenarioLaw::Dirichlet { .. } => (MarginalFamily::Beta11a, MarginalFamily::Beta11a),
        }
    }

    pub fn support_class(&self) -> SupportClass {
        match self.law {
            ScenarioLaw::Sklar(_) => SupportClass::Unbounded,
            ScenarioLaw::Dirichlet { .. } => SupportClass::Simplex,
        }
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Point2 {
        match self.law {
            ScenarioLaw::Sklar(j) => j.draw(rng),
            ScenarioLaw::Dirichlet { a3 } => {
                let (x1, x2) = dirichlet11a_draw(a3, rng);
                Point2::new(x1, x2)
            }
        }
    }
}

pub fn sample_scenario<R: Rng + ?Sized>(s: &Scenario, n: usize, rng: &mut R) -> Result<Sample2D> {
    if n == 0 {
        return Err(Error::ZeroCount);
    }
    Sample2D::new((0..n).map(|_| s.draw(rng)).collect())
}

pub fn true_density(s: &Scenario, x: Point2) -> f64 {
    match s.law {
        ScenarioLaw::Sklar(j) => j.pdf(x),
        ScenarioLaw::Dirichlet { a3 } => {
            let rest = 1.0 - x.x1 - x.x2;
            if x.x1 < 0.0 || x.x2 < 0.0 || rest < 0.0 {
                return 0.0;
            }
            // 1 / B(1, 1, a3) = Gamma(a3 + 2) / Gamma(a3)
            let norm = math::exp(math::ln_gamma(a3 + 2.0) - math::ln_gamma(a3));
            norm * math::powf(rest, a3 - 1.0)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruthOracle {
    pub scenario_id: u8,
    pub alpha: f64,
    pub f_alpha: f64,
    pub ref_size: usize,
}

pub const MIN_REF_SIZE: usize = 100_000;

pub fn build_truth_oracle<R: Rng + ?Sized>(
    s: &Scenario,
    alpha: f64,
    ref_size: usize,
    rng: &mut R,
) -> Result<TruthOracle> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidAlpha(alpha));
    }
    if ref_size < MIN_REF_SIZE {
        return Err(Error::TooFewObservations { needed: MIN_REF_SIZE, got: ref_size });
    }
    let mut dens: Vec<f64> = (0..ref_size).map(|_| true_density(s, s.draw(rng))).collect();
    Ok(oracle_from_densities(s, alpha, &mut dens))
}

/// Truth oracle from precomputed reference densities (reordered in place).
pub fn oracle_from_densities(s: &Scenario, alpha: f64, dens: &mut [f64]) -> TruthOracle {
    let m = dens.len();
    let rank = (libm::floor(alpha * m as f64 + 1e-9) as usize).clamp(1, m);
    let (_, &mut f_alpha, _) = dens.select_nth_unstable_by(rank - 1, f64::total_cmp);
    TruthOracle { scenario_id: s.id, alpha, f_alpha, ref_size: m }
}

pub fn label_truth(oracle: &TruthOracle, s: &Scenario, points: &[Point2]) -> LabelVector {
    LabelVector::new(
        points
            .iter()
            .map(|&p| if true_density(s, p) >= oracle.f_alpha { Label::Inside } else { Label::Outside })
            .collect(),
    )
}
