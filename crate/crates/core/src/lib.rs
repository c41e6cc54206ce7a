//! Bivariate highest-density-region estimation by neighborhood quantiles.
//!
//! A measure `g(x, s_n)` is fitted on a sample, every sample point is
//! scored, and the HDR threshold is an order statistic of those scores.
//! Eight measures are provided: kernel density, kNN distances, ECDF
//! rectangle probabilities and parametric / nonparametric copula variants.
//!
//! ```
//! use hdr_core::prelude::*;
//! use rand::SeedableRng;
//!
//! let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
//! let scenario = Scenario::new(2).unwrap();
//! let sample = sample_scenario(&scenario, 200, &mut rng).unwrap();
//! let measure = fit_measure(&MeasureSpec::new(MeasureKind::M1KnnEucl), &sample).unwrap();
//! let scores = measure.score_sample(&sample).unwrap();
//! let region = estimate_hdr(&scores, 0.05).unwrap();
//! let labels = classify(&region, scores.scores());
//! assert_eq!(labels.count_inside(), 190);
//! ```
#![no_std]

extern crate alloc;

pub mod copula;
pub mod distributions;
pub mod error;
pub mod evaluation;
pub mod hdr;
pub mod math;
pub mod measures;
pub mod sample;
pub mod scenarios;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::copula::{
        copula_cdf, copula_pdf, copula_sample, fit_copula_mle, kendall_tau, npcop_fit, npcop_pdf, npcop_rect_prob,
        select_copula_aic, tau_to_param, CopulaFamily, CopulaModel, JointModel, NpCopulaFit, PseudoObservations,
    };
    pub use crate::distributions::{
        bvn_cdf, bvt_cdf, fit_marginal_mle, marginal_cdf, marginal_pdf, marginal_quantile, FitReport, MarginalFamily,
        MarginalModel,
    };
    pub use crate::error::{Error, Result};
    pub use crate::evaluation::{aggregate, confusion, metrics, ConfusionCounts, MetricsRow, MetricsSummary};
    pub use crate::hdr::{
        classify, density_quantile_hdr, estimate_hdr, measure_average, HdrRegion, Label, LabelVector,
    };
    pub use crate::measures::{
        fit_joint_model, fit_measure, fit_measure_with_joint, heuristic_eps, heuristic_k, FittedMeasure, MeasureKind,
        MeasureSpec, SupportClass,
    };
    pub use crate::sample::{
        ecdf1, knn_indices, rect_count, threshold_index, Orientation, Point2, Sample2D, ScoreVector,
    };
    pub use crate::scenarios::{build_truth_oracle, label_truth, sample_scenario, true_density, Scenario, TruthOracle};
}
