//! Monte Carlo benchmark over (scenario, n, measure, replicate).

use std::io::Write;
use std::time::Instant;

use hdr_core::copula::DEFAULT_CANDIDATES;
use hdr_core::evaluation::{MeanSd, MetricsSummary};
use hdr_core::measures::HyperParams;
use hdr_core::prelude::*;
use hdr_core::scenarios::oracle_from_densities;
use rayon::prelude::*;

use crate::config::{MeasureChoice, DEFAULT_REF_SIZE};
use crate::csvio::{fmt_f64, fmt_opt};
use crate::error::{usage, Result};
use crate::rng;

/// Reference draws per oracle stream.
pub const ORACLE_CHUNK: usize = 1 << 16;

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub scenarios: Vec<Scenario>,
    pub ns: Vec<usize>,
    pub reps: usize,
    pub alpha: f64,
    pub measures: Vec<MeasureChoice>,
    pub seed: u64,
    pub ref_size: usize,
    pub workers: usize,
    /// Record wall-clock time per fit. Off by default so output is reproducible.
    pub timing: bool,
}

impl RunConfig {
    pub fn new(scenarios: Vec<Scenario>, ns: Vec<usize>, measures: Vec<MeasureChoice>) -> Self {
        RunConfig {
            scenarios,
            ns,
            reps: 300,
            alpha: 0.05,
            measures,
            seed: 42,
            ref_size: DEFAULT_REF_SIZE,
            workers: 1,
            timing: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.scenarios.is_empty() || self.ns.is_empty() || self.measures.is_empty() {
            return Err(usage("scenarios, sizes and measures must be non-empty"));
        }
        if self.reps == 0 {
            return Err(usage("reps must be at least 1"));
        }
        crate::config::parse_alpha(self.alpha)?;
        if self.ref_size < hdr_core::scenarios::MIN_REF_SIZE {
            return Err(usage(format!("ref-size must be at least {}", hdr_core::scenarios::MIN_REF_SIZE)));
        }
        Ok(())
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        Ok(rayon::ThreadPoolBuilder::new().num_threads(self.workers.max(1)).build()?)
    }
}

/// One row of the result file.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRecord {
    pub scenario: u8,
    pub n: usize,
    pub measure: String,
    pub replicate: usize,
    pub metrics: Option<MetricsRow>,
    pub wall_time_ms: Option<f64>,
    pub hyperparams: String,
    pub copula_family: Option<&'static str>,
    pub error: Option<String>,
}

pub const RESULT_HEADER: [&str; 14] = [
    "scenario",
    "n",
    "measure",
    "replicate",
    "err",
    "fpr",
    "fnr",
    "accuracy",
    "f1",
    "mcc",
    "wall_time_ms",
    "hyperparams",
    "fitted_copula_family",
    "error",
];

fn fmt_copula(c: &CopulaModel) -> String {
    match *c {
        CopulaModel::Gaussian { rho } => format!("gaussian(rho={})", fmt_f64(rho)),
        CopulaModel::StudentT { rho, nu } => format!("student-t(rho={} nu={})", fmt_f64(rho), fmt_f64(nu)),
        CopulaModel::Frank { theta } => format!("frank(theta={})", fmt_f64(theta)),
        CopulaModel::Clayton { theta } => format!("clayton(theta={})", fmt_f64(theta)),
        CopulaModel::Independence => "independence".into(),
        CopulaModel::Dirichlet11a { a } => format!("dirichlet11a(a={})", fmt_f64(a)),
    }
}

/// `key=value` pairs separated by `;`.
pub fn fmt_hyperparams(h: &HyperParams) -> String {
    let mut parts = Vec::new();
    if let Some(k) = h.k {
        parts.push(format!("k={k}"));
    }
    if let Some(e) = h.eps {
        parts.push(format!("eps={}", fmt_f64(e)));
    }
    match h.h {
        Some((a, b)) if a == b => parts.push(format!("h={}", fmt_f64(a))),
        Some((a, b)) => parts.push(format!("h={}/{}", fmt_f64(a), fmt_f64(b))),
        None => {}
    }
    if let Some((a, b)) = h.h_copula {
        parts.push(format!("hc={}/{}", fmt_f64(a), fmt_f64(b)));
    }
    if let Some(c) = &h.copula {
        parts.push(format!("copula={}", fmt_copula(c)));
    }
    parts.join(";")
}

/// Truth oracle for one scenario from `ref_size` reference draws, split into
/// fixed-size chunks with their own streams so the result does not depend on
/// the worker count.
pub fn build_oracle(s: &Scenario, alpha: f64, ref_size: usize, seed: u64) -> Result<TruthOracle> {
    if ref_size < hdr_core::scenarios::MIN_REF_SIZE {
        return Err(usage(format!("ref-size must be at least {}", hdr_core::scenarios::MIN_REF_SIZE)));
    }
    let chunks = ref_size.div_ceil(ORACLE_CHUNK);
    let parts: Vec<Vec<f64>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let len = ORACLE_CHUNK.min(ref_size - c * ORACLE_CHUNK);
            let mut r = rng::stream(seed, &rng::oracle_key(s.id(), c));
            (0..len).map(|_| true_density(s, s.draw(&mut r))).collect()
        })
        .collect();
    let mut dens = parts.concat();
    Ok(oracle_from_densities(s, alpha, &mut dens))
}

pub fn build_oracles(cfg: &RunConfig) -> Result<Vec<TruthOracle>> {
    cfg.validate()?;
    let pool = cfg.pool()?;
    pool.install(|| cfg.scenarios.iter().map(|s| build_oracle(s, cfg.alpha, cfg.ref_size, cfg.seed)).collect())
}

/// Outcome of one measure on one sample.
struct Fit {
    measure: FittedMeasure,
    millis: f64,
}

fn fit_all(choices: &[MeasureChoice], s: &Scenario, sample: &Sample2D) -> Vec<hdr_core::Result<Fit>> {
    // parametric kinds share the joint model of the replicate
    let mut joint: Option<(hdr_core::Result<JointModel>, f64)> = None;
    choices
        .iter()
        .map(|choice| {
            let spec = choice.spec_for(s);
            let start = Instant::now();
            if spec.kind.is_parametric() && sample.len() >= hdr_core::measures::MIN_MODEL_OBS {
                let (j, jt) = joint.get_or_insert_with(|| {
                    let t = Instant::now();
                    let families = spec.marginal_families.expect("parametric spec carries families");
                    let j = fit_joint_model(sample, families, &DEFAULT_CANDIDATES);
                    (j, t.elapsed().as_secs_f64() * 1e3)
                });
                let jt = *jt;
                let j = match j {
                    Ok(j) => *j,
                    Err(e) => return Err(hdr_core::Error::Measure { kind: spec.kind, source: Box::new(e.clone()) }),
                };
                let start = Instant::now();
                let m = fit_measure_with_joint(&spec, sample, j)?;
                Ok(Fit { measure: m, millis: jt + start.elapsed().as_secs_f64() * 1e3 })
            } else {
                let m = fit_measure(&spec, sample)?;
                Ok(Fit { measure: m, millis: start.elapsed().as_secs_f64() * 1e3 })
            }
        })
        .collect()
}

fn evaluate(fit: &Fit, sample: &Sample2D, truth: &LabelVector, alpha: f64) -> hdr_core::Result<(MetricsRow, f64)> {
    let start = Instant::now();
    let scores = fit.measure.score_sample(sample)?;
    let region = estimate_hdr(&scores, alpha)?;
    let pred = classify(&region, scores.scores());
    let millis = fit.millis + start.elapsed().as_secs_f64() * 1e3;
    Ok((metrics(&confusion(&pred, truth)?)?, millis))
}

fn run_replicate(cfg: &RunConfig, s: &Scenario, oracle: &TruthOracle, n: usize, rep: usize) -> Vec<ResultRecord> {
    let base = |choice: &MeasureChoice| ResultRecord {
        scenario: s.id(),
        n,
        measure: choice.label(),
        replicate: rep,
        metrics: None,
        wall_time_ms: None,
        hyperparams: String::new(),
        copula_family: None,
        error: None,
    };
    let mut r = rng::stream(cfg.seed, &rng::sample_key(s.id(), n, rep));
    let sample = match sample_scenario(s, n, &mut r) {
        Ok(x) => x,
        Err(e) => return cfg.measures.iter().map(|c| ResultRecord { error: Some(e.to_string()), ..base(c) }).collect(),
    };
    let truth = label_truth(oracle, s, sample.points());
    let fits = fit_all(&cfg.measures, s, &sample);
    cfg.measures
        .iter()
        .zip(fits)
        .map(|(choice, fit)| {
            let mut rec = base(choice);
            match fit.and_then(|f| evaluate(&f, &sample, &truth, cfg.alpha).map(|m| (f, m))) {
                Ok((f, (m, millis))) => {
                    let h = f.measure.hyperparams();
                    rec.metrics = Some(m);
                    rec.hyperparams = fmt_hyperparams(h);
                    rec.copula_family = h.copula.map(|c| c.family().name());
                    rec.wall_time_ms = cfg.timing.then_some(millis);
                }
                Err(e) => {
                    log::warn!("S{} n={} {} r{}: {}", s.id(), n, choice.label(), rep, e);
                    rec.error = Some(e.to_string());
                }
            }
            rec
        })
        .collect()
}

pub fn run_bench(cfg: &RunConfig) -> Result<Vec<ResultRecord>> {
    let oracles = build_oracles(cfg)?;
    run_bench_with_oracles(cfg, &oracles)
}

/// Runs the benchmark with oracles already built for `cfg.scenarios`
/// (same order). Rows come out ordered by scenario, n, measure, replicate.
pub fn run_bench_with_oracles(cfg: &RunConfig, oracles: &[TruthOracle]) -> Result<Vec<ResultRecord>> {
    cfg.validate()?;
    if oracles.len() != cfg.scenarios.len() {
        return Err(usage("one oracle per scenario required"));
    }
    let mut tasks = Vec::new();
    for (si, _) in cfg.scenarios.iter().enumerate() {
        for &n in &cfg.ns {
            for rep in 0..cfg.reps {
                tasks.push((si, n, rep));
            }
        }
    }
    log::info!("{} replicates x {} measures on {} workers", tasks.len(), cfg.measures.len(), cfg.workers);
    let pool = cfg.pool()?;
    let per_task: Vec<Vec<ResultRecord>> = pool.install(|| {
        tasks.par_iter().map(|&(si, n, rep)| run_replicate(cfg, &cfg.scenarios[si], &oracles[si], n, rep)).collect()
    });
    // task order is (scenario, n, rep); reorder to (scenario, n, measure, rep)
    let reps = cfg.reps;
    let mut out = Vec::with_capacity(per_task.len() * cfg.measures.len());
    for cell in per_task.chunks(reps) {
        for m in 0..cfg.measures.len() {
            out.extend(cell.iter().map(|rows| rows[m].clone()));
        }
    }
    Ok(out)
}

pub fn write_results<W: Write>(w: W, records: &[ResultRecord]) -> csv::Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(RESULT_HEADER)?;
    for r in records {
        let mut row = vec![format!("S{}", r.scenario), r.n.to_string(), r.measure.clone(), r.replicate.to_string()];
        match &r.metrics {
            Some(m) => row.extend(m.values().iter().map(|&v| fmt_f64(v))),
            None => row.extend(std::iter::repeat_n(String::new(), 6)),
        }
        row.push(fmt_opt(r.wall_time_ms));
        row.push(r.hyperparams.clone());
        row.push(r.copula_family.unwrap_or("").to_string());
        row.push(r.error.clone().unwrap_or_default());
        wtr.write_record(&row)?;
    }
    wtr.flush()?;
    Ok(())
}

/// Aggregated metrics of one (scenario, n, measure) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub scenario: u8,
    pub n: usize,
    pub measure: String,
    pub reps: usize,
    pub failed: usize,
    /// `None` when fewer than two replicates succeeded.
    pub summary: Option<MetricsSummary>,
}

impl SummaryRow {
    pub fn mean(&self, metric: &str) -> Option<f64> {
        self.get(metric).map(|m| m.mean)
    }

    pub fn get(&self, metric: &str) -> Option<MeanSd> {
        let i = MetricsRow::NAMES.iter().position(|&m| m == metric)?;
        self.summary.as_ref().map(|s| s.values()[i])
    }
}

/// Groups consecutive records of the same cell; expects the order produced
/// by [`run_bench_with_oracles`].
pub fn summarize(records: &[ResultRecord]) -> Vec<SummaryRow> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < records.len() {
        let head = &records[i];
        let end = records[i..]
            .iter()
            .position(|r| r.scenario != head.scenario || r.n != head.n || r.measure != head.measure)
            .map_or(records.len(), |p| i + p);
        let cell = &records[i..end];
        let rows: Vec<MetricsRow> = cell.iter().filter_map(|r| r.metrics).collect();
        out.push(SummaryRow {
            scenario: head.scenario,
            n: head.n,
            measure: head.measure.clone(),
            reps: cell.len(),
            failed: cell.len() - rows.len(),
            summary: aggregate(&rows).ok(),
        });
        i = end;
    }
    out
}

pub fn summary_header() -> Vec<String> {
    let mut h: Vec<String> = ["scenario", "n", "measure", "reps", "failed"].iter().map(|s| s.to_string()).collect();
    for m in MetricsRow::NAMES {
        h.push(format!("{m}_mean"));
        h.push(format!("{m}_sd"));
    }
    h
}

pub(crate) fn summary_cells(s: Option<&MetricsSummary>) -> Vec<String> {
    match s {
        Some(s) => s.values().iter().flat_map(|m| [fmt_f64(m.mean), fmt_f64(m.sd)]).collect(),
        None => vec![String::new(); 12],
    }
}

pub fn write_summary<W: Write>(w: W, rows: &[SummaryRow]) -> csv::Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(summary_header())?;
    for r in rows {
        let mut row = vec![
            format!("S{}", r.scenario),
            r.n.to_string(),
            r.measure.clone(),
            r.reps.to_string(),
            r.failed.to_string(),
        ];
        row.extend(summary_cells(r.summary.as_ref()));
        wtr.write_record(&row)?;
    }
    wtr.flush()?;
    Ok(())
}
