//! Grid tuning of k or eps for a single measure.

use std::io::Write;

use hdr_core::prelude::*;

use crate::bench::{build_oracle, run_bench_with_oracles, summarize, summary_cells, RunConfig, SummaryRow};
use crate::config::MeasureChoice;
use crate::csvio::fmt_f64;
use crate::error::{usage, Result};

#[derive(Debug, Clone)]
pub struct TuneConfig {
    pub scenario: Scenario,
    pub n: usize,
    pub measure: MeasureKind,
    pub grid: Vec<f64>,
    pub reps: usize,
    pub alpha: f64,
    pub seed: u64,
    pub ref_size: usize,
    pub workers: usize,
}

#[derive(Debug, Clone)]
pub struct TuneRow {
    pub value: f64,
    pub cell: SummaryRow,
}

#[derive(Debug, Clone)]
pub struct TuneResult {
    pub param: &'static str,
    pub rows: Vec<TuneRow>,
}

impl TuneResult {
    /// Grid value with the smallest mean of `metric` (first on ties),
    /// or the largest when `maximize`.
    pub fn best_by(&self, metric: &str, maximize: bool) -> Option<f64> {
        let mut best: Option<(f64, f64)> = None;
        for r in &self.rows {
            let Some(m) = r.cell.mean(metric) else { continue };
            let better = match best {
                None => true,
                Some((_, b)) => {
                    if maximize {
                        m > b
                    } else {
                        m < b
                    }
                }
            };
            if better {
                best = Some((r.value, m));
            }
        }
        best.map(|b| b.0)
    }

    pub fn best(&self) -> Option<f64> {
        self.best_by("err", false)
    }
}

fn choice_for(kind: MeasureKind, value: f64) -> Result<MeasureChoice> {
    let mut c = MeasureChoice::new(kind);
    if kind.uses_k() {
        if value < 1.0 || value.fract() != 0.0 {
            return Err(usage(format!("k grid values must be positive integers, got {value}")));
        }
        c.k = Some(value as usize);
    } else if kind.uses_eps() {
        if !(value > 0.0 && value.is_finite()) {
            return Err(usage(format!("eps grid values must be positive, got {value}")));
        }
        c.eps = Some(value);
    } else {
        return Err(usage(format!("{} has no tunable hyperparameter", kind.name())));
    }
    Ok(c)
}

pub fn run_tune(cfg: &TuneConfig) -> Result<TuneResult> {
    if cfg.grid.is_empty() {
        return Err(usage("empty grid"));
    }
    let measures = cfg.grid.iter().map(|&v| choice_for(cfg.measure, v)).collect::<Result<Vec<_>>>()?;
    let param = if cfg.measure.uses_k() { "k" } else { "eps" };
    let mut run = RunConfig::new(vec![cfg.scenario], vec![cfg.n], measures);
    run.reps = cfg.reps;
    run.alpha = cfg.alpha;
    run.seed = cfg.seed;
    run.ref_size = cfg.ref_size;
    run.workers = cfg.workers;
    run.validate()?;
    let oracle = {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.workers.max(1)).build()?;
        pool.install(|| build_oracle(&cfg.scenario, cfg.alpha, cfg.ref_size, cfg.seed))?
    };
    // every grid value is one measure column of the same replicates
    let records = run_bench_with_oracles(&run, &[oracle])?;
    let rows = summarize(&records).into_iter().zip(&cfg.grid).map(|(cell, &value)| TuneRow { value, cell }).collect();
    Ok(TuneResult { param, rows })
}

pub fn write_tune<W: Write>(w: W, res: &TuneResult) -> csv::Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    let mut header: Vec<String> = vec!["param".into(), "value".into(), "reps".into(), "failed".into()];
    header.extend(crate::bench::summary_header().into_iter().skip(5));
    wtr.write_record(&header)?;
    for r in &res.rows {
        let mut row = vec![res.param.to_string(), fmt_f64(r.value), r.cell.reps.to_string(), r.cell.failed.to_string()];
        row.extend(summary_cells(r.cell.summary.as_ref()));
        wtr.write_record(&row)?;
    }
    wtr.flush()?;
    Ok(())
}
