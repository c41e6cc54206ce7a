use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use hdr_core::prelude::*;

use hdr_bench::apply::{run_apply, write_labeled, ApplyConfig, Scale};
use hdr_bench::bench::{run_bench, summarize, write_results, write_summary, RunConfig};
use hdr_bench::config::{self, MeasureChoice, DEFAULT_REF_SIZE};
use hdr_bench::csvio::write_file;
use hdr_bench::simulate::{simulate, write_draws};
use hdr_bench::tune::{run_tune, write_tune, TuneConfig};

#[derive(Parser)]
#[command(name = "hdr", version, about = "Bivariate highest-density region estimation and benchmarking")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// Run seed
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Worker threads (default: available parallelism)
    #[arg(long, env = "HDR_WORKERS")]
    workers: Option<usize>,
    /// Reference draws for the true density level
    #[arg(long, default_value_t = DEFAULT_REF_SIZE)]
    ref_size: usize,
}

#[derive(Subcommand)]
enum Cmd {
    /// Monte Carlo comparison of measures over scenarios
    Bench {
        /// Comma list such as S1,S6 or "all"
        #[arg(long)]
        scenarios: String,
        /// Sample sizes, comma separated
        #[arg(long = "n")]
        n: String,
        /// Measures, e.g. "all" or "m0-kde,m1:k=10,m3-ecdf:eps=0.5"
        #[arg(long, default_value = "all")]
        measures: String,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long, default_value_t = 300)]
        reps: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        summary: Option<PathBuf>,
        /// Record per-fit wall time (makes output non-reproducible)
        #[arg(long)]
        timing: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Sweep k or eps of one measure
    Tune {
        #[arg(long)]
        scenario: String,
        #[arg(long = "n")]
        n: usize,
        #[arg(long)]
        measure: String,
        /// a:b, a:b:step or a comma list
        #[arg(long)]
        grid: String,
        #[arg(long, default_value_t = 50)]
        reps: usize,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Label two columns of a CSV file
    Apply {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long, default_value = "m0-kde,m0-npcop,m1,m2,m3-ecdf,m3-npcop")]
        measures: String,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        /// none or zscore
        #[arg(long, default_value = "zscore")]
        scale: String,
        /// unbounded or simplex
        #[arg(long, default_value = "unbounded")]
        support: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Write scenario draws and their true density
    Simulate {
        #[arg(long)]
        scenario: String,
        #[arg(long = "n")]
        n: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn one_scenario(s: &str) -> Result<Scenario> {
    let v = config::parse_scenarios(s)?;
    anyhow::ensure!(v.len() == 1, "expected a single scenario, got {s:?}");
    Ok(v[0])
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match Cli::parse().cmd {
        Cmd::Bench { scenarios, n, measures, alpha, reps, out, summary, timing, common } => {
            let mut cfg = RunConfig::new(
                config::parse_scenarios(&scenarios)?,
                config::parse_sizes(&n)?,
                config::parse_measures(&measures)?,
            );
            cfg.alpha = config::parse_alpha(alpha)?;
            cfg.reps = reps;
            cfg.seed = common.seed;
            cfg.ref_size = common.ref_size;
            cfg.workers = config::resolve_workers(common.workers);
            cfg.timing = timing;
            let records = run_bench(&cfg)?;
            write_file(&out, |w| write_results(w, &records))?;
            let rows = summarize(&records);
            if let Some(path) = summary {
                write_file(&path, |w| write_summary(w, &rows))?;
            }
            for r in &rows {
                if let Some(s) = &r.summary {
                    log::info!(
                        "S{} n={} {}: err {:.4} ({:.4}) mcc {:.4} ({:.4})",
                        r.scenario,
                        r.n,
                        r.measure,
                        s.err.mean,
                        s.err.sd,
                        s.mcc.mean,
                        s.mcc.sd
                    );
                }
            }
        }
        Cmd::Tune { scenario, n, measure, grid, reps, alpha, out, common } => {
            let kind = MeasureChoice::parse(&measure)?.kind;
            let cfg = TuneConfig {
                scenario: one_scenario(&scenario)?,
                n,
                measure: kind,
                grid: config::parse_grid(&grid)?,
                reps,
                alpha: config::parse_alpha(alpha)?,
                seed: common.seed,
                ref_size: common.ref_size,
                workers: config::resolve_workers(common.workers),
            };
            let res = run_tune(&cfg)?;
            write_file(&out, |w| write_tune(w, &res))?;
            if let Some(best) = res.best() {
                println!("best {}={} by mean err", res.param, best);
            }
        }
        Cmd::Apply { input, x, y, measures, alpha, scale, support, out, svg } => {
            let support = match support.to_ascii_lowercase().as_str() {
                "unbounded" => SupportClass::Unbounded,
                "simplex" => SupportClass::Simplex,
                other => anyhow::bail!("unknown support {other:?} (unbounded, simplex)"),
            };
            let cfg = ApplyConfig {
                input,
                col_x: x,
                col_y: y,
                measures: config::parse_measures(&measures)?,
                alpha: config::parse_alpha(alpha)?,
                scale: scale.parse::<Scale>()?,
                support,
            };
            let res = run_apply(&cfg)?;
            write_file(&out, |w| write_labeled(w, &cfg, &res))?;
            if let Some(path) = svg {
                let doc = hdr_bench::svg::scatter(&res.points, &res.consensus, &cfg.col_x, &cfg.col_y);
                std::fs::write(&path, doc).with_context(|| format!("writing {}", path.display()))?;
            }
            log::info!("consensus: {} of {} inside", res.consensus.count_inside(), res.consensus.len());
        }
        Cmd::Simulate { scenario, n, seed, out } => {
            let s = one_scenario(&scenario)?;
            anyhow::ensure!(n > 0, "n must be positive");
            let sample = simulate(&s, n, seed)?;
            write_file(&out, |w| write_draws(w, &s, &sample))?;
        }
    }
    Ok(())
}
