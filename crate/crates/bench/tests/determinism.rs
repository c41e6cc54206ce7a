use hdr_bench::bench::{run_bench, summarize, write_results, write_summary, RunConfig};
use hdr_bench::config::parse_measures;
use hdr_bench::tune::{run_tune, TuneConfig};
use hdr_core::prelude::*;

fn config(workers: usize) -> RunConfig {
    let mut cfg = RunConfig::new(
        vec![Scenario::new(1).unwrap(), Scenario::new(17).unwrap()],
        vec![50, 80],
        parse_measures("all").unwrap(),
    );
    cfg.reps = 5;
    cfg.ref_size = 100_000;
    cfg.workers = workers;
    cfg
}

fn csv_bytes(cfg: &RunConfig) -> (Vec<u8>, Vec<u8>) {
    let records = run_bench(cfg).unwrap();
    let mut a = Vec::new();
    write_results(&mut a, &records).unwrap();
    let mut b = Vec::new();
    write_summary(&mut b, &summarize(&records)).unwrap();
    (a, b)
}

#[test]
fn byte_identical_across_reruns_and_workers() {
    let one = csv_bytes(&config(1));
    assert_eq!(one, csv_bytes(&config(1)));
    assert_eq!(one, csv_bytes(&config(4)));
    let text = String::from_utf8(one.0).unwrap();
    // header + 2 scenarios * 2 sizes * 8 measures * 5 reps
    assert_eq!(text.lines().count(), 1 + 2 * 2 * 8 * 5);
    assert!(text.lines().nth(1).unwrap().starts_with("S1,50,m0-kde,0,"));
}

#[test]
fn seed_changes_output() {
    let mut other = config(1);
    other.seed = 43;
    assert_ne!(csv_bytes(&config(1)).0, csv_bytes(&other).0);
}

#[test]
fn records_are_complete() {
    let records = run_bench(&config(2)).unwrap();
    for r in &records {
        assert!(r.error.is_none(), "{r:?}");
        let m = r.metrics.unwrap();
        assert_eq!(m.err + m.accuracy, 1.0);
        assert!(!r.hyperparams.is_empty(), "{r:?}");
        let parametric = r.measure.contains("pcop") && !r.measure.contains("npcop");
        assert_eq!(r.copula_family.is_some(), parametric, "{r:?}");
        assert!(r.wall_time_ms.is_none());
    }
    // S17 parametric fits use the Beta marginals
    let s17 = records.iter().find(|r| r.scenario == 17 && r.measure == "m0-pcop").unwrap();
    assert!(s17.hyperparams.contains("copula="));
}

#[test]
fn measures_share_replicate_data() {
    // a measure's rows do not depend on which other measures run alongside
    let mut solo = config(1);
    solo.measures = parse_measures("m1").unwrap();
    let all = run_bench(&config(1)).unwrap();
    let only = run_bench(&solo).unwrap();
    let from_all: Vec<_> = all.iter().filter(|r| r.measure == "m1").collect();
    assert_eq!(from_all.len(), only.len());
    for (a, b) in from_all.iter().zip(&only) {
        assert_eq!(*a, b);
    }
}

#[test]
fn single_value_tune_equals_bench() {
    let s = Scenario::new(2).unwrap();
    let res = run_tune(&TuneConfig {
        scenario: s,
        n: 60,
        measure: MeasureKind::M1KnnEucl,
        grid: vec![6.0],
        reps: 8,
        alpha: 0.05,
        seed: 42,
        ref_size: 100_000,
        workers: 2,
    })
    .unwrap();
    let mut cfg = RunConfig::new(vec![s], vec![60], parse_measures("m1:k=6").unwrap());
    cfg.reps = 8;
    cfg.ref_size = 100_000;
    let bench = summarize(&run_bench(&cfg).unwrap());
    assert_eq!(res.rows.len(), 1);
    assert_eq!(res.rows[0].cell.summary, bench[0].summary);
    assert_eq!(res.best(), Some(6.0));
}
