use hdr_core::copula::empirical_kendall_tau;
use hdr_core::math::gauss_legendre;
use hdr_core::prelude::*;
use hdr_core::scenarios::MIN_REF_SIZE;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    (m, xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0))
}

fn marginals_of(s: &Scenario) -> (MarginalModel, MarginalModel) {
    s.marginals().unwrap_or((MarginalModel::Beta11a { a: 2.0 }, MarginalModel::Beta11a { a: 2.0 }))
}

#[test]
fn s2_moments() {
    let s = sample_scenario(&Scenario::new(2).unwrap(), 100_000, &mut rng(1)).unwrap();
    let (m1, v1) = mean_var(&s.column(0));
    let (m2, v2) = mean_var(&s.column(1));
    assert!(m1.abs() < 0.02 && (m2 - 1.0).abs() < 0.02, "means {m1} {m2}");
    assert!((v1 - 2.0).abs() < 0.05 && (v2 - 2.0).abs() < 0.05, "vars {v1} {v2}");
}

#[test]
fn s16_kendall_tau() {
    let s = sample_scenario(&Scenario::new(16).unwrap(), 100_000, &mut rng(2)).unwrap();
    let pairs: Vec<(f64, f64)> = s.points().iter().map(|p| (p.x1, p.x2)).collect();
    let tau = empirical_kendall_tau(&pairs);
    assert!((tau - 0.5).abs() < 0.01, "tau={tau}");
}

#[test]
fn s17_simplex_and_mean() {
    let s = sample_scenario(&Scenario::new(17).unwrap(), 100_000, &mut rng(3)).unwrap();
    assert!(s.points().iter().all(|p| p.x1 >= 0.0 && p.x2 >= 0.0 && p.x1 + p.x2 <= 1.0));
    let (m, _) = mean_var(&s.column(0));
    assert!((m - 0.25).abs() < 0.005, "mean={m}");
}

fn ks_statistic(col: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    col.sort_by(f64::total_cmp);
    let n = col.len() as f64;
    col.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

#[test]
fn marginals_pass_kolmogorov_smirnov() {
    let n = 10_000;
    // asymptotic 1% critical value
    let crit = 1.6276 / (n as f64).sqrt();
    for s in Scenario::all() {
        let sample = sample_scenario(&s, n, &mut rng(100 + s.id() as u64)).unwrap();
        let (m1, m2) = marginals_of(&s);
        for (axis, m) in [(0, m1), (1, m2)] {
            let d = ks_statistic(&mut sample.column(axis), |x| marginal_cdf(&m, x));
            assert!(d < crit, "{} axis {axis}: D={d} crit={crit}", s.name());
        }
    }
}

/// Composite Gauss-Legendre nodes on (lo, 1 - lo), refined geometrically
/// toward both ends.
fn u_nodes(lo: f64) -> Vec<(f64, f64)> {
    let gl = gauss_legendre(24);
    let mut cuts = vec![lo];
    let mut c = lo;
    while c < 0.01 {
        c *= 10.0;
        cuts.push(c.min(0.01));
    }
    cuts.extend([0.05, 0.2, 0.5]);
    let upper: Vec<f64> = cuts.iter().rev().skip(1).map(|c| 1.0 - c).collect();
    cuts.extend(upper);
    let mut nodes = Vec::new();
    for w in cuts.windows(2) {
        let (h, m) = (0.5 * (w[1] - w[0]), 0.5 * (w[1] + w[0]));
        nodes.extend(gl.iter().map(|&(x, wt)| (m + h * x, wt * h)));
    }
    nodes
}

#[test]
fn true_density_normalizes() {
    let lo = 1e-7;
    let nodes = u_nodes(lo);
    for s in Scenario::all().into_iter().filter(|s| s.id() <= 16) {
        let (m1, m2) = marginals_of(&s);
        // x = Q(u): dx = du / f(Q(u))
        let xs: Vec<(f64, f64)> = nodes
            .iter()
            .map(|&(u, w)| {
                let x = marginal_quantile(&m1, u).unwrap();
                (x, w / marginal_pdf(&m1, x))
            })
            .collect();
        let ys: Vec<(f64, f64)> = nodes
            .iter()
            .map(|&(v, w)| {
                let y = marginal_quantile(&m2, v).unwrap();
                (y, w / marginal_pdf(&m2, y))
            })
            .collect();
        let mut total = 0.0;
        for &(x, wx) in &xs {
            for &(y, wy) in &ys {
                total += wx * wy * true_density(&s, Point2::new(x, y));
            }
        }
        // the box carries at least 1 - 4e-7 of the mass
        assert!((total - 1.0).abs() < 2e-3, "{}: {total}", s.name());
    }
    // S17 directly over the simplex
    let s17 = Scenario::new(17).unwrap();
    let gl = gauss_legendre(40);
    let mut total = 0.0;
    for &(a, wa) in &gl {
        let x1 = 0.5 * (a + 1.0);
        let half = 0.5 * (1.0 - x1);
        for &(b, wb) in &gl {
            let x2 = half * (b + 1.0);
            total += 0.5 * wa * half * wb * true_density(&s17, Point2::new(x1, x2));
        }
    }
    assert!((total - 1.0).abs() < 1e-10, "S17: {total}");
}

#[test]
fn truth_fraction_matches_alpha() {
    let alpha = 0.05;
    let big = 100_000;
    let bound = 3.0 * (alpha * (1.0 - alpha) / big as f64).sqrt();
    for id in [1u8, 6, 11, 16, 17] {
        let s = Scenario::new(id).unwrap();
        let oracle = build_truth_oracle(&s, alpha, 1_000_000, &mut rng(500 + id as u64)).unwrap();
        let fresh = sample_scenario(&s, big, &mut rng(900 + id as u64)).unwrap();
        let inside = label_truth(&oracle, &s, fresh.points()).count_inside() as f64 / big as f64;
        assert!((inside - (1.0 - alpha)).abs() < bound, "S{id}: inside={inside} bound={bound}");
    }
}

#[test]
fn oracle_requires_large_reference() {
    let s = Scenario::new(2).unwrap();
    assert!(build_truth_oracle(&s, 0.05, MIN_REF_SIZE - 1, &mut rng(1)).is_err());
    assert!(build_truth_oracle(&s, 1.5, MIN_REF_SIZE, &mut rng(1)).is_err());
}
