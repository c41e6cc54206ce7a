//! Parsing of command-line lists and run configuration.

use hdr_core::prelude::*;

use crate::error::{usage, Result};

/// Default reference-sample size for truth oracles.
pub const DEFAULT_REF_SIZE: usize = 1_000_000;

/// A measure plus optional hyperparameter overrides, written
/// `name[:k=K][:eps=E]` on the command line.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureChoice {
    pub kind: MeasureKind,
    pub k: Option<usize>,
    pub eps: Option<f64>,
}

impl MeasureChoice {
    pub fn new(kind: MeasureKind) -> Self {
        MeasureChoice { kind, k: None, eps: None }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let mut parts = s.trim().split(':');
        let name = parts.next().unwrap_or_default();
        let kind = MeasureKind::from_name(name).ok_or_else(|| {
            let known: Vec<&str> = MeasureKind::ALL.iter().map(|k| k.name()).collect();
            usage(format!("unknown measure {name:?}; known: {}", known.join(", ")))
        })?;
        let mut choice = MeasureChoice::new(kind);
        for part in parts {
            match part.split_once('=') {
                Some(("k", v)) if kind.uses_k() => {
                    choice.k = Some(v.parse().map_err(|_| usage(format!("bad k {v:?} in {s:?}")))?);
                }
                Some(("eps", v)) if kind.uses_eps() => {
                    let e: f64 = v.parse().map_err(|_| usage(format!("bad eps {v:?} in {s:?}")))?;
                    if !(e > 0.0 && e.is_finite()) {
                        return Err(usage(format!("eps must be positive in {s:?}")));
                    }
                    choice.eps = Some(e);
                }
                _ => return Err(usage(format!("unsupported override {part:?} for {}", kind.name()))),
            }
        }
        Ok(choice)
    }

    /// Name as written in result files, including any override.
    pub fn label(&self) -> String {
        let mut s = self.kind.name().to_string();
        if let Some(k) = self.k {
            s.push_str(&format!(":k={k}"));
        }
        if let Some(e) = self.eps {
            s.push_str(&format!(":eps={e}"));
        }
        s
    }

    /// Measure specification for data from `scenario`: support class and,
    /// for parametric kinds, the scenario's own marginal families.
    pub fn spec_for(&self, scenario: &Scenario) -> MeasureSpec {
        let mut spec = MeasureSpec::new(self.kind).with_support(scenario.support_class());
        if self.kind.is_parametric() {
            let (a, b) = scenario.marginal_families();
            spec = spec.with_marginals(a, b);
        }
        if let Some(k) = self.k {
            spec = spec.with_k(k);
        }
        if let Some(e) = self.eps {
            spec = spec.with_eps(e);
        }
        spec
    }
}

fn split_list(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|p| !p.is_empty())
}

/// `all` or a comma list of measure names.
pub fn parse_measures(s: &str) -> Result<Vec<MeasureChoice>> {
    let out: Vec<MeasureChoice> = if s.trim().eq_ignore_ascii_case("all") {
        MeasureKind::ALL.iter().map(|&k| MeasureChoice::new(k)).collect()
    } else {
        split_list(s).map(MeasureChoice::parse).collect::<Result<_>>()?
    };
    if out.is_empty() {
        return Err(usage("no measures given"));
    }
    Ok(out)
}

/// `all` or a comma list such as `S1,S6,17`.
pub fn parse_scenarios(s: &str) -> Result<Vec<Scenario>> {
    let out: Vec<Scenario> = if s.trim().eq_ignore_ascii_case("all") {
        Scenario::all()
    } else {
        split_list(s)
            .map(|p| Scenario::parse(p).map_err(|_| usage(format!("unknown scenario {p:?} (S1..S17)"))))
            .collect::<Result<_>>()?
    };
    if out.is_empty() {
        return Err(usage("no scenarios given"));
    }
    Ok(out)
}

pub fn parse_sizes(s: &str) -> Result<Vec<usize>> {
    let out: Vec<usize> = split_list(s)
        .map(|p| match p.parse::<usize>() {
            Ok(n) if n >= 2 => Ok(n),
            _ => Err(usage(format!("bad sample size {p:?}"))),
        })
        .collect::<Result<_>>()?;
    if out.is_empty() {
        return Err(usage("no sample sizes given"));
    }
    Ok(out)
}

/// Grid values: a comma list whose items are numbers, `a:b` (unit steps)
/// or `a:b:step`.
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let num = |p: &str| p.trim().parse::<f64>().map_err(|_| usage(format!("bad grid value {p:?}")));
    let mut out = Vec::new();
    for item in split_list(s) {
        let fields: Vec<&str> = item.split(':').collect();
        match fields.as_slice() {
            [v] => out.push(num(v)?),
            [a, b] | [a, b, _] => {
                let (lo, hi) = (num(a)?, num(b)?);
                let step = if fields.len() == 3 { num(fields[2])? } else { 1.0 };
                if !(step > 0.0) || hi < lo {
                    return Err(usage(format!("bad grid range {item:?}")));
                }
                let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
                // multiply rather than accumulate, then drop representation noise
                out.extend((0..count).map(|i| ((lo + step * i as f64) * 1e12).round() / 1e12));
            }
            _ => return Err(usage(format!("bad grid item {item:?}"))),
        }
    }
    if out.is_empty() {
        return Err(usage("empty grid"));
    }
    Ok(out)
}

pub fn parse_alpha(a: f64) -> Result<f64> {
    if a > 0.0 && a < 1.0 {
        Ok(a)
    } else {
        Err(usage(format!("alpha must lie in (0, 1), got {a}")))
    }
}

/// Worker count: explicit value, else the machine's parallelism.
pub fn resolve_workers(w: Option<usize>) -> usize {
    match w {
        Some(w) if w > 0 => w,
        _ => std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn measures() {
        assert_eq!(parse_measures("all").unwrap().len(), 8);
        let m = parse_measures("m1:k=7, m3-ecdf:eps=0.25").unwrap();
        assert_eq!(m[0], MeasureChoice { kind: MeasureKind::M1KnnEucl, k: Some(7), eps: None });
        assert_eq!(m[1].eps, Some(0.25));
        assert_eq!(m[1].label(), "m3-ecdf:eps=0.25");
        assert!(parse_measures("m9").is_err());
        assert!(parse_measures("m0-kde:k=3").is_err());
        assert!(parse_measures("").is_err());
    }

    #[test]
    fn scenarios_and_sizes() {
        let s = parse_scenarios("S1,s6, 17").unwrap();
        assert_eq!(s.iter().map(|s| s.id()).collect::<Vec<_>>(), vec![1, 6, 17]);
        assert!(parse_scenarios("S18").is_err());
        assert_eq!(parse_sizes("50,100").unwrap(), vec![50, 100]);
        assert!(parse_sizes("1").is_err());
    }

    #[test]
    fn grids() {
        assert_eq!(parse_grid("1:5").unwrap(), vec![1.0, 2.0, 3.0, 4.0, 5.0]);
        let g = parse_grid("0.01:0.3:0.01").unwrap();
        assert_eq!(g.len(), 30);
        assert_eq!(g[9], 0.1);
        assert_eq!(g[29], 0.3);
        assert_eq!(parse_grid("0.001,0.01").unwrap(), vec![0.001, 0.01]);
        assert_eq!(parse_grid("4").unwrap(), vec![4.0]);
        assert_eq!(parse_grid("0.001, 1:3").unwrap(), vec![0.001, 1.0, 2.0, 3.0]);
        assert!(parse_grid("1:2:3:4").is_err());
        assert!(parse_grid("5:1").is_err());
        assert!(parse_grid("").is_err());
    }

    #[test]
    fn spec_uses_scenario_families() {
        let s17 = Scenario::new(17).unwrap();
        let spec = MeasureChoice::new(MeasureKind::M0PCop).spec_for(&s17);
        assert_eq!(spec.support_class, SupportClass::Simplex);
        assert_eq!(spec.marginal_families, Some((MarginalFamily::Beta11a, MarginalFamily::Beta11a)));
        let spec = MeasureChoice::new(MeasureKind::M1KnnEucl).spec_for(&s17);
        assert_eq!(spec.marginal_families, None);
    }
}
