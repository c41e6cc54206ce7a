use std::io::Write;

use hdr_core::prelude::*;

use crate::csvio::fmt_full;
use crate::error::Result;
use crate::rng;

/// Draws `n` points from `scenario` using the data stream of benchmark
/// replicate 0, so the file holds exactly the sample that replicate scores.
pub fn simulate(scenario: &Scenario, n: usize, seed: u64) -> Result<Sample2D> {
    let mut r = rng::stream(seed, &rng::sample_key(scenario.id(), n, 0));
    Ok(sample_scenario(scenario, n, &mut r)?)
}

pub fn write_draws<W: Write>(w: W, scenario: &Scenario, sample: &Sample2D) -> csv::Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["x1", "x2", "true_density"])?;
    for p in sample.points() {
        wtr.write_record([fmt_full(p.x1), fmt_full(p.x2), fmt_full(true_density(scenario, *p))])?;
    }
    wtr.flush()?;
    Ok(())
}
