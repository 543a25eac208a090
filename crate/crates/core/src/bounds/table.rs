use std::fmt::Write;
use std::ops::RangeInclusive;

use rayon::prelude::*;

use super::{bounds, BoundReport};
use crate::constraint::ConstraintParams;
use crate::error::{Error, Result};

pub type GridPoint = ConstraintParams;

fn parse_range(key: &str, value: &str) -> Result<RangeInclusive<usize>> {
    let bad = || Error::Parse(format!("bad range `{value}` for {key}"));
    let (lo, hi) = match value.split_once(':') {
        Some((lo, hi)) => (lo, hi),
        None => (value, value),
    };
    let lo: usize = lo.trim().parse().map_err(|_| bad())?;
    let hi: usize = hi.trim().parse().map_err(|_| bad())?;
    if lo == 0 || lo > hi {
        return Err(bad());
    }
    Ok(lo..=hi)
}

/// Parses `alpha=4:8,beta=1,p=1` into points ordered by alpha, then beta, then p.
///
/// Each key takes a value or an inclusive `lo:hi` range; missing keys default to 1.
pub fn parse_grid(spec: &str) -> Result<Vec<GridPoint>> {
    let mut ranges = [1..=1, 1..=1, 1..=1];
    for part in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected key=value, got `{part}`")))?;
        let slot = match key.trim() {
            "alpha" => 0,
            "beta" => 1,
            "p" => 2,
            other => return Err(Error::Parse(format!("unknown grid key `{other}`"))),
        };
        ranges[slot] = parse_range(key, value)?;
    }
    let [ra, rb, rp] = ranges;
    let mut points = Vec::new();
    for alpha in ra {
        for beta in rb.clone() {
            for p in rp.clone() {
                points.push(ConstraintParams::new(alpha, beta, p)?);
            }
        }
    }
    Ok(points)
}

/// Evaluates every point on `workers` threads; results keep grid order.
pub fn evaluate_grid(points: &[GridPoint], coset: bool, workers: usize) -> Result<Vec<BoundReport>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidParams(format!("thread pool: {e}")))?;
    pool.install(|| points.par_iter().map(|&pt| bounds(pt, coset)).collect())
}

/// Rounds to six significant digits and prints without trailing zeros.
fn sig6(x: f64) -> String {
    let rounded: f64 = format!("{x:.5e}").parse().expect("formatted float parses");
    format!("{rounded}")
}

pub fn emit_table(reports: &[BoundReport]) -> String {
    let mut out = String::from("alpha,beta,p,t_opt,lower,upper,provenance\n");
    for r in reports {
        let t_opt = r.t_opt.map(|t| t.to_string()).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{},{};{}",
            r.alpha,
            r.beta,
            r.p,
            t_opt,
            sig6(r.lower),
            sig6(r.upper),
            r.lower_provenance.as_str(),
            r.upper_provenance.as_str()
        )
        .expect("writing to a String");
    }
    out
}
