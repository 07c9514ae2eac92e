use rayon::prelude::*;

use crate::analytics::{self, PenaltyWeights, SamplingPolicy};
use crate::distribution::TteDistribution;
use crate::error::{Error, Result};
use crate::solvers::{Method, SolverResult};

/// Closed range `[lo, hi]` sampled at `lo + i * resolution`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridRange {
    pub lo: f64,
    pub hi: f64,
}

impl GridRange {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    fn points(&self, res: f64) -> Result<usize> {
        if !(self.lo.is_finite() && self.hi.is_finite() && self.hi >= self.lo) {
            return Err(Error::Argument(format!("grid range [{}, {}] is not ordered", self.lo, self.hi)));
        }
        Ok(((self.hi - self.lo) / res + 1e-9).floor() as usize + 1)
    }

    fn at(&self, i: usize, res: f64) -> f64 {
        self.lo + i as f64 * res
    }
}

/// Tail probabilities below this are dropped from the lattice sums.
const CCDF_FLOOR: f64 = 1e-17;
const MAX_LATTICE: usize = 200_000_000;

/// Lowest `(penalty, i, j)`, ties going to the smallest `i` then `j`.
fn pick(best: Option<(f64, usize, usize)>, cand: (f64, usize, usize)) -> Option<(f64, usize, usize)> {
    match best {
        Some(b) if b.0 <= cand.0 => Some(b),
        _ => Some(cand),
    }
}

fn check_resolution(res: f64) -> Result<()> {
    if !(res.is_finite() && res > 0.0) {
        return Err(Error::Argument(format!("grid resolution must be positive, got {res}")));
    }
    Ok(())
}

/// Exhaustive minimum over the lattice `ts_i = ts.lo + i res`,
/// `delta_j = delta.lo + j res`, skipping cells with `delta < ts`.
///
/// Rows are evaluated in parallel and reduced in row order, so the argmin
/// and its tie-break (smallest `ts`, then smallest `delta`) do not depend on
/// the number of workers. When `ts.lo` is a multiple of the resolution
/// every row reuses one table of tail probabilities through
/// `S(delta) = ccdf(delta) + S(delta + ts)`.
pub fn grid_search(
    dist: &TteDistribution,
    weights: &PenaltyWeights,
    ts: GridRange,
    delta: GridRange,
    resolution: f64,
) -> Result<SolverResult> {
    weights.validate()?;
    check_resolution(resolution)?;
    if !(ts.lo > 0.0) {
        return Err(Error::Argument(format!("sampling intervals must be positive, got {}", ts.lo)));
    }
    let n_ts = ts.points(resolution)?;
    let n_delta = delta.points(resolution)?;
    let feasible = |i: usize, j: usize| delta.at(j, resolution) >= ts.at(i, resolution) - 1e-9 * resolution;

    let steps = ts.lo / resolution;
    let aligned = (steps - steps.round()).abs() < 1e-9 * steps.max(1.0) && delta.lo >= 0.0;
    let rows: Vec<Option<(f64, usize, usize)>> = if aligned {
        let m0 = steps.round() as usize;
        let ccdf = tail_table(dist, delta.lo, resolution, n_delta)?;
        let mean = dist.mean();
        (0..n_ts)
            .into_par_iter()
            .map_init(
                || vec![0.0; ccdf.len()],
                |s, i| {
                    let m = m0 + i;
                    let t = ts.at(i, resolution);
                    for j in (0..ccdf.len()).rev() {
                        s[j] = ccdf[j] + if j + m < ccdf.len() { s[j + m] } else { 0.0 };
                    }
                    let mut best = None;
                    for j in 0..n_delta {
                        if !feasible(i, j) {
                            continue;
                        }
                        let d = delta.at(j, resolution);
                        let e = weights.alpha * (1.0 + s[j]) + weights.beta * (d + t * s[j] - mean);
                        best = pick(best, (e, i, j));
                    }
                    best
                },
            )
            .collect()
    } else {
        (0..n_ts)
            .into_par_iter()
            .map(|i| -> Result<Option<(f64, usize, usize)>> {
                let t = ts.at(i, resolution);
                let mut best = None;
                for j in 0..n_delta {
                    if !feasible(i, j) {
                        continue;
                    }
                    let d = delta.at(j, resolution).max(t);
                    let e = analytics::penalty_unchecked(dist, t, d, weights)?.penalty;
                    best = pick(best, (e, i, j));
                }
                Ok(best)
            })
            .collect::<Result<Vec<_>>>()?
    };
    let best = rows
        .into_iter()
        .flatten()
        .fold(None, pick)
        .ok_or_else(|| Error::Argument("the grid has no cell with delta >= ts".into()))?;
    let t = ts.at(best.1, resolution);
    let d = delta.at(best.2, resolution).max(t);
    let cells = (n_ts as u64 * n_delta as u64).min(u32::MAX as u64) as u32;
    let mut r = SolverResult::evaluate(dist, weights, SamplingPolicy::new(t, d)?, Method::GridSearch, cells, true)?;
    let ratio = d / t;
    if (ratio - ratio.round()).abs() < 1e-9 * ratio {
        r.offset_multiplier = Some(ratio.round() as u32);
    }
    Ok(r)
}

/// `ccdf(delta_lo + j res)` for `j` covering the offset range and then on
/// until the tail probability is negligible.
fn tail_table(dist: &TteDistribution, delta_lo: f64, res: f64, n_delta: usize) -> Result<Vec<f64>> {
    let mut table = Vec::with_capacity(n_delta);
    let mut j = 0usize;
    loop {
        let c = 1.0 - dist.cdf_unchecked(delta_lo + j as f64 * res);
        if j >= n_delta && c <= CCDF_FLOOR {
            break;
        }
        table.push(c);
        j += 1;
        if j > MAX_LATTICE {
            return Err(Error::Evaluation("grid tail table exceeds its size limit".into()));
        }
    }
    Ok(table)
}

/// Exhaustive minimum over `ts_i = ts.lo + i res` with `delta = ts`.
pub fn grid_search_periodic(
    dist: &TteDistribution,
    weights: &PenaltyWeights,
    ts: GridRange,
    resolution: f64,
) -> Result<SolverResult> {
    weights.validate()?;
    check_resolution(resolution)?;
    if !(ts.lo > 0.0) {
        return Err(Error::Argument(format!("sampling intervals must be positive, got {}", ts.lo)));
    }
    let n = ts.points(resolution)?;
    let values = (0..n)
        .into_par_iter()
        .map(|i| {
            let t = ts.at(i, resolution);
            analytics::penalty_unchecked(dist, t, t, weights).map(|b| (b.penalty, i, 0))
        })
        .collect::<Result<Vec<_>>>()?;
    let best = values.into_iter().fold(None, pick).expect("grid has at least one point");
    let t = ts.at(best.1, resolution);
    let mut r = SolverResult::evaluate(
        dist,
        weights,
        SamplingPolicy::periodic(t)?,
        Method::GridSearch,
        n.min(u32::MAX as usize) as u32,
        true,
    )?;
    r.offset_multiplier = Some(1);
    Ok(r)
}
