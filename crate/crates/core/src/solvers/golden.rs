use crate::analytics::{self, PenaltyWeights, SamplingPolicy};
use crate::distribution::TteDistribution;
use crate::error::{Error, Result};
use crate::solvers::{Method, SolverFlag, SolverResult};

const INV_PHI: f64 = 0.618_033_988_749_894_8;
const MAX_ITER: u32 = 400;

/// How the offset follows the sampling interval during a search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OffsetRule {
    /// `delta = ts`.
    EqualToTs,
    /// A fixed offset, at least the upper end of the search range.
    Fixed(f64),
    /// `delta = n * ts`.
    Multiple(u32),
}

impl OffsetRule {
    pub fn delta(self, ts: f64) -> f64 {
        match self {
            OffsetRule::EqualToTs => ts,
            OffsetRule::Fixed(d) => d,
            OffsetRule::Multiple(n) => n as f64 * ts,
        }
    }
}

pub(crate) struct GoldenOutcome {
    pub x: f64,
    pub iterations: u32,
    pub flat: bool,
}

/// Golden-section search for a minimum of `f` on `[a, b]`, stopping when the
/// bracket is narrower than `xi`. A function that never changes value
/// yields the midpoint of the starting bracket.
pub(crate) fn golden_core<F>(f: F, a: f64, b: f64, xi: f64) -> Result<GoldenOutcome>
where
    F: Fn(f64) -> Result<f64>,
{
    let (mut a, mut b) = (a, b);
    let start_mid = 0.5 * (a + b);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    let first = fc;
    let mut flat = fc == fd;
    let mut iterations = 0;
    while b - a >= xi && iterations < MAX_ITER {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
            flat &= fc == first;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
            flat &= fd == first;
        }
        iterations += 1;
    }
    let x = if flat { start_mid } else { 0.5 * (a + b) };
    Ok(GoldenOutcome { x, iterations, flat })
}

/// Derivative-free minimisation of the penalty over `ts` in `ts_range`.
pub fn golden_section_fallback(
    dist: &TteDistribution,
    weights: &PenaltyWeights,
    ts_range: (f64, f64),
    offset: OffsetRule,
    xi: f64,
) -> Result<SolverResult> {
    let (lo, hi) = ts_range;
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::Argument(format!("interval range ({lo}, {hi}) must be positive and ordered")));
    }
    if let OffsetRule::Fixed(d) = offset {
        if !(d >= hi) {
            return Err(Error::Argument(format!("fixed offset {d} is below the largest interval {hi}")));
        }
    }
    if matches!(offset, OffsetRule::Multiple(0)) {
        return Err(Error::Argument("offset multiple must be at least 1".into()));
    }
    if !(xi > 0.0) {
        return Err(Error::Argument(format!("xi must be positive, got {xi}")));
    }
    weights.validate()?;
    let f = |ts: f64| Ok(analytics::penalty_unchecked(dist, ts, offset.delta(ts), weights)?.penalty);
    let g = golden_core(f, lo, hi, xi)?;
    let policy = SamplingPolicy::new(g.x, offset.delta(g.x))?;
    let mut r = SolverResult::evaluate(dist, weights, policy, Method::GoldenSection, g.iterations, true)?;
    if let OffsetRule::Multiple(n) = offset {
        r.offset_multiplier = Some(n);
    }
    if g.flat {
        r = r.flag(SolverFlag::FlatObjective);
    }
    Ok(r)
}
