use crate::analytics::{PenaltyWeights, SamplingPolicy};
use crate::distribution::TteDistribution;
use crate::error::{Error, Result};
use crate::numeric::exp_tail;
use crate::solvers::{bisect_sign, Method, SolverResult};

/// Optimal interval without offset for an exponential law.
///
/// Solves `e^x - x = (alpha / beta) lambda + 1` for `x = lambda ts` by
/// bisection; `e^x - x` is increasing on `x > 0`. The bracket on `ts` is
/// narrowed below `xi`. With `alpha = 0` the root is `x = 0` and a
/// degenerate result (continuous sampling) is returned.
pub fn solve_exponential_optimum(rate: f64, weights: &PenaltyWeights, xi: f64) -> Result<SolverResult> {
    let dist = TteDistribution::exponential(rate)?;
    weights.validate()?;
    if !(xi.is_finite() && xi > 0.0) {
        return Err(Error::Argument(format!("xi must be positive, got {xi}")));
    }
    if weights.alpha == 0.0 {
        return Ok(SolverResult::degenerate(Method::Prop1Root));
    }
    // e^x - x - 1 = (alpha / beta) lambda, written with exp_tail to keep
    // precision for small roots.
    let target = weights.alpha / weights.beta * rate;
    let mut hi = 1.0;
    while exp_tail(hi) < target {
        hi *= 2.0;
    }
    let b = bisect_sign(|x| Ok(exp_tail(x) - target), 0.0, hi, xi * rate, 400)?;
    let ts = b.mid() / rate;
    let converged = b.width() < xi * rate;
    SolverResult::evaluate(&dist, weights, SamplingPolicy::periodic(ts)?, Method::Prop1Root, b.iterations, converged)
}
