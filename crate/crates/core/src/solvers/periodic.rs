use crate::analytics::{self, OffsetLink, PenaltyWeights, SamplingPolicy};
use crate::distribution::TteDistribution;
use crate::error::Result;
use crate::solvers::golden::golden_core;
use crate::solvers::{bisect_sign, convexity_known, log_grid, Method, SolverConfig, SolverFlag, SolverResult};

/// Points of the coarse scan that brackets the basin when convexity is not
/// guaranteed.
const SCAN_POINTS: usize = 200;
const MAX_BISECTIONS: u32 = 200;

pub(crate) struct LineMin {
    pub ts: f64,
    pub iterations: u32,
    pub boundary: bool,
    pub converged: bool,
}

/// Minimises `value` over `[lo, hi]` by bisection on the sign of `slope`.
///
/// `floor` is a lower bound on `value` that falls as `ts` grows; intervals
/// where it exceeds a known value are skipped. With `scan` set, a
/// log-spaced scan from `hi` down picks the lowest grid point and the
/// search is confined to its two neighbours. If the slope signs at the bracket
/// ends do not straddle zero inside the bracket, golden-section search
/// takes over.
pub(crate) fn line_minimize<V, S, B>(
    value: V,
    slope: S,
    floor: B,
    lo: f64,
    hi: f64,
    xi: f64,
    scan: bool,
) -> Result<LineMin>
where
    V: Fn(f64) -> Result<f64>,
    S: Fn(f64) -> Result<f64>,
    B: Fn(f64) -> f64,
{
    let (mut a, mut b) = (lo, hi);
    if hi > lo {
        // Intervals whose bound exceeds the penalty at hi cannot be optimal.
        let reference = value(hi)?;
        if floor(lo) > reference {
            let (mut x0, mut x1) = (lo, hi);
            while x1 > x0 * (1.0 + 1e-12) {
                let m = (x0 * x1).sqrt();
                if floor(m) > reference {
                    x0 = m;
                } else {
                    x1 = m;
                }
            }
            a = x0;
        }
    }
    if scan && hi > a {
        let grid = log_grid(a, hi, SCAN_POINTS);
        let mut best = (f64::INFINITY, grid.len() - 1);
        for (i, &t) in grid.iter().enumerate().rev() {
            if floor(t) > best.0 {
                break;
            }
            let v = value(t)?;
            if v <= best.0 {
                best = (v, i);
            }
        }
        let i = best.1;
        a = grid[i.saturating_sub(1)];
        b = grid[(i + 1).min(grid.len() - 1)];
    }
    if slope(a)? >= 0.0 {
        if a == lo {
            return Ok(LineMin { ts: lo, iterations: 0, boundary: true, converged: false });
        }
        let g = golden_core(&value, a, b, xi)?;
        return Ok(LineMin { ts: g.x, iterations: g.iterations, boundary: false, converged: true });
    }
    if slope(b)? < 0.0 {
        if b == hi {
            return Ok(LineMin { ts: hi, iterations: 0, boundary: true, converged: false });
        }
        let g = golden_core(&value, a, b, xi)?;
        return Ok(LineMin { ts: g.x, iterations: g.iterations, boundary: false, converged: true });
    }
    let br = bisect_sign(&slope, a, b, xi, MAX_BISECTIONS)?;
    Ok(LineMin {
        ts: br.mid(),
        iterations: br.iterations,
        boundary: false,
        converged: br.width() < xi,
    })
}

/// Lower bound on the penalty at `(ts, delta)`: the tail sum times `ts` is
/// at least `int_delta^inf ccdf >= E[T] - delta`.
pub(crate) fn penalty_floor(mean: f64, weights: &PenaltyWeights, ts: f64, delta: f64) -> f64 {
    weights.alpha * (1.0 + (mean - delta).max(0.0) / ts)
}

/// Lower end of the interval search: a millionth of the larger of `ts_max`
/// and the mean event time. Series sums cost `O(E[T] / ts)` terms, so the
/// floor also bounds the work per evaluation.
pub(crate) fn ts_floor(dist: &TteDistribution, config: &SolverConfig) -> f64 {
    (1e-6 * config.ts_max.max(dist.mean())).min(0.5 * config.ts_max)
}

/// Best interval without offset (`delta = ts`).
///
/// Bisects the sign of the penalty derivative on `(0, ts_max]` until the
/// bracket is narrower than `xi`. Exponential and unshifted Rayleigh laws
/// have a convex penalty; for other laws a coarse scan first selects the
/// basin and the result carries [`SolverFlag::UnimodalityNotGuaranteed`].
/// A derivative still negative at `ts_max` returns `ts_max` flagged as a
/// boundary optimum.
pub fn minimize_periodic(dist: &TteDistribution, weights: &PenaltyWeights, config: &SolverConfig) -> Result<SolverResult> {
    weights.validate()?;
    config.validate()?;
    if weights.alpha == 0.0 {
        return Ok(SolverResult::degenerate(Method::ConvexBisection));
    }
    let convex = convexity_known(dist);
    let value = |ts: f64| Ok(analytics::penalty_unchecked(dist, ts, ts, weights)?.penalty);
    let slope = |ts: f64| analytics::derivative_unchecked(dist, ts, ts, weights, OffsetLink::Multiple(1));
    let lo = ts_floor(dist, config);
    let mean = dist.mean();
    let floor = |ts: f64| penalty_floor(mean, weights, ts, ts);
    let m = line_minimize(value, slope, floor, lo, config.ts_max, config.xi, !convex)?;
    let mut r = SolverResult::evaluate(
        dist,
        weights,
        SamplingPolicy::periodic(m.ts)?,
        Method::ConvexBisection,
        m.iterations,
        m.converged,
    )?;
    r.offset_multiplier = Some(1);
    if m.boundary {
        r = r.flag(SolverFlag::BoundaryOptimum);
    }
    if !convex {
        r = r.flag(SolverFlag::UnimodalityNotGuaranteed);
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::solve_exponential_optimum;

    fn vas() -> PenaltyWeights {
        PenaltyWeights::new(0.00585 * (2.96 - 0.334), 0.334).unwrap()
    }

    #[test]
    fn exponential_agrees_with_root() {
        let w = PenaltyWeights::new(1.2e-4, 0.015).unwrap();
        let d = TteDistribution::exponential(0.1).unwrap();
        let cfg = SolverConfig::for_distribution(&d);
        let a = minimize_periodic(&d, &w, &cfg).unwrap();
        let b = solve_exponential_optimum(0.1, &w, cfg.xi).unwrap();
        assert!(a.converged);
        assert!((a.policy.ts - b.policy.ts).abs() <= cfg.xi);
    }

    #[test]
    fn rayleigh_mean_one_penalty() {
        let d = TteDistribution::rayleigh_from_mean(1.0).unwrap();
        let r = minimize_periodic(&d, &vas(), &SolverConfig::for_distribution(&d)).unwrap();
        assert!((r.penalty - 0.109).abs() < 1e-3, "{}", r.penalty);
        assert!((r.policy.ts - 0.3033).abs() < 1e-3, "{}", r.policy.ts);
    }

    #[test]
    fn boundary_optimum_is_flagged() {
        let d = TteDistribution::rayleigh(3.8667).unwrap();
        let mut cfg = SolverConfig::for_distribution(&d);
        cfg.ts_max = 0.1;
        let r = minimize_periodic(&d, &vas(), &cfg).unwrap();
        assert_eq!(r.policy.ts, 0.1);
        assert!(r.has_flag(SolverFlag::BoundaryOptimum));
        assert!(!r.converged);
    }

    #[test]
    fn shifted_law_finds_the_global_basin() {
        // Mean 1 s with a 0.5 s minimum: the no-offset curve has two local minima.
        let d = TteDistribution::shifted_rayleigh_from_mean(1.0, 0.5).unwrap();
        let r = minimize_periodic(&d, &vas(), &SolverConfig::for_distribution(&d)).unwrap();
        assert!(r.has_flag(SolverFlag::UnimodalityNotGuaranteed));
        assert!((r.policy.ts - 0.3155).abs() < 2e-3, "{}", r.policy.ts);
        assert!((r.penalty - 0.109335).abs() < 1e-4, "{}", r.penalty);
    }
}
