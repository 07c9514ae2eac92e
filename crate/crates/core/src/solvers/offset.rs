use std::collections::BTreeMap;

use crate::analytics::{self, OffsetLink, PenaltyWeights, SamplingPolicy};
use crate::distribution::TteDistribution;
use crate::error::{Error, Result};
use crate::solvers::periodic::{line_minimize, penalty_floor, ts_floor, LineMin};
use crate::solvers::{convexity_known, solve_exponential_optimum, Method, SolverConfig, SolverFlag, SolverResult};

struct Candidate {
    line: LineMin,
    penalty: f64,
}

/// Best `ts` for a fixed offset multiple `n`, with `n ts >= t_min`.
fn inner(
    dist: &TteDistribution,
    weights: &PenaltyWeights,
    config: &SolverConfig,
    n: u32,
    scan: bool,
) -> Result<Candidate> {
    let nf = n as f64;
    let lo = (config.t_min / nf).max(ts_floor(dist, config));
    if lo >= config.ts_max {
        return Err(Error::Argument(format!(
            "t_min {} leaves no room below ts_max {} for n = {n}",
            config.t_min, config.ts_max
        )));
    }
    let value = |ts: f64| Ok(analytics::penalty_unchecked(dist, ts, nf * ts, weights)?.penalty);
    let slope = |ts: f64| analytics::derivative_unchecked(dist, ts, nf * ts, weights, OffsetLink::Multiple(n));
    let mean = dist.mean();
    let floor = |ts: f64| penalty_floor(mean, weights, ts, nf * ts);
    let line = line_minimize(value, slope, floor, lo, config.ts_max, config.xi, scan)?;
    let penalty = value(line.ts)?;
    Ok(Candidate { line, penalty })
}

/// Smallest multiple with the lowest penalty.
fn best_of(cache: &BTreeMap<u32, Candidate>) -> u32 {
    let mut best = (f64::INFINITY, 1u32);
    for (&n, c) in cache {
        if c.penalty < best.0 {
            best = (c.penalty, n);
        }
    }
    best.1
}

/// Whether a sequence first does not increase and then does not decrease.
fn unimodal(values: impl Iterator<Item = f64>) -> bool {
    let mut rising = false;
    let mut prev = f64::NEG_INFINITY;
    for (i, v) in values.enumerate() {
        if i > 0 {
            if v > prev {
                rising = true;
            } else if v < prev && rising {
                return false;
            }
        }
        prev = v;
    }
    true
}

/// Walks from the best cached multiple towards lower inner optima with
/// doubling steps, then narrows the last bracket by ternary search.
fn descend<F>(n_max: u32, cache: &mut BTreeMap<u32, Candidate>, solve: &mut F) -> Result<()>
where
    F: FnMut(u32, &mut BTreeMap<u32, Candidate>) -> Result<()>,
{
    let mut h = |n: u32, cache: &mut BTreeMap<u32, Candidate>| -> Result<f64> {
        solve(n, cache)?;
        Ok(cache[&n].penalty)
    };
    let start = best_of(cache);
    let here = h(start, cache)?;
    let down = if start > 1 { h(start - 1, cache)? } else { f64::INFINITY };
    let up = if start < n_max { h(start + 1, cache)? } else { f64::INFINITY };
    let dir: i64 = if down < here && down <= up {
        -1
    } else if up < here {
        1
    } else {
        return Ok(());
    };
    let clamp = |n: i64| n.clamp(1, n_max as i64) as u32;
    let (mut prev, mut cur) = (start, clamp(start as i64 + dir));
    let mut step = 1i64;
    let far = loop {
        step *= 2;
        let next = clamp(cur as i64 + dir * step);
        if next == cur || h(next, cache)? >= h(cur, cache)? {
            break next;
        }
        prev = cur;
        cur = next;
    };
    let (mut lo, mut hi) = (prev.min(far), prev.max(far));
    while hi - lo > 2 {
        let m1 = lo + (hi - lo) / 3;
        let m2 = hi - (hi - lo) / 3;
        if h(m1, cache)? <= h(m2, cache)? {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    for n in lo..=hi {
        h(n, cache)?;
    }
    Ok(())
}

/// Best policy with `delta = n ts` by nested bisection.
///
/// The outer loop bisects the integer multiple `n` over `[1, n_max]` for
/// `ceil(log2(n_max - 1)) + 1` rounds, moving the upper end down whenever
/// `E(ts, n ts) - E(ts, (n - 1) ts) >= 0` at the inner optimum. The inner
/// loop bisects `ts` on the sign of `d/dts E(ts, n ts)`. Offsets are kept
/// at or above `config.t_min`.
///
/// The outer test compares `n` and `n - 1` at the same `ts`, so it can stop
/// away from the best multiple rather than on it. A descent over the inner
/// optima finishes the search. If the inner optima along the visited
/// multiples are not unimodal in `n`, every multiple is evaluated instead
/// and the result is flagged.
///
/// An exponential law short-circuits to the no-offset optimum: the offset
/// cannot lower its penalty.
pub fn algorithm1_offset(dist: &TteDistribution, weights: &PenaltyWeights, config: &SolverConfig) -> Result<SolverResult> {
    weights.validate()?;
    config.validate()?;
    if config.n_max < 2 {
        return Err(Error::Argument(format!("n_max must be at least 2, got {}", config.n_max)));
    }
    if let TteDistribution::Exponential { rate } = dist {
        let mut r = solve_exponential_optimum(*rate, weights, config.xi)?;
        r.offset_multiplier = Some(1);
        return Ok(r.flag(SolverFlag::OffsetIrrelevant));
    }
    if weights.alpha == 0.0 {
        return Ok(SolverResult::degenerate(Method::Algorithm1));
    }
    let scan = !convexity_known(dist);
    let mut cache: BTreeMap<u32, Candidate> = BTreeMap::new();
    let mut iterations = 0u32;
    let solve = |n: u32, cache: &mut BTreeMap<u32, Candidate>, iterations: &mut u32| -> Result<f64> {
        if let Some(c) = cache.get(&n) {
            return Ok(c.line.ts);
        }
        let c = inner(dist, weights, config, n, scan)?;
        *iterations += c.line.iterations;
        let ts = c.line.ts;
        cache.insert(n, c);
        Ok(ts)
    };

    let (mut n_lo, mut n_hi) = (1u32, config.n_max);
    let rounds = ((config.n_max - 1) as f64).log2().ceil() as u32 + 1;
    for _ in 0..rounds {
        let n = (n_lo + n_hi) / 2;
        let ts = solve(n, &mut cache, &mut iterations)?;
        let here = analytics::penalty_unchecked(dist, ts, n as f64 * ts, weights)?.penalty;
        let before = analytics::penalty_unchecked(dist, ts, (n - 1) as f64 * ts, weights)?.penalty;
        if here - before >= 0.0 {
            n_hi = n;
        } else {
            n_lo = n;
        }
    }
    solve(n_lo, &mut cache, &mut iterations)?;
    solve(n_hi, &mut cache, &mut iterations)?;

    // The outer test compares n and n - 1 at the same ts, which can stop
    // away from the best inner optimum; finish with a search on the inner
    // optima themselves. Values along the visited multiples that are not
    // unimodal mean neither search can be trusted.
    descend(config.n_max, &mut cache, &mut |n, cache| solve(n, cache, &mut iterations).map(|_| ()))?;
    let fallback = !unimodal(cache.values().map(|c| c.penalty));
    if fallback {
        for n in 1..=config.n_max {
            solve(n, &mut cache, &mut iterations)?;
        }
    }
    let n_best = best_of(&cache);

    let c = &cache[&n_best];
    let policy = SamplingPolicy::with_multiple(c.line.ts, n_best)?;
    let mut r = SolverResult::evaluate(dist, weights, policy, Method::Algorithm1, iterations, c.line.converged)?;
    r.offset_multiplier = Some(n_best);
    if c.line.boundary {
        r = r.flag(SolverFlag::BoundaryOptimum);
    }
    if scan {
        r = r.flag(SolverFlag::UnimodalityNotGuaranteed);
    }
    if fallback {
        r = r.flag(SolverFlag::LinearScanFallback);
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::minimize_periodic;

    fn vas() -> PenaltyWeights {
        PenaltyWeights::new(0.00585 * (2.96 - 0.334), 0.334).unwrap()
    }

    #[test]
    fn exponential_short_circuits() {
        let w = PenaltyWeights::new(1.2e-4, 0.015).unwrap();
        let d = TteDistribution::exponential(0.1).unwrap();
        let cfg = SolverConfig::for_distribution(&d);
        let r = algorithm1_offset(&d, &w, &cfg).unwrap();
        assert_eq!(r.method, Method::Prop1Root);
        assert!(r.has_flag(SolverFlag::OffsetIrrelevant));
        assert_eq!(r.policy.ts, r.policy.delta);
        let root = solve_exponential_optimum(0.1, &w, cfg.xi).unwrap();
        assert_eq!(r.policy.ts, root.policy.ts);
    }

    #[test]
    fn unshifted_rayleigh_mean_one() {
        let d = TteDistribution::rayleigh_from_mean(1.0).unwrap();
        let cfg = SolverConfig::for_distribution(&d);
        let r = algorithm1_offset(&d, &vas(), &cfg).unwrap();
        let p = minimize_periodic(&d, &vas(), &cfg).unwrap();
        assert_eq!(r.offset_multiplier, Some(3));
        assert!(!r.has_flag(SolverFlag::LinearScanFallback));
        assert!((r.penalty - 0.099152).abs() < 1e-4, "{}", r.penalty);
        assert!(r.penalty <= p.penalty + 1e-12);
    }

    #[test]
    fn shifted_rayleigh_mean_one() {
        let d = TteDistribution::shifted_rayleigh_from_mean(1.0, 0.5).unwrap();
        let mut cfg = SolverConfig::for_distribution(&d);
        cfg.t_min = 0.5;
        let r = algorithm1_offset(&d, &vas(), &cfg).unwrap();
        assert_eq!(r.offset_multiplier, Some(6));
        assert!((r.penalty - 0.071662).abs() < 1e-4, "{}", r.penalty);
        assert!(r.policy.delta >= 0.5);
    }

    #[test]
    fn unimodality_check() {
        assert!(unimodal([3.0, 2.0, 2.0, 5.0].into_iter()));
        assert!(unimodal([1.0, 2.0, 3.0].into_iter()));
        assert!(!unimodal([1.0, 2.0, 1.5, 3.0].into_iter()));
    }

    #[test]
    fn rejects_small_n_max() {
        let d = TteDistribution::rayleigh(1.0).unwrap();
        let mut cfg = SolverConfig::for_distribution(&d);
        cfg.n_max = 1;
        assert!(algorithm1_offset(&d, &vas(), &cfg).is_err());
    }
}
