//! Series forms valid for any event-time CDF.
//!
//! `E[S] = 1 + sum_{k>=0} ccdf(x_k)` with `x_k = k ts + delta`, and
//! `E[W] = ts - sum_{k>=0} int_0^ts (F(x_k) - F(x_k - w)) dw + int_ts^delta F(delta - w) dw`.
//! Each inner integral is `ts F(x_k) - int_{x_k - ts}^{x_k} F`. The
//! integral of the CDF is supplied by the caller; [`cdf_quadrature`] builds
//! one from adaptive Simpson split at known kinks.

use crate::analytics::QUADRATURE_TOL;
use crate::error::{Error, Result};
use crate::numeric::NeumaierSum;
use crate::quadrature::integrate_piecewise;

/// Hard cap on series terms; reached only by CDFs that never get to 1.
const MAX_TERMS: u64 = 100_000_000;

fn too_many_terms() -> Error {
    Error::Evaluation(format!("series did not converge within {MAX_TERMS} terms; does the CDF reach 1?"))
}

/// `sum_{k>=0} ccdf(k ts + delta)`, stopping once the CDF reaches 1.
pub fn ccdf_lattice_sum<F>(cdf: &F, support_end: Option<f64>, ts: f64, delta: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let mut sum = NeumaierSum::new();
    for k in 0..MAX_TERMS {
        let x = k as f64 * ts + delta;
        if support_end.is_some_and(|e| x >= e) {
            return Ok(sum.value());
        }
        let tail = 1.0 - cdf(x);
        if tail <= 0.0 {
            return Ok(sum.value());
        }
        sum.add(tail);
    }
    Err(too_many_terms())
}

pub fn expected_samples<F>(cdf: &F, support_end: Option<f64>, ts: f64, delta: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    Ok(1.0 + ccdf_lattice_sum(cdf, support_end, ts, delta)?)
}

/// `(a, b) -> int_a^b cdf` by adaptive Simpson, split at `breakpoints`
/// (sorted). Negative times contribute nothing.
pub fn cdf_quadrature<'a, F>(cdf: &'a F, breakpoints: &'a [f64]) -> impl Fn(f64, f64) -> Result<f64> + 'a
where
    F: Fn(f64) -> f64,
{
    move |a, b| integrate_piecewise(cdf, a.max(0.0), b, breakpoints, QUADRATURE_TOL)
}

fn window_sum<F, I>(cdf: &F, integral: &I, support_end: Option<f64>, ts: f64, first: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
    I: Fn(f64, f64) -> Result<f64>,
{
    let mut sum = NeumaierSum::new();
    for k in 0..MAX_TERMS {
        let x = k as f64 * ts + first;
        let start = x - ts;
        // Once the window starts where F = 1 every later term vanishes.
        if support_end.is_some_and(|e| start >= e) || (start >= 0.0 && cdf(start) >= 1.0) {
            return Ok(sum.value());
        }
        // ts F(x) - int_{x - ts}^{x} F: the part of the window not spent waiting.
        sum.add(ts * cdf(x) - integral((x - ts).max(0.0), x)?);
    }
    Err(too_many_terms())
}

pub fn expected_wait<F, I>(cdf: &F, integral: &I, support_end: Option<f64>, ts: f64, delta: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
    I: Fn(f64, f64) -> Result<f64>,
{
    let windows = window_sum(cdf, integral, support_end, ts, delta)?;
    // int_ts^delta F(delta - w) dw = int_0^{delta - ts} F(t) dt
    let head = integral(0.0, delta - ts)?;
    Ok(ts - windows + head)
}

/// `E[S] = sum_{k>=0} ccdf(k ts)` without offset.
pub fn periodic_expected_samples<F>(cdf: &F, support_end: Option<f64>, ts: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    ccdf_lattice_sum(cdf, support_end, ts, 0.0)
}

/// `E[W] = ts - sum_{k>=1} int_0^ts (F(k ts) - F(k ts - w)) dw` without offset.
pub fn periodic_expected_wait<F, I>(cdf: &F, integral: &I, support_end: Option<f64>, ts: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
    I: Fn(f64, f64) -> Result<f64>,
{
    Ok(ts - window_sum(cdf, integral, support_end, ts, ts)?)
}
