//! Closed forms for a Rayleigh event time with scale `sigma`, shifted by
//! `location`.
//!
//! Sampling instants below the location see `ccdf = 1`. If `c` of them
//! fall there and the first one past it sits `d0` beyond the location,
//! `sum_k ccdf(k ts + delta) = c + theta(sigma, ts, d0)` with the one-sided
//! theta series of [`crate::theta`].

use crate::analytics::PenaltyWeights;
use crate::distribution::SQRT_HALF_PI;
use crate::numeric::lattice_points_below;
use crate::theta::{dual_tail, theta_density_moment, theta_partial_sum};

/// `(c, d0)`: lattice points strictly before the location and the
/// distance of the next one past it.
fn split(location: f64, ts: f64, delta: f64) -> (u64, f64) {
    if location <= 0.0 {
        return (0, delta);
    }
    let c = lattice_points_below(delta, ts, location);
    let d0 = (delta + c as f64 * ts - location).max(0.0);
    (c, d0)
}

/// `sum_{k>=0} ccdf(k ts + delta)`.
pub fn ccdf_lattice_sum(sigma: f64, location: f64, ts: f64, delta: f64) -> f64 {
    let (c, d0) = split(location, ts, delta);
    c as f64 + theta_partial_sum(sigma, ts, d0)
}

pub fn expected_samples(sigma: f64, location: f64, ts: f64, delta: f64) -> f64 {
    1.0 + ccdf_lattice_sum(sigma, location, ts, delta)
}

/// `E[W] = delta + ts * sum_k ccdf(k ts + delta) - E[T]`.
pub fn expected_wait(sigma: f64, location: f64, ts: f64, delta: f64) -> f64 {
    let (c, d0) = split(location, ts, delta);
    // Sampling instants before the location fill that stretch exactly; the
    // remainder is the unshifted wait with offset d0.
    delta + c as f64 * ts - location + ts * theta_partial_sum(sigma, ts, d0) - sigma * SQRT_HALF_PI
}

/// `E[S] = sum_{k>=0} ccdf(k ts)` for `delta = ts`.
pub fn periodic_expected_samples(sigma: f64, location: f64, ts: f64) -> f64 {
    ccdf_lattice_sum(sigma, location, ts, 0.0)
}

/// `E[W] = ts * sum_{k>=0} ccdf(k ts) - E[T]` for `delta = ts`.
///
/// Without a shift and with `ts < sigma` this uses the dual series, where
/// the wait is `ts/2 + 2 sigma sqrt(pi/2) * dual_tail` and does not cancel.
pub fn periodic_expected_wait(sigma: f64, location: f64, ts: f64) -> f64 {
    if location == 0.0 && ts < sigma {
        0.5 * ts + 2.0 * sigma * SQRT_HALF_PI * dual_tail(sigma, ts)
    } else {
        ts * periodic_expected_samples(sigma, location, ts) - location - sigma * SQRT_HALF_PI
    }
}

/// Combined penalty without offset and without shift:
/// `alpha S + beta (ts S - sigma sqrt(pi/2))` with `S = theta(sigma, ts, 0)`.
pub fn periodic_penalty_combined(sigma: f64, ts: f64, w: &PenaltyWeights) -> f64 {
    let s = theta_partial_sum(sigma, ts, 0.0);
    (w.alpha + w.beta * ts) * s - w.beta * sigma * SQRT_HALF_PI
}

/// Combined penalty with offset and without shift:
/// `alpha + beta (delta - sigma sqrt(pi/2)) + (alpha + beta ts) theta(sigma, ts, delta)`.
pub fn penalty_combined(sigma: f64, ts: f64, delta: f64, w: &PenaltyWeights) -> f64 {
    w.alpha + w.beta * (delta - sigma * SQRT_HALF_PI) + (w.alpha + w.beta * ts) * theta_partial_sum(sigma, ts, delta)
}

/// `dE/dts` where the offset moves with slope `m = d delta / d ts`:
/// `-(alpha + beta ts) sum_k (k + m) f(x_k) + beta (m + sum_k ccdf(x_k))`.
pub fn penalty_derivative(sigma: f64, location: f64, ts: f64, delta: f64, m: f64, w: &PenaltyWeights) -> f64 {
    let (c, d0) = split(location, ts, delta);
    let moment = theta_density_moment(sigma, ts, d0, c as f64 + m);
    let ccdf_sum = c as f64 + theta_partial_sum(sigma, ts, d0);
    -(w.alpha + w.beta * ts) * moment + w.beta * (m + ccdf_sum)
}
