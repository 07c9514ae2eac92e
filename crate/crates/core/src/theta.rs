//! Gaussian lattice sums `sum_{k>=0} exp(-(k*ts + delta)^2 / (2 sigma^2))`.
//!
//! These are one-sided Jacobi theta series. The Rayleigh closed forms need
//! them for every policy evaluation, so both a direct route and, for
//! `delta = 0`, a Poisson-summation dual are provided. The direct series
//! needs `O(sigma / ts)` terms and the dual `O(ts / sigma)` terms.
//!
//! Poisson summation over the full lattice gives
//! `sum_{k in Z} f(k, t) = sqrt(2 pi) (sigma / t) sum_{k in Z} f(k, 2 pi sigma^2 / t)`
//! with `f(k, t) = exp(-k^2 t^2 / (2 sigma^2))`. Folding both sides onto
//! `k >= 0` counts the `k = 0` term once:
//! `S(t) = 1/2 + c/2 * (2 S(t') - 1)` with `c = sqrt(2 pi) sigma / t`.

use std::f64::consts::PI;

use crate::numeric::NeumaierSum;

// Both bounds sit below the rounding of the sum: the Rayleigh wait subtracts
// the mean from `ts * sum`, which magnifies any truncation left here.
const TERM_RTOL: f64 = 1e-17;
const TAIL_RTOL: f64 = 1e-17;
const MAX_TERMS: u64 = 1 << 40;

/// `sum_{k>=0} exp(-(k*ts + delta)^2 / (2 sigma^2))` by direct summation.
///
/// Summation stops once the last term and a Gaussian-tail bound on the
/// remainder are both below `1e-17` of the running sum.
pub fn theta_direct(sigma: f64, ts: f64, delta: f64) -> f64 {
    debug_assert!(sigma > 0.0 && ts > 0.0 && delta >= 0.0);
    let two_s2 = 2.0 * sigma * sigma;
    let mut sum = NeumaierSum::new();
    let mut k: u64 = 0;
    loop {
        let y = k as f64 * ts + delta;
        let term = (-(y * y) / two_s2).exp();
        sum.add(term);
        let total = sum.value();
        if term == 0.0 {
            break;
        }
        if y > 0.0 && term < TERM_RTOL * total {
            // sum_{j>k} g(j) <= (1/ts) * int_y^inf exp(-u^2/2s^2) du
            //               <= sigma^2 / (ts * y) * g(k)
            let tail = sigma * sigma / (ts * y) * term;
            if tail < TAIL_RTOL * total {
                break;
            }
        }
        k += 1;
        if k >= MAX_TERMS {
            break;
        }
    }
    sum.value()
}

/// `sum_{k>=0} exp(-k^2 ts^2 / (2 sigma^2))` through the Poisson dual.
pub fn theta_dual(sigma: f64, ts: f64) -> f64 {
    debug_assert!(sigma > 0.0 && ts > 0.0);
    let scale = (2.0 * PI).sqrt() * sigma / ts;
    0.5 + 0.5 * scale * (1.0 + 2.0 * dual_tail(sigma, ts))
}

/// Terms `k >= 1` of the dual series, `sum_{k>=1} exp(-k^2 t'^2 / (2 sigma^2))`
/// with `t' = 2 pi sigma^2 / ts`. Strictly positive and tiny for `ts < sigma`.
pub fn dual_tail(sigma: f64, ts: f64) -> f64 {
    let dual_ts = 2.0 * PI * sigma * sigma / ts;
    theta_direct(sigma, dual_ts, dual_ts)
}

/// One-sided theta sum, choosing the faster convergent route.
///
/// The dual applies only for `delta = 0` (the lattice is symmetric about
/// the origin) and is used when `ts < sigma`.
pub fn theta_partial_sum(sigma: f64, ts: f64, delta: f64) -> f64 {
    if delta == 0.0 && ts < sigma {
        theta_dual(sigma, ts)
    } else {
        theta_direct(sigma, ts, delta)
    }
}

/// `sum_{k>=0} (k + shift) * (y_k / sigma^2) * exp(-y_k^2 / (2 sigma^2))`
/// with `y_k = k*ts + delta`.
///
/// This is the lattice sum of the Rayleigh density weighted by how fast
/// each sampling instant moves with `ts`; it drives the analytic
/// derivative of the penalty.
pub fn theta_density_moment(sigma: f64, ts: f64, delta: f64, shift: f64) -> f64 {
    debug_assert!(sigma > 0.0 && ts > 0.0 && delta >= 0.0);
    let s2 = sigma * sigma;
    let mut sum = NeumaierSum::new();
    let mut k: u64 = 0;
    loop {
        let y = k as f64 * ts + delta;
        let density = y / s2 * (-(y * y) / (2.0 * s2)).exp();
        let term = (k as f64 + shift) * density;
        sum.add(term);
        // Past y = 2 sigma each term shrinks faster than geometrically. The
        // k = 0 term may carry zero weight, so it never ends the sum.
        if y > 2.0 * sigma && (density == 0.0 || (k > 0 && term.abs() <= 1e-17 * sum.value().abs())) {
            break;
        }
        k += 1;
        if k >= MAX_TERMS {
            break;
        }
    }
    sum.value()
}
