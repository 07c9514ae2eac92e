//! Closed forms for an exponential event time with rate `lambda`.
//!
//! With `x = lambda ts`, `y = lambda delta`, `q = exp(-x)` and
//! `g(u) = exp(-u) - 1 + u`:
//! `E[S] = 1 + exp(-y) / (1 - q)` and
//! `lambda E[W] = g(y) + exp(-y) g(x) / (1 - q)`.
//! Every term is non-negative, so neither form cancels.

use crate::analytics::PenaltyWeights;
use crate::numeric::exp_neg_tail;

/// `1 - exp(-x)` without cancellation.
fn one_minus_q(x: f64) -> f64 {
    -(-x).exp_m1()
}

pub fn expected_samples(rate: f64, ts: f64, delta: f64) -> f64 {
    1.0 + (-rate * delta).exp() / one_minus_q(rate * ts)
}

pub fn expected_wait(rate: f64, ts: f64, delta: f64) -> f64 {
    let (x, y) = (rate * ts, rate * delta);
    (exp_neg_tail(y) + (-y).exp() * exp_neg_tail(x) / one_minus_q(x)) / rate
}

/// `E[S] = 1 / (1 - exp(-lambda ts))` for `delta = ts`.
pub fn periodic_expected_samples(rate: f64, ts: f64) -> f64 {
    1.0 / one_minus_q(rate * ts)
}

/// `E[W] = (exp(-x) + x - 1) / (lambda (1 - exp(-x)))` for `delta = ts`.
pub fn periodic_expected_wait(rate: f64, ts: f64) -> f64 {
    let x = rate * ts;
    exp_neg_tail(x) / (rate * one_minus_q(x))
}

/// Combined penalty without offset: `(alpha + beta ts) / (1 - exp(-lambda ts)) - beta / lambda`.
pub fn periodic_penalty_combined(rate: f64, ts: f64, w: &PenaltyWeights) -> f64 {
    (w.alpha + w.beta * ts) / one_minus_q(rate * ts) - w.beta / rate
}

/// Combined penalty with offset:
/// `alpha + beta (delta - 1/lambda) + (alpha + beta ts) exp(-lambda delta) / (1 - exp(-lambda ts))`.
pub fn penalty_combined(rate: f64, ts: f64, delta: f64, w: &PenaltyWeights) -> f64 {
    w.alpha + w.beta * (delta - 1.0 / rate) + (w.alpha + w.beta * ts) * (-rate * delta).exp() / one_minus_q(rate * ts)
}

/// `dE/dts` where the offset moves with slope `m = d delta / d ts`.
pub fn penalty_derivative(rate: f64, ts: f64, delta: f64, m: f64, w: &PenaltyWeights) -> f64 {
    let x = rate * ts;
    let q = (-x).exp();
    let omq = one_minus_q(x);
    let ey = (-rate * delta).exp();
    let a = ey / omq;
    let da = -rate * m * a - rate * q * ey / (omq * omq);
    (w.alpha + w.beta * ts) * da + w.beta * (m + a)
}
