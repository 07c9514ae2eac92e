//! Expected samples, expected wait and energy penalty of a periodic policy.
//!
//! A policy samples at `delta + k * ts` for `k = 0, 1, ...`. With event time
//! `T`, the number of samples `S` counts instants up to and including the
//! first one at or after `T`, and the wait `W` is the gap between `T` and
//! that instant. The penalty is `alpha * E[S] + beta * E[W]`.
//!
//! The general identities used throughout are
//! `E[S] = 1 + sum_{k>=0} ccdf(k ts + delta)` and
//! `E[W] = delta + ts * sum_{k>=0} ccdf(k ts + delta) - E[T]`.

pub mod exponential;
pub mod general;
pub mod rayleigh;

use serde::{Deserialize, Serialize};

use crate::distribution::TteDistribution;
use crate::error::{Error, Result};

pub use crate::theta::theta_partial_sum;

/// Absolute quadrature tolerance per panel for the general wait formula.
pub const QUADRATURE_TOL: f64 = 1e-10;

/// Periodic sampling policy: first sample after `delta`, then every `ts`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplingPolicy {
    pub ts: f64,
    pub delta: f64,
}

impl SamplingPolicy {
    /// Policy with `delta >= ts`.
    pub fn new(ts: f64, delta: f64) -> Result<Self> {
        let p = Self { ts, delta };
        p.validate()?;
        Ok(p)
    }

    /// Policy without offset, `delta = ts`.
    pub fn periodic(ts: f64) -> Result<Self> {
        Self::new(ts, ts)
    }

    /// Policy with `delta = n * ts`.
    pub fn with_multiple(ts: f64, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("offset multiple must be at least 1".into()));
        }
        Self::new(ts, n as f64 * ts)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.ts.is_finite() && self.ts > 0.0) {
            return Err(Error::Domain(format!("sampling interval must be positive, got {}", self.ts)));
        }
        if !(self.delta.is_finite() && self.delta >= self.ts) {
            return Err(Error::Domain(format!(
                "offset {} must be at least the sampling interval {}",
                self.delta, self.ts
            )));
        }
        Ok(())
    }
}

/// Penalty weights: `alpha` joules per discarded sample, `beta` watts of
/// idle power spent waiting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PenaltyWeights {
    pub alpha: f64,
    pub beta: f64,
}

impl PenaltyWeights {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        let w = Self { alpha, beta };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha.is_finite() && self.alpha >= 0.0) {
            return Err(Error::Domain(format!("alpha must be non-negative, got {}", self.alpha)));
        }
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return Err(Error::Domain(format!("beta must be positive, got {}", self.beta)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PenaltyBreakdown {
    pub expected_samples: f64,
    pub expected_wait: f64,
    pub penalty: f64,
}

impl PenaltyBreakdown {
    fn new(expected_samples: f64, expected_wait: f64, weights: &PenaltyWeights) -> Self {
        Self {
            expected_samples,
            expected_wait,
            penalty: weights.alpha * expected_samples + weights.beta * expected_wait,
        }
    }
}

/// How the offset moves when the sampling interval is perturbed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OffsetLink {
    /// `delta` stays put.
    Fixed,
    /// `delta = n * ts`, so `d delta / d ts = n`.
    Multiple(u32),
}

impl OffsetLink {
    fn slope(self) -> f64 {
        match self {
            OffsetLink::Fixed => 0.0,
            OffsetLink::Multiple(n) => n as f64,
        }
    }
}

/// `E[S]` for any `delta >= 0`, without validating the policy.
pub(crate) fn samples_unchecked(dist: &TteDistribution, ts: f64, delta: f64) -> Result<f64> {
    Ok(match dist {
        TteDistribution::Exponential { rate } => exponential::expected_samples(*rate, ts, delta),
        TteDistribution::Rayleigh { sigma, location } => rayleigh::expected_samples(*sigma, *location, ts, delta),
        TteDistribution::Tabulated(table) => {
            general::expected_samples(&|t| table.cdf(t), Some(table.support_end()), ts, delta)?
        }
    })
}

/// `E[W]` for any `delta >= 0`, without validating the policy.
pub(crate) fn wait_unchecked(dist: &TteDistribution, ts: f64, delta: f64) -> Result<f64> {
    let w = match dist {
        TteDistribution::Exponential { rate } => exponential::expected_wait(*rate, ts, delta),
        TteDistribution::Rayleigh { sigma, location } => rayleigh::expected_wait(*sigma, *location, ts, delta),
        TteDistribution::Tabulated(table) => general::expected_wait(
            &|t| table.cdf(t),
            &|a, b| table.integrate(a, b, QUADRATURE_TOL),
            Some(table.support_end()),
            ts,
            delta,
        )?,
    };
    // Rounding in the cancelling forms can leave a few ulps below zero.
    Ok(w.max(0.0))
}

pub(crate) fn penalty_unchecked(
    dist: &TteDistribution,
    ts: f64,
    delta: f64,
    weights: &PenaltyWeights,
) -> Result<PenaltyBreakdown> {
    Ok(PenaltyBreakdown::new(
        samples_unchecked(dist, ts, delta)?,
        wait_unchecked(dist, ts, delta)?,
        weights,
    ))
}

pub fn expected_samples(dist: &TteDistribution, policy: &SamplingPolicy) -> Result<f64> {
    policy.validate()?;
    samples_unchecked(dist, policy.ts, policy.delta)
}

pub fn expected_wait(dist: &TteDistribution, policy: &SamplingPolicy) -> Result<f64> {
    policy.validate()?;
    wait_unchecked(dist, policy.ts, policy.delta)
}

pub fn penalty(dist: &TteDistribution, policy: &SamplingPolicy, weights: &PenaltyWeights) -> Result<PenaltyBreakdown> {
    policy.validate()?;
    weights.validate()?;
    penalty_unchecked(dist, policy.ts, policy.delta, weights)
}

/// Penalty of the policy without offset through the dedicated periodic
/// formulas rather than the offset ones.
pub fn periodic_penalty(dist: &TteDistribution, ts: f64, weights: &PenaltyWeights) -> Result<PenaltyBreakdown> {
    SamplingPolicy::periodic(ts)?;
    weights.validate()?;
    let (s, w) = match dist {
        TteDistribution::Exponential { rate } => (
            exponential::periodic_expected_samples(*rate, ts),
            exponential::periodic_expected_wait(*rate, ts),
        ),
        TteDistribution::Rayleigh { sigma, location } => (
            rayleigh::periodic_expected_samples(*sigma, *location, ts),
            rayleigh::periodic_expected_wait(*sigma, *location, ts),
        ),
        TteDistribution::Tabulated(table) => (
            general::periodic_expected_samples(&|t| table.cdf(t), Some(table.support_end()), ts)?,
            general::periodic_expected_wait(
                &|t| table.cdf(t),
                &|a, b| table.integrate(a, b, QUADRATURE_TOL),
                Some(table.support_end()),
                ts,
            )?,
        ),
    };
    Ok(PenaltyBreakdown::new(s, w.max(0.0), weights))
}

/// Derivative of the penalty with respect to `ts`.
///
/// With [`OffsetLink::Multiple`] the offset follows `delta = n * ts` and the
/// chain rule includes its motion; `Multiple(1)` is the derivative of the
/// no-offset penalty. Exponential and Rayleigh laws are differentiated term
/// by term; tabulated laws use a central difference with relative step
/// `1e-6`.
pub fn penalty_derivative_ts(
    dist: &TteDistribution,
    policy: &SamplingPolicy,
    weights: &PenaltyWeights,
    link: OffsetLink,
) -> Result<f64> {
    policy.validate()?;
    weights.validate()?;
    derivative_unchecked(dist, policy.ts, policy.delta, weights, link)
}

pub(crate) fn derivative_unchecked(
    dist: &TteDistribution,
    ts: f64,
    delta: f64,
    weights: &PenaltyWeights,
    link: OffsetLink,
) -> Result<f64> {
    let m = link.slope();
    match dist {
        TteDistribution::Exponential { rate } => Ok(exponential::penalty_derivative(*rate, ts, delta, m, weights)),
        TteDistribution::Rayleigh { sigma, location } => {
            Ok(rayleigh::penalty_derivative(*sigma, *location, ts, delta, m, weights))
        }
        TteDistribution::Tabulated(_) => {
            let h = 1e-6 * ts;
            let at = |t: f64| -> Result<f64> {
                let d = delta + m * (t - ts);
                Ok(penalty_unchecked(dist, t, d, weights)?.penalty)
            };
            Ok((at(ts + h)? - at(ts - h)?) / (2.0 * h))
        }
    }
}
