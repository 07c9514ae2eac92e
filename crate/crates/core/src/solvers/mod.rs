//! Optimal sampling policies.
//!
//! * [`solve_exponential_optimum`]: root of `e^x - x = (alpha/beta) lambda + 1`.
//! * [`minimize_periodic`]: best `ts` without offset, by bisection on the
//!   sign of the derivative.
//! * [`algorithm1_offset`]: best `(ts, n ts)` by nested bisection on the
//!   integer multiple `n` and on `ts`.
//! * [`grid_search`]: exhaustive oracle on a lattice.
//! * [`golden_section_fallback`]: derivative-free search on a bracket.

mod bisection;
mod exponential;
mod golden;
mod grid;
mod offset;
mod periodic;

pub use bisection::{bisect_sign, Bracket};
pub use exponential::solve_exponential_optimum;
pub use golden::{golden_section_fallback, OffsetRule};
pub use grid::{grid_search, grid_search_periodic, GridRange};
pub use offset::algorithm1_offset;
pub use periodic::minimize_periodic;

use serde::{Deserialize, Serialize};

use crate::analytics::{self, PenaltyBreakdown, PenaltyWeights, SamplingPolicy};
use crate::distribution::TteDistribution;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Prop1Root,
    ConvexBisection,
    Algorithm1,
    GridSearch,
    GoldenSection,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Prop1Root => "prop1-root",
            Method::ConvexBisection => "convex-bisection",
            Method::Algorithm1 => "algorithm1",
            Method::GridSearch => "grid-search",
            Method::GoldenSection => "golden-section",
        }
    }
}

/// Conditions a caller should know about when reading a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverFlag {
    /// `alpha = 0`: the infimum is continuous sampling, `ts = 0`.
    Degenerate,
    /// The minimiser sits on the edge of the search interval.
    BoundaryOptimum,
    /// The law has no convexity guarantee; a coarse scan picked the basin.
    UnimodalityNotGuaranteed,
    /// Exponential law: the offset cannot help, so the no-offset optimum is returned.
    OffsetIrrelevant,
    /// The outer bisection on `n` was inconsistent; every `n` was scanned.
    LinearScanFallback,
    /// The objective was constant on the bracket.
    FlatObjective,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverResult {
    pub policy: SamplingPolicy,
    pub penalty: f64,
    pub expected_samples: f64,
    pub expected_wait: f64,
    pub method: Method,
    pub iterations: u32,
    pub converged: bool,
    pub offset_multiplier: Option<u32>,
    pub flags: Vec<SolverFlag>,
}

impl SolverResult {
    /// Result whose penalty is re-evaluated from the policy.
    pub(crate) fn evaluate(
        dist: &TteDistribution,
        weights: &PenaltyWeights,
        policy: SamplingPolicy,
        method: Method,
        iterations: u32,
        converged: bool,
    ) -> Result<Self> {
        let b = analytics::penalty(dist, &policy, weights)?;
        Ok(Self::from_breakdown(policy, b, method, iterations, converged))
    }

    pub(crate) fn from_breakdown(
        policy: SamplingPolicy,
        b: PenaltyBreakdown,
        method: Method,
        iterations: u32,
        converged: bool,
    ) -> Self {
        Self {
            policy,
            penalty: b.penalty,
            expected_samples: b.expected_samples,
            expected_wait: b.expected_wait,
            method,
            iterations,
            converged,
            offset_multiplier: None,
            flags: Vec::new(),
        }
    }

    /// Continuous sampling, reached when `alpha = 0`.
    pub(crate) fn degenerate(method: Method) -> Self {
        Self {
            policy: SamplingPolicy { ts: 0.0, delta: 0.0 },
            penalty: 0.0,
            expected_samples: f64::INFINITY,
            expected_wait: 0.0,
            method,
            iterations: 0,
            converged: true,
            offset_multiplier: None,
            flags: vec![SolverFlag::Degenerate],
        }
    }

    pub fn has_flag(&self, flag: SolverFlag) -> bool {
        self.flags.contains(&flag)
    }

    pub(crate) fn flag(mut self, flag: SolverFlag) -> Self {
        if !self.flags.contains(&flag) {
            self.flags.push(flag);
        }
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Upper end of the sampling-interval search.
    pub ts_max: f64,
    /// Largest offset multiple tried by [`algorithm1_offset`].
    pub n_max: u32,
    /// Bracket width at which bisections stop, in seconds.
    pub xi: f64,
    /// Lattice spacing of [`grid_search`], in seconds.
    pub grid_resolution: f64,
    /// Smallest admissible offset for policies with a free offset.
    pub t_min: f64,
}

impl SolverConfig {
    /// `ts_max = 10 E[T]`, `n_max = 1024`, `xi = 1e-6`, grid `1e-3`, no `t_min`.
    pub fn for_distribution(dist: &TteDistribution) -> Self {
        Self {
            ts_max: 10.0 * dist.mean(),
            n_max: 1024,
            xi: 1e-6,
            grid_resolution: 1e-3,
            t_min: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.ts_max) || !positive(self.xi) || !positive(self.grid_resolution) || self.n_max == 0 {
            return Err(Error::Argument("solver limits must be positive".into()));
        }
        if self.xi >= self.ts_max {
            return Err(Error::Argument(format!("xi {} must be below ts_max {}", self.xi, self.ts_max)));
        }
        if !(self.t_min.is_finite() && self.t_min >= 0.0) {
            return Err(Error::Argument(format!("t_min must be non-negative, got {}", self.t_min)));
        }
        Ok(())
    }
}

/// Whether the penalty is proven convex in `ts` for every fixed multiple.
pub(crate) fn convexity_known(dist: &TteDistribution) -> bool {
    match dist {
        TteDistribution::Exponential { .. } => true,
        TteDistribution::Rayleigh { location, .. } => *location == 0.0,
        TteDistribution::Tabulated(_) => false,
    }
}

/// Points of a log-spaced grid over `[lo, hi]`.
pub(crate) fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..points)
        .map(|i| {
            if i + 1 == points {
                hi
            } else {
                (a + (b - a) * i as f64 / (points - 1) as f64).exp()
            }
        })
        .collect()
}
