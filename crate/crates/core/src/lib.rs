//! Energy-optimal periodic sampling of a random time-to-event.
//!
//! A terminal samples a monitored system at `delta + k * ts` and offloads
//! each sample for analysis. Samples taken before the event are wasted; the
//! gap between the event and the successful sample is idle waiting. The
//! crate evaluates the resulting energy penalty, finds the policies that
//! minimise it and checks every expectation by Monte Carlo simulation.

// `!(x > 0.0)` style checks reject NaN on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytics;
pub mod distribution;
pub mod energy;
pub mod error;
pub mod montecarlo;
pub mod numeric;
pub mod presets;
pub mod quadrature;
pub mod solvers;
pub mod theta;

pub use analytics::{OffsetLink, PenaltyBreakdown, PenaltyWeights, SamplingPolicy};
pub use distribution::{TabulatedCdf, TteDistribution};
pub use energy::{CycleOutcome, DeviceProfile};
pub use error::{Error, Result};
pub use montecarlo::{run_monte_carlo, McStats};
pub use presets::ScenarioPreset;
pub use solvers::{Method, SolverConfig, SolverFlag, SolverResult};
