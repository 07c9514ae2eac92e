//! The two reference scenarios: an exponential-TTE fault monitor (CPS) and
//! a video analytics assistant with Rayleigh task times (VAS).

use serde::{Deserialize, Serialize};

use crate::analytics::SamplingPolicy;
use crate::distribution::TteDistribution;
use crate::energy::DeviceProfile;
use crate::error::{Error, Result};
use crate::solvers::SolverConfig;

/// Interval and offset of the fixed-rate baseline, seconds.
pub const BASELINE_TS: f64 = 0.0833;

/// Mean task time of the VAS, seconds.
pub const VAS_MEAN_TTE: f64 = 4.846;

/// Minimum task time of the VAS, seconds.
pub const VAS_T_MIN: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioPreset {
    pub name: String,
    pub device: DeviceProfile,
    pub dist: TteDistribution,
    /// Smallest admissible first-sample offset, seconds.
    pub t_min: f64,
    pub baseline: SamplingPolicy,
}

impl ScenarioPreset {
    /// 3 V radio drawing 15 mA to transmit and 5 mA idle, 4 ms uplink,
    /// 5 ms processing, exponential faults with mean 10 s.
    pub fn cps() -> Self {
        Self {
            name: "cps".into(),
            device: DeviceProfile { p_idle: 0.015, p_comm: 0.045, tau_comm: 0.004, tau_proc: 0.005 },
            dist: TteDistribution::Exponential { rate: 0.1 },
            t_min: 0.0,
            baseline: SamplingPolicy { ts: BASELINE_TS, delta: BASELINE_TS },
        }
    }

    /// Head-mounted camera at 334 mW idle and 2.96 W streaming, 5.85 ms per
    /// frame, 525 ms back-end processing; task times are Rayleigh with mean
    /// 4.846 s and start no earlier than 0.5 s.
    pub fn vas() -> Self {
        Self::vas_with_mean(VAS_MEAN_TTE).expect("preset mean is valid")
    }

    /// The VAS with another mean task time; the 0.5 s minimum is kept.
    pub fn vas_with_mean(mean: f64) -> Result<Self> {
        Ok(Self {
            name: "vas".into(),
            device: DeviceProfile { p_idle: 0.334, p_comm: 2.96, tau_comm: 0.00585, tau_proc: 0.525 },
            dist: TteDistribution::shifted_rayleigh_from_mean(mean, VAS_T_MIN)?,
            t_min: VAS_T_MIN,
            baseline: SamplingPolicy { ts: BASELINE_TS, delta: BASELINE_TS },
        })
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "cps" => Ok(Self::cps()),
            "vas" => Ok(Self::vas()),
            other => Err(Error::Argument(format!("unknown preset {other:?}; expected cps or vas"))),
        }
    }

    /// Documented `beta / alpha` ratio of the scenario.
    pub fn documented_ratio(&self) -> Option<f64> {
        match self.name.as_str() {
            "cps" => Some(125.0),
            "vas" => Some(21.7),
            _ => None,
        }
    }

    /// Default solver limits for this scenario, with its `t_min`.
    pub fn solver_config(&self) -> SolverConfig {
        SolverConfig { t_min: self.t_min, ..SolverConfig::for_distribution(&self.dist) }
    }
}
