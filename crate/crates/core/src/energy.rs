//! Device energy accounting around the penalty.
//!
//! Per event the terminal spends `(S + 1) tau_c P_c + T0 P_0` with idle time
//! `T0 = T + W + tau_s - (S - 1) tau_c`. Rearranged, this is the penalty
//! `S tau_c (P_c - P_0) + W P_0` plus `(T + tau_c + tau_s) P_0 + tau_c P_c`,
//! which does not depend on the policy.

use serde::{Deserialize, Serialize};

use crate::analytics::{self, PenaltyWeights, SamplingPolicy};
use crate::distribution::TteDistribution;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeviceProfile {
    /// Idle power `P0`, watts.
    pub p_idle: f64,
    /// Communication power `Pc`, watts.
    pub p_comm: f64,
    /// One-way communication time `tau_c`, seconds.
    pub tau_comm: f64,
    /// Back-end processing time `tau_s`, seconds.
    pub tau_proc: f64,
}

impl DeviceProfile {
    pub fn new(p_idle: f64, p_comm: f64, tau_comm: f64, tau_proc: f64) -> Result<Self> {
        let d = Self { p_idle, p_comm, tau_comm, tau_proc };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p_idle > 0.0 && self.p_idle <= self.p_comm && self.p_comm.is_finite()) {
            return Err(Error::Domain(format!(
                "powers must satisfy 0 < p_idle <= p_comm, got {} and {}",
                self.p_idle, self.p_comm
            )));
        }
        if !(self.tau_comm > 0.0 && self.tau_comm.is_finite()) {
            return Err(Error::Domain(format!("tau_comm must be positive, got {}", self.tau_comm)));
        }
        if !(self.tau_proc >= 0.0 && self.tau_proc.is_finite()) {
            return Err(Error::Domain(format!("tau_proc must be non-negative, got {}", self.tau_proc)));
        }
        Ok(())
    }

    /// `alpha = tau_c (P_c - P_0)`, `beta = P_0`.
    pub fn alpha_beta(&self) -> PenaltyWeights {
        alpha_beta(self)
    }
}

pub fn alpha_beta(device: &DeviceProfile) -> PenaltyWeights {
    PenaltyWeights {
        alpha: device.tau_comm * (device.p_comm - device.p_idle),
        beta: device.p_idle,
    }
}

/// Policy-independent part of the expected energy per event.
pub fn constant_energy(dist: &TteDistribution, device: &DeviceProfile) -> f64 {
    (dist.mean() + device.tau_comm + device.tau_proc) * device.p_idle + device.tau_comm * device.p_comm
}

/// Expected energy per event: penalty plus the constant terms.
pub fn expected_total_energy(dist: &TteDistribution, policy: &SamplingPolicy, device: &DeviceProfile) -> Result<f64> {
    device.validate()?;
    let p = analytics::penalty(dist, policy, &alpha_beta(device))?;
    Ok(p.penalty + constant_energy(dist, device))
}

/// Relative battery-life increase when the energy per event drops from
/// `energy_baseline` to `energy_optimized`.
pub fn battery_life_gain(energy_baseline: f64, energy_optimized: f64) -> Result<f64> {
    if !(energy_baseline > 0.0 && energy_optimized > 0.0) {
        return Err(Error::Domain(format!(
            "energies must be positive, got {energy_baseline} and {energy_optimized}"
        )));
    }
    Ok(energy_baseline / energy_optimized - 1.0)
}

/// One monitoring cycle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CycleOutcome {
    pub samples: u64,
    pub wait: f64,
    pub idle_time: f64,
    pub energy: f64,
}

/// Plays one cycle with event time `tte`.
///
/// An event exactly on a sampling instant is caught by that sample.
pub fn simulate_cycle(tte: f64, policy: &SamplingPolicy, device: &DeviceProfile) -> CycleOutcome {
    let (ts, delta) = (policy.ts, policy.delta);
    let samples = if tte <= delta {
        1
    } else {
        let mut k = ((tte - delta) / ts).ceil().max(1.0) as u64;
        // Repair the division's rounding so that instant k is the first one >= tte.
        while delta + k as f64 * ts < tte {
            k += 1;
        }
        while k > 1 && delta + (k - 1) as f64 * ts >= tte {
            k -= 1;
        }
        1 + k
    };
    let wait = ((samples - 1) as f64 * ts + delta - tte).max(0.0);
    let idle_time = tte + wait + device.tau_proc - (samples - 1) as f64 * device.tau_comm;
    let energy = (samples + 1) as f64 * device.tau_comm * device.p_comm + idle_time * device.p_idle;
    CycleOutcome { samples, wait, idle_time, energy }
}
