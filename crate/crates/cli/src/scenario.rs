//! Turns settings into a concrete scenario: law, weights, device and solver limits.

use serde::Serialize;

use optsample_core::presets::{ScenarioPreset, BASELINE_TS};
use optsample_core::{DeviceProfile, PenaltyWeights, SamplingPolicy, SolverConfig, TabulatedCdf, TteDistribution};

use crate::error::{CliError, CliResult};
use crate::settings::{DistKind, Settings};

#[derive(Debug, Clone, Serialize)]
pub struct Scenario {
    pub preset: Option<&'static str>,
    pub dist: TteDistribution,
    pub weights: PenaltyWeights,
    /// Explicit `--alpha/--beta` pin the weights even when the device changes.
    #[serde(skip)]
    pub weights_pinned: bool,
    pub device: Option<DeviceProfile>,
    pub baseline: SamplingPolicy,
    pub solver: SolverConfig,
    /// Whether `ts_max` was set explicitly rather than derived from the mean.
    #[serde(skip)]
    pub ts_max_pinned: bool,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn build_dist(s: &Settings, base: Option<&TteDistribution>) -> CliResult<TteDistribution> {
    let kind = s.dist.or_else(|| {
        if s.cdf_file.is_some() {
            Some(DistKind::Tabulated)
        } else if s.sigma.is_some() {
            Some(DistKind::Rayleigh)
        } else if s.rate.is_some() {
            Some(DistKind::Exponential)
        } else {
            None
        }
    });
    let Some(kind) = kind else {
        let base = base.ok_or_else(|| usage("no scenario given: pass --preset, --dist or --config"))?;
        if s.location.is_some() {
            return Err(usage("--location needs --dist rayleigh"));
        }
        return Ok(match s.mean {
            Some(m) => base.with_mean(m)?,
            None => base.clone(),
        });
    };
    let stray = |flag: &str, set: bool| -> CliResult<()> {
        if set {
            Err(usage(format!("{flag} does not apply to a {kind:?} law").to_lowercase()))
        } else {
            Ok(())
        }
    };
    match kind {
        DistKind::Exponential => {
            stray("--sigma", s.sigma.is_some())?;
            stray("--location", s.location.is_some())?;
            stray("--cdf-file", s.cdf_file.is_some())?;
            match (s.rate, s.mean) {
                (Some(_), Some(_)) => Err(usage("give either --rate or --mean, not both")),
                (Some(r), None) => Ok(TteDistribution::exponential(r)?),
                (None, Some(m)) => Ok(TteDistribution::exponential(1.0 / m)?),
                (None, None) => Err(usage("an exponential law needs --rate or --mean")),
            }
        }
        DistKind::Rayleigh => {
            stray("--rate", s.rate.is_some())?;
            stray("--cdf-file", s.cdf_file.is_some())?;
            let location = s.location.unwrap_or(0.0);
            match (s.sigma, s.mean) {
                (Some(_), Some(_)) => Err(usage("give either --sigma or --mean, not both")),
                (Some(sigma), None) => Ok(TteDistribution::shifted_rayleigh(sigma, location)?),
                (None, Some(m)) => Ok(TteDistribution::shifted_rayleigh_from_mean(m, location)?),
                (None, None) => Err(usage("a rayleigh law needs --sigma or --mean")),
            }
        }
        DistKind::Tabulated => {
            stray("--rate", s.rate.is_some())?;
            stray("--sigma", s.sigma.is_some())?;
            stray("--location", s.location.is_some())?;
            let path = s.cdf_file.as_ref().ok_or_else(|| usage("a tabulated law needs --cdf-file"))?;
            let d = TteDistribution::Tabulated(TabulatedCdf::from_csv_path(path)?);
            Ok(match s.mean {
                Some(m) => d.with_mean(m)?,
                None => d,
            })
        }
    }
}

fn build_device(s: &Settings, base: Option<DeviceProfile>) -> CliResult<Option<DeviceProfile>> {
    let fields = [s.p_idle, s.p_comm, s.tau_comm, s.tau_proc];
    let device = match base {
        Some(d) => DeviceProfile {
            p_idle: s.p_idle.unwrap_or(d.p_idle),
            p_comm: s.p_comm.unwrap_or(d.p_comm),
            tau_comm: s.tau_comm.unwrap_or(d.tau_comm),
            tau_proc: s.tau_proc.unwrap_or(d.tau_proc),
        },
        None => match fields {
            [Some(p_idle), Some(p_comm), Some(tau_comm), Some(tau_proc)] => {
                DeviceProfile { p_idle, p_comm, tau_comm, tau_proc }
            }
            [None, None, None, None] => return Ok(None),
            _ => return Err(usage("a device needs all of --p-idle, --p-comm, --tau-comm and --tau-proc")),
        },
    };
    device.validate()?;
    Ok(Some(device))
}

impl Scenario {
    pub fn from_settings(s: &Settings) -> CliResult<Self> {
        let preset = s.preset.map(|p| ScenarioPreset::by_name(p.as_str())).transpose()?;
        let dist = build_dist(s, preset.as_ref().map(|p| &p.dist))?;
        let device = build_device(s, preset.as_ref().map(|p| p.device))?;

        let derived = device.map(|d| d.alpha_beta());
        let weights_pinned = s.alpha.is_some() || s.beta.is_some();
        let alpha = s.alpha.or(derived.map(|w| w.alpha));
        let beta = s.beta.or(derived.map(|w| w.beta));
        let weights = match (alpha, beta) {
            (Some(a), Some(b)) => PenaltyWeights::new(a, b)?,
            _ => return Err(usage("penalty weights need a device or both --alpha and --beta")),
        };

        let baseline_ts = s.baseline_ts.or(preset.as_ref().map(|p| p.baseline.ts)).unwrap_or(BASELINE_TS);
        let baseline = SamplingPolicy::periodic(baseline_ts)?;

        let mut solver = SolverConfig::for_distribution(&dist);
        solver.t_min = s.t_min.or(preset.as_ref().map(|p| p.t_min)).unwrap_or(0.0);
        if let Some(v) = s.grid_res {
            solver.grid_resolution = v;
        }
        if let Some(v) = s.xi {
            solver.xi = v;
        }
        if let Some(v) = s.n_max {
            solver.n_max = v;
        }
        if let Some(v) = s.ts_max {
            solver.ts_max = v;
        }
        solver.validate()?;

        Ok(Self {
            preset: s.preset.map(|p| p.as_str()),
            dist,
            weights,
            weights_pinned,
            device,
            baseline,
            solver,
            ts_max_pinned: s.ts_max.is_some(),
        })
    }

    /// Same scenario with another law; the default interval cap follows the mean.
    pub fn with_dist(&self, dist: TteDistribution) -> CliResult<Self> {
        let mut out = self.clone();
        if !self.ts_max_pinned {
            out.solver.ts_max = SolverConfig::for_distribution(&dist).ts_max;
        }
        out.dist = dist;
        out.solver.validate()?;
        Ok(out)
    }

    /// Same scenario on another device; weights follow unless pinned.
    pub fn with_device(&self, device: DeviceProfile) -> CliResult<Self> {
        if self.weights_pinned {
            return Err(usage("--alpha/--beta fix the weights, so device sweeps would have no effect"));
        }
        device.validate()?;
        let mut out = self.clone();
        out.device = Some(device);
        out.weights = device.alpha_beta();
        Ok(out)
    }

    pub fn require_device(&self, what: &str) -> CliResult<DeviceProfile> {
        self.device
            .ok_or_else(|| usage(format!("{what} needs a device: pass --preset or all of --p-idle, --p-comm, --tau-comm, --tau-proc")))
    }
}
