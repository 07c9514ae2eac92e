//! Flags shared by every subcommand. The same keys, in kebab case, make up
//! the flat JSON config file; flags given on the command line win.

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PresetName {
    Cps,
    Vas,
}

impl PresetName {
    pub fn as_str(self) -> &'static str {
        match self {
            PresetName::Cps => "cps",
            PresetName::Vas => "vas",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DistKind {
    Exponential,
    Rayleigh,
    Tabulated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVar {
    /// Sampling interval, at a fixed offset rule.
    #[value(name = "ts")]
    Ts,
    /// Mean time to event, with the chosen policies re-solved at each point.
    #[value(name = "mean_tte")]
    MeanTte,
    /// Communication time per sample.
    #[value(name = "tau_comm")]
    TauComm,
    /// Ratio of communication to idle power.
    #[value(name = "power_ratio")]
    PowerRatio,
}

impl SweepVar {
    pub fn column(self) -> &'static str {
        match self {
            SweepVar::Ts => "ts_s",
            SweepVar::MeanTte => "mean_tte_s",
            SweepVar::TauComm => "tau_comm_s",
            SweepVar::PowerRatio => "power_ratio",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Settings {
    /// Flat JSON object with any of these settings; flags override it.
    #[arg(long, value_name = "PATH")]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    /// Start from a reference scenario.
    #[arg(long, value_enum, help_heading = "Scenario")]
    pub preset: Option<PresetName>,
    /// Time-to-event law; replaces the preset law.
    #[arg(long, value_enum, help_heading = "Scenario")]
    pub dist: Option<DistKind>,
    /// Exponential rate, events per second.
    #[arg(long, help_heading = "Scenario")]
    pub rate: Option<f64>,
    /// Rayleigh scale, seconds.
    #[arg(long, help_heading = "Scenario")]
    pub sigma: Option<f64>,
    /// Rayleigh shift (earliest event time), seconds.
    #[arg(long, help_heading = "Scenario")]
    pub location: Option<f64>,
    /// Mean time to event, seconds; rescales the law.
    #[arg(long, help_heading = "Scenario")]
    pub mean: Option<f64>,
    /// CSV file of (t, cdf) knots for a tabulated law.
    #[arg(long, value_name = "PATH", help_heading = "Scenario")]
    pub cdf_file: Option<PathBuf>,
    /// Energy per sample, joules; overrides the device-derived value.
    #[arg(long, help_heading = "Scenario")]
    pub alpha: Option<f64>,
    /// Energy per second of waiting, watts; overrides the device-derived value.
    #[arg(long, help_heading = "Scenario")]
    pub beta: Option<f64>,
    /// Idle power, watts.
    #[arg(long, help_heading = "Device")]
    pub p_idle: Option<f64>,
    /// Communication power, watts.
    #[arg(long, help_heading = "Device")]
    pub p_comm: Option<f64>,
    /// Communication time per sample, seconds.
    #[arg(long, help_heading = "Device")]
    pub tau_comm: Option<f64>,
    /// Back-end processing time, seconds.
    #[arg(long, help_heading = "Device")]
    pub tau_proc: Option<f64>,
    /// Smallest admissible first-sample offset, seconds.
    #[arg(long, help_heading = "Scenario")]
    pub t_min: Option<f64>,
    /// Interval of the fixed-rate baseline policy pi0, seconds.
    #[arg(long, help_heading = "Scenario")]
    pub baseline_ts: Option<f64>,

    /// Grid spacing for brute-force search, seconds [default: 1e-3].
    #[arg(long, help_heading = "Solver")]
    pub grid_res: Option<f64>,
    /// Bisection stopping width, seconds [default: 1e-6].
    #[arg(long, help_heading = "Solver")]
    pub xi: Option<f64>,
    /// Largest offset multiple [default: 1024].
    #[arg(long, help_heading = "Solver")]
    pub n_max: Option<u32>,
    /// Largest sampling interval searched, seconds [default: 10 x mean].
    #[arg(long, help_heading = "Solver")]
    pub ts_max: Option<f64>,
    /// Cross-check solver results against a grid search.
    #[arg(long, num_args = 0..=1, default_missing_value = "true", help_heading = "Solver")]
    pub verify: Option<bool>,

    /// Sampling interval of an explicit policy, seconds.
    #[arg(long, visible_alias = "policy-ts", help_heading = "Policy")]
    pub ts: Option<f64>,
    /// Offset of an explicit policy, seconds [default: the interval].
    #[arg(long, help_heading = "Policy")]
    pub delta: Option<f64>,
    /// Named policy: pi0, pi-sharp, pi-star, or fixed:TS[:DELTA].
    #[arg(long, help_heading = "Policy")]
    pub policy: Option<String>,

    /// Monte Carlo cycles [default: 1000000].
    #[arg(long, help_heading = "Simulation")]
    pub cycles: Option<u64>,
    /// Monte Carlo seed [default: 7].
    #[arg(long, help_heading = "Simulation")]
    pub seed: Option<u64>,

    /// Swept quantity.
    #[arg(long, value_enum, help_heading = "Sweep")]
    pub var: Option<SweepVar>,
    /// First value of the sweep.
    #[arg(long, help_heading = "Sweep")]
    pub from: Option<f64>,
    /// Last value of the sweep.
    #[arg(long, help_heading = "Sweep")]
    pub to: Option<f64>,
    /// Number of sweep points [default: 100].
    #[arg(long, help_heading = "Sweep")]
    pub steps: Option<usize>,
    /// Space sweep points logarithmically.
    #[arg(long, num_args = 0..=1, default_missing_value = "true", help_heading = "Sweep")]
    pub log: Option<bool>,
    /// Comma-separated policies evaluated at each sweep point [default: pi-star].
    #[arg(long, help_heading = "Sweep")]
    pub policies: Option<String>,
    /// In a ts sweep, set the offset to this multiple of the interval.
    #[arg(long, help_heading = "Sweep")]
    pub multiple: Option<u32>,

    /// Policy whose battery-life gain is reported [default: pi-star].
    #[arg(long, help_heading = "Compare")]
    pub first: Option<String>,
    /// Reference policy [default: pi0].
    #[arg(long, help_heading = "Compare")]
    pub second: Option<String>,

    /// Output file [default: stdout].
    #[arg(long, value_name = "PATH", help_heading = "Output")]
    pub out: Option<PathBuf>,
    /// Output format [default: csv].
    #[arg(long, value_enum, help_heading = "Output")]
    pub format: Option<Format>,
}

impl Settings {
    /// Settings from `--config`, if any, overlaid with the flags.
    pub fn resolve(self) -> Result<Self, CliError> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let text = std::fs::read_to_string(&path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let mut merged: Value = serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("config {} is not valid JSON: {e}", path.display())))?;
        let Value::Object(base) = &mut merged else {
            return Err(CliError::Usage(format!("config {} must be a JSON object", path.display())));
        };
        if let Value::Object(flags) = serde_json::to_value(&self).expect("settings serialise") {
            // A scale given on the command line replaces whichever scale the file used.
            const SCALE: [&str; 3] = ["rate", "sigma", "mean"];
            if SCALE.iter().any(|k| flags.get(*k).is_some_and(|v| !v.is_null())) {
                base.retain(|k, _| !SCALE.contains(&k.as_str()));
            }
            for (k, v) in flags {
                if !v.is_null() {
                    base.insert(k, v);
                }
            }
        }
        let mut s: Settings = serde_json::from_value(merged)
            .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
        s.config = Some(path);
        Ok(s)
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or(Format::Csv)
    }
}
