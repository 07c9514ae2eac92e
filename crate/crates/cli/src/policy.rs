//! Named policies and their evaluation under a scenario.

use optsample_core::analytics;
use optsample_core::energy::constant_energy;
use optsample_core::solvers::{algorithm1_offset, minimize_periodic, solve_exponential_optimum};
use optsample_core::{SamplingPolicy, SolverFlag, SolverResult, TteDistribution};

use crate::error::{CliError, CliResult};
use crate::scenario::Scenario;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PolicySpec {
    /// Fixed-rate baseline.
    Baseline,
    /// Best interval with the first sample one interval in.
    Sharp,
    /// Best interval and offset multiple.
    Star,
    Fixed { ts: f64, delta: Option<f64> },
}

impl PolicySpec {
    pub fn parse(text: &str) -> CliResult<Self> {
        let bad = || CliError::Usage(format!("unknown policy {text:?}; expected pi0, pi-sharp, pi-star or fixed:TS[:DELTA]"));
        match text.trim() {
            "pi0" => Ok(Self::Baseline),
            "pi-sharp" => Ok(Self::Sharp),
            "pi-star" => Ok(Self::Star),
            t => {
                let rest = t.strip_prefix("fixed:").ok_or_else(bad)?;
                let mut parts = rest.split(':').map(|p| p.parse::<f64>().map_err(|_| bad()));
                let ts = parts.next().ok_or_else(bad)??;
                let delta = parts.next().transpose()?;
                if parts.next().is_some() {
                    return Err(bad());
                }
                Ok(Self::Fixed { ts, delta })
            }
        }
    }

    pub fn parse_list(text: &str) -> CliResult<Vec<Self>> {
        let list = text.split(',').filter(|p| !p.trim().is_empty()).map(Self::parse).collect::<CliResult<Vec<_>>>()?;
        if list.is_empty() {
            return Err(CliError::Usage("empty policy list".into()));
        }
        Ok(list)
    }

    pub fn label(&self) -> String {
        match self {
            Self::Baseline => "pi0".into(),
            Self::Sharp => "pi-sharp".into(),
            Self::Star => "pi-star".into(),
            Self::Fixed { ts, delta: None } => format!("fixed:{ts}"),
            Self::Fixed { ts, delta: Some(d) } => format!("fixed:{ts}:{d}"),
        }
    }
}

/// A policy with its expectations under one scenario.
#[derive(Debug, Clone)]
pub struct Evaluated {
    pub label: String,
    pub method: &'static str,
    pub policy: SamplingPolicy,
    pub offset_multiple: Option<u32>,
    pub expected_samples: f64,
    pub expected_wait: f64,
    pub penalty: f64,
    /// Expected energy per event, when the scenario has a device.
    pub total_energy: Option<f64>,
    pub iterations: u32,
    pub converged: bool,
    pub flags: Vec<SolverFlag>,
}

impl Evaluated {
    pub fn flags_text(&self) -> String {
        let names: Vec<String> = self
            .flags
            .iter()
            .map(|f| serde_json::to_value(f).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default())
            .collect();
        names.join("|")
    }
}

fn from_solver(label: String, scn: &Scenario, r: SolverResult) -> Evaluated {
    Evaluated {
        label,
        method: r.method.as_str(),
        offset_multiple: r.offset_multiplier,
        expected_samples: r.expected_samples,
        expected_wait: r.expected_wait,
        penalty: r.penalty,
        total_energy: scn.device.map(|d| r.penalty + constant_energy(&scn.dist, &d)),
        iterations: r.iterations,
        converged: r.converged,
        flags: r.flags,
        policy: r.policy,
    }
}

fn fixed(label: String, scn: &Scenario, policy: SamplingPolicy) -> CliResult<Evaluated> {
    let b = analytics::penalty(&scn.dist, &policy, &scn.weights)?;
    Ok(Evaluated {
        label,
        method: "fixed",
        policy,
        offset_multiple: None,
        expected_samples: b.expected_samples,
        expected_wait: b.expected_wait,
        penalty: b.penalty,
        total_energy: scn.device.map(|d| b.penalty + constant_energy(&scn.dist, &d)),
        iterations: 0,
        converged: true,
        flags: Vec::new(),
    })
}

/// Best policy without offset: the closed-form root for exponential laws,
/// the convex bisection otherwise.
pub fn solve_sharp(scn: &Scenario) -> CliResult<SolverResult> {
    Ok(match scn.dist {
        TteDistribution::Exponential { rate } => solve_exponential_optimum(rate, &scn.weights, scn.solver.xi)?,
        _ => minimize_periodic(&scn.dist, &scn.weights, &scn.solver)?,
    })
}

pub fn evaluate(spec: PolicySpec, scn: &Scenario) -> CliResult<Evaluated> {
    let label = spec.label();
    match spec {
        PolicySpec::Baseline => fixed(label, scn, scn.baseline),
        PolicySpec::Sharp => Ok(from_solver(label, scn, solve_sharp(scn)?)),
        PolicySpec::Star => Ok(from_solver(label, scn, algorithm1_offset(&scn.dist, &scn.weights, &scn.solver)?)),
        PolicySpec::Fixed { ts, delta } => fixed(label, scn, SamplingPolicy::new(ts, delta.unwrap_or(ts))?),
    }
}

pub fn evaluate_solver(label: &str, scn: &Scenario, r: SolverResult) -> Evaluated {
    from_solver(label.to_string(), scn, r)
}
