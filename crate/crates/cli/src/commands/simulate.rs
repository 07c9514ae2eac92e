//! Analytic expectations against a Monte Carlo run of the same policy.

use optsample_core::energy::expected_total_energy;
use optsample_core::montecarlo::within_band;
use optsample_core::{run_monte_carlo, SamplingPolicy};

use super::{config_echo, write_table};
use crate::error::{CliError, CliResult};
use crate::output::{Cell, Table};
use crate::policy::{evaluate, PolicySpec};
use crate::scenario::Scenario;
use crate::settings::Settings;

/// Width of the acceptance band, in standard errors.
const BAND: f64 = 4.0;

pub fn run(s: &Settings) -> CliResult<()> {
    let scn = Scenario::from_settings(s)?;
    let device = scn.require_device("simulate")?;
    let spec = match (s.ts, &s.policy) {
        (Some(_), Some(_)) => return Err(CliError::Usage("give either --policy or --ts, not both".into())),
        (Some(ts), None) => PolicySpec::Fixed { ts, delta: s.delta },
        (None, Some(name)) => PolicySpec::parse(name)?,
        (None, None) => PolicySpec::Star,
    };
    let cycles = s.cycles.unwrap_or(1_000_000);
    let seed = s.seed.unwrap_or(7);

    let e = evaluate(spec, &scn)?;
    let policy = SamplingPolicy::new(e.policy.ts, e.policy.delta)?;
    let mc = run_monte_carlo(&scn.dist, &policy, &device, cycles, seed)?;
    let energy = expected_total_energy(&scn.dist, &policy, &device)?;

    let mut table = Table::new(vec![
        "quantity", "policy", "ts_s", "delta_s", "analytic", "mc_mean", "mc_se", "z", "within_band",
    ]);
    let mut failed = Vec::new();
    for (name, analytic, mean, se) in [
        ("expected_samples", e.expected_samples, mc.mean_samples, mc.se_samples),
        ("expected_wait_s", e.expected_wait, mc.mean_wait, mc.se_wait),
        ("total_energy_j", energy, mc.mean_energy, mc.se_energy),
    ] {
        let ok = within_band(mean, se, analytic, BAND);
        if !ok {
            failed.push(name);
        }
        let z = if se > 0.0 { (mean - analytic) / se } else if mean == analytic { 0.0 } else { f64::INFINITY };
        table.push(vec![
            name.into(),
            e.label.clone().into(),
            policy.ts.into(),
            policy.delta.into(),
            analytic.into(),
            mean.into(),
            se.into(),
            z.into(),
            Cell::Bool(ok),
        ]);
    }
    write_table(&table, s, &config_echo("simulate", s, &scn))?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failure(format!("outside the {BAND}-SE band: {}", failed.join(", "))))
    }
}
