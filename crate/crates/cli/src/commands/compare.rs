//! Two policies side by side, with the battery-life gain of the first.

use rayon::prelude::*;

use optsample_core::energy::battery_life_gain;

use super::{config_echo, range, write_table};
use crate::error::{CliError, CliResult};
use crate::output::{Cell, Table};
use crate::policy::{evaluate, Evaluated, PolicySpec};
use crate::scenario::Scenario;
use crate::settings::Settings;

fn pair(scn: &Scenario, first: PolicySpec, second: PolicySpec) -> CliResult<(Evaluated, Evaluated, f64)> {
    let a = evaluate(first, scn)?;
    let b = evaluate(second, scn)?;
    let gain = match (a.total_energy, b.total_energy) {
        (Some(ea), Some(eb)) => battery_life_gain(eb, ea)?,
        _ => unreachable!("compare requires a device"),
    };
    Ok((a, b, gain))
}

pub fn run(s: &Settings) -> CliResult<()> {
    let base = Scenario::from_settings(s)?;
    base.require_device("compare")?;
    let first = PolicySpec::parse(s.first.as_deref().unwrap_or("pi-star"))?;
    let second = PolicySpec::parse(s.second.as_deref().unwrap_or("pi0"))?;

    // With --from/--to the mean time to event is swept.
    let scenarios: Vec<Scenario> = match (s.from, s.to) {
        (None, None) => vec![base.clone()],
        (Some(a), Some(b)) => range(a, b, s.steps.unwrap_or(20), s.log.unwrap_or(false))?
            .into_iter()
            .map(|m| base.with_dist(base.dist.with_mean(m)?))
            .collect::<CliResult<_>>()?,
        _ => return Err(CliError::Usage("a mean sweep needs both --from and --to".into())),
    };
    let results: Vec<CliResult<_>> = scenarios.par_iter().map(|scn| pair(scn, first, second)).collect();

    let mut table = Table::new(vec![
        "mean_tte_s",
        "first",
        "first_ts_s",
        "first_delta_s",
        "first_penalty_j",
        "first_total_energy_j",
        "second",
        "second_ts_s",
        "second_delta_s",
        "second_penalty_j",
        "second_total_energy_j",
        "battery_life_gain",
    ]);
    let mut stalled = Vec::new();
    for (scn, r) in scenarios.iter().zip(results) {
        let (a, b, gain) = r?;
        for e in [&a, &b] {
            if !e.converged {
                stalled.push(format!("{} at mean {}", e.label, scn.dist.mean()));
            }
        }
        let mut row: Vec<Cell> = vec![scn.dist.mean().into()];
        for e in [&a, &b] {
            row.extend([
                e.label.clone().into(),
                e.policy.ts.into(),
                e.policy.delta.into(),
                e.penalty.into(),
                Cell::opt(e.total_energy),
            ]);
        }
        row.push(gain.into());
        table.push(row);
    }
    write_table(&table, s, &config_echo("compare", s, &base))?;
    if stalled.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failure(format!("no convergence for {}", stalled.join(", "))))
    }
}
