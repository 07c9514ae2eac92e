//! Penalty and energy along one swept quantity.

use rayon::prelude::*;

use optsample_core::DeviceProfile;

use super::{config_echo, policy_cells, range, write_table, POLICY_COLUMNS};
use crate::error::{CliError, CliResult};
use crate::output::{Cell, Table};
use crate::policy::{evaluate, Evaluated, PolicySpec};
use crate::scenario::Scenario;
use crate::settings::{Settings, SweepVar};

/// Scenario and policies at one point of the sweep.
fn point(var: SweepVar, x: f64, base: &Scenario, s: &Settings, policies: &[PolicySpec]) -> CliResult<Vec<Evaluated>> {
    let device = |f: &dyn Fn(&mut DeviceProfile)| -> CliResult<Scenario> {
        let mut d = base.require_device("a device sweep")?;
        f(&mut d);
        base.with_device(d)
    };
    let scn = match var {
        SweepVar::Ts => {
            let delta = match (s.delta, s.multiple) {
                (Some(_), Some(_)) => return Err(CliError::Usage("give either --delta or --multiple, not both".into())),
                (Some(d), None) => Some(d),
                (None, Some(n)) => Some(n as f64 * x),
                (None, None) => None,
            };
            return Ok(vec![evaluate(PolicySpec::Fixed { ts: x, delta }, base)?]);
        }
        SweepVar::MeanTte => base.with_dist(base.dist.with_mean(x)?)?,
        SweepVar::TauComm => device(&|d| d.tau_comm = x)?,
        SweepVar::PowerRatio => device(&|d| d.p_comm = x * d.p_idle)?,
    };
    policies.iter().map(|p| evaluate(*p, &scn)).collect()
}

pub fn run(s: &Settings) -> CliResult<()> {
    let base = Scenario::from_settings(s)?;
    let var = s.var.ok_or_else(|| CliError::Usage("sweep needs --var".into()))?;
    let (from, to) = match (s.from, s.to) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(CliError::Usage("sweep needs --from and --to".into())),
    };
    let xs = range(from, to, s.steps.unwrap_or(100), s.log.unwrap_or(false))?;
    let policies = match var {
        SweepVar::Ts => Vec::new(),
        _ => PolicySpec::parse_list(s.policies.as_deref().unwrap_or("pi-star"))?,
    };

    // Points are independent; collecting an indexed parallel iterator keeps sweep order.
    let points: Vec<CliResult<Vec<Evaluated>>> = xs.par_iter().map(|&x| point(var, x, &base, s, &policies)).collect();

    let mut columns = vec![var.column(), "policy"];
    columns.extend(POLICY_COLUMNS);
    columns.extend(["method", "converged"]);
    let mut table = Table::new(columns);
    let mut stalled = Vec::new();
    for (x, evaluated) in xs.iter().zip(points) {
        for e in evaluated? {
            if !e.converged {
                stalled.push(format!("{} at {x}", e.label));
            }
            let mut row: Vec<Cell> = vec![(*x).into(), e.label.clone().into()];
            row.extend(policy_cells(&e));
            row.extend([e.method.into(), e.converged.into()]);
            table.push(row);
        }
    }
    write_table(&table, s, &config_echo("sweep", s, &base))?;
    if stalled.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failure(format!("no convergence for {}", stalled.join(", "))))
    }
}
