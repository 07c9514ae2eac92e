//! Optimal policies for one scenario, optionally checked against a grid.

use optsample_core::solvers::{grid_search, grid_search_periodic, GridRange};
use optsample_core::TteDistribution;

use super::{config_echo, policy_cells, write_table, POLICY_COLUMNS};
use crate::error::{CliError, CliResult};
use crate::output::{Cell, Table};
use crate::policy::{evaluate, evaluate_solver, Evaluated, PolicySpec};
use crate::scenario::Scenario;
use crate::settings::Settings;

/// Largest relative excess of a solver penalty over the grid optimum.
const VERIFY_TOLERANCE: f64 = 0.01;

/// Smallest multiple of `res` at or above `x`, so grid rows share knots.
fn snap_up(x: f64, res: f64) -> f64 {
    ((x / res) - 1e-9).ceil().max(1.0) * res
}

fn grid_checks(scn: &Scenario, sharp: &Evaluated, star: Option<&Evaluated>) -> CliResult<Vec<(Evaluated, f64)>> {
    let res = scn.solver.grid_resolution;
    let w = &scn.weights;
    let widest = star.map_or(sharp.policy.ts, |s| s.policy.ts.max(sharp.policy.ts));
    let ts_hi = scn.solver.ts_max.min((3.0 * widest).max(10.0 * res));
    let mut checks = Vec::new();

    let g = grid_search_periodic(&scn.dist, w, GridRange::new(res, ts_hi), res)?;
    checks.push((evaluate_solver("pi-sharp-grid", scn, g), sharp.penalty));

    if let Some(star) = star {
        let d_lo = snap_up(scn.solver.t_min.max(res), res);
        let d_hi = (2.0 * scn.dist.mean() + 1.0).max(2.0 * star.policy.delta).max(d_lo);
        let g = grid_search(&scn.dist, w, GridRange::new(res, ts_hi), GridRange::new(d_lo, d_hi), res)?;
        checks.push((evaluate_solver("pi-star-grid", scn, g), star.penalty));
    }
    Ok(checks)
}

pub fn run(s: &Settings) -> CliResult<()> {
    let scn = Scenario::from_settings(s)?;
    let sharp = evaluate(PolicySpec::Sharp, &scn)?;
    let star = match scn.dist {
        TteDistribution::Exponential { .. } => None,
        _ => Some(evaluate(PolicySpec::Star, &scn)?),
    };

    let mut failures = Vec::new();
    let mut rows: Vec<(Evaluated, Option<bool>)> = vec![(sharp.clone(), None)];
    if let Some(st) = &star {
        rows.push((st.clone(), None));
    }
    if s.verify.unwrap_or(false) {
        for (grid, solver_penalty) in grid_checks(&scn, &sharp, star.as_ref())? {
            let ok = solver_penalty <= grid.penalty * (1.0 + VERIFY_TOLERANCE);
            if !ok {
                failures.push(format!(
                    "{}: solver penalty {solver_penalty:.6e} exceeds grid {:.6e} by more than 1%",
                    grid.label, grid.penalty
                ));
            }
            rows.push((grid, Some(ok)));
        }
    }
    for (e, _) in &rows {
        if !e.converged {
            failures.push(format!("{} ({}) did not converge", e.label, e.method));
        }
    }

    let mut columns = vec!["policy", "method"];
    columns.extend(POLICY_COLUMNS);
    columns.extend(["offset_multiple", "iterations", "converged", "flags", "verified"]);
    let mut table = Table::new(columns);
    for (e, verified) in &rows {
        let mut row: Vec<Cell> = vec![e.label.clone().into(), e.method.into()];
        row.extend(policy_cells(e));
        row.extend([
            e.offset_multiple.map_or(Cell::Empty, |n| Cell::Int(n.into())),
            Cell::Int(e.iterations.into()),
            e.converged.into(),
            e.flags_text().into(),
            verified.map_or(Cell::Empty, Cell::Bool),
        ]);
        table.push(row);
    }
    write_table(&table, s, &config_echo("solve", s, &scn))?;

    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failure(failures.join("; ")))
    }
}
