pub mod compare;
pub mod preset;
pub mod simulate;
pub mod solve;
pub mod sweep;

use serde_json::{json, Value};

use crate::output::{emit, Cell, Table};
use crate::policy::Evaluated;
use crate::scenario::Scenario;
use crate::settings::Settings;
use crate::error::CliResult;

/// Everything that determined a run, echoed with its output.
pub fn config_echo(command: &str, settings: &Settings, scenario: &Scenario) -> Value {
    let mut flags = serde_json::to_value(settings).expect("settings serialise");
    if let Value::Object(m) = &mut flags {
        m.retain(|_, v| !v.is_null());
        if let Some(path) = &settings.config {
            m.insert("config".into(), json!(path.display().to_string()));
        }
    }
    json!({ "command": command, "settings": flags, "scenario": scenario })
}

/// `ts_s, delta_s, expected_samples, expected_wait_s, penalty_j, total_energy_j`.
pub fn policy_cells(e: &Evaluated) -> Vec<Cell> {
    vec![
        e.policy.ts.into(),
        e.policy.delta.into(),
        e.expected_samples.into(),
        e.expected_wait.into(),
        e.penalty.into(),
        Cell::opt(e.total_energy),
    ]
}

pub const POLICY_COLUMNS: [&str; 6] =
    ["ts_s", "delta_s", "expected_samples", "expected_wait_s", "penalty_j", "total_energy_j"];

pub fn write_table(table: &Table, settings: &Settings, config: &Value) -> CliResult<()> {
    emit(&table.render(settings.format(), config), settings.out.as_deref())
}

/// Evenly spaced points over `[from, to]`, or log-spaced when `log` is set.
pub fn range(from: f64, to: f64, steps: usize, log: bool) -> CliResult<Vec<f64>> {
    use crate::error::CliError::Usage;
    if steps == 0 {
        return Err(Usage("--steps must be at least 1".into()));
    }
    if !(from.is_finite() && to.is_finite()) {
        return Err(Usage("sweep bounds must be finite".into()));
    }
    if steps == 1 {
        if from != to {
            return Err(Usage("a single-step sweep needs --from equal to --to".into()));
        }
        return Ok(vec![from]);
    }
    if from >= to {
        return Err(Usage(format!("empty sweep range: --from {from} must be below --to {to}")));
    }
    if log && from <= 0.0 {
        return Err(Usage("a log sweep needs a positive --from".into()));
    }
    let last = (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| match (i, log) {
            (0, _) => from,
            (i, _) if i + 1 == steps => to,
            (i, false) => from + (to - from) * i as f64 / last,
            (i, true) => (from.ln() + (to.ln() - from.ln()) * i as f64 / last).exp(),
        })
        .collect())
}
