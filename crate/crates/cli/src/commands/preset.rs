//! `preset dump`: a preset as a flat config file.

use serde_json::{json, Map, Value};

use optsample_core::presets::ScenarioPreset;
use optsample_core::TteDistribution;

use crate::error::{CliError, CliResult};
use crate::output::emit;
use crate::settings::PresetName;

/// Flat settings that reproduce `preset` without naming it.
pub fn flat(preset: &ScenarioPreset) -> CliResult<Value> {
    let mut m = Map::new();
    match &preset.dist {
        TteDistribution::Exponential { rate } => {
            m.insert("dist".into(), json!("exponential"));
            m.insert("rate".into(), json!(rate));
        }
        TteDistribution::Rayleigh { sigma, location } => {
            m.insert("dist".into(), json!("rayleigh"));
            m.insert("sigma".into(), json!(sigma));
            m.insert("location".into(), json!(location));
        }
        TteDistribution::Tabulated(_) => {
            return Err(CliError::Usage("tabulated presets cannot be dumped".into()));
        }
    }
    let d = preset.device;
    let cfg = preset.solver_config();
    for (k, v) in [
        ("p-idle", d.p_idle),
        ("p-comm", d.p_comm),
        ("tau-comm", d.tau_comm),
        ("tau-proc", d.tau_proc),
        ("t-min", preset.t_min),
        ("baseline-ts", preset.baseline.ts),
        ("grid-res", cfg.grid_resolution),
        ("xi", cfg.xi),
    ] {
        m.insert(k.into(), json!(v));
    }
    m.insert("n-max".into(), json!(cfg.n_max));
    Ok(Value::Object(m))
}

pub fn dump(name: PresetName, out: Option<&std::path::Path>) -> CliResult<()> {
    let preset = ScenarioPreset::by_name(name.as_str())?;
    let mut text = serde_json::to_string_pretty(&flat(&preset)?).expect("json values serialise");
    text.push('\n');
    emit(&text, out)
}
