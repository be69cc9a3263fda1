//! The `coorbit-lab` experiment runner.

mod config;
mod experiments;

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

pub use config::{
    entries, parse_config, parse_config_with_seed, serialize, ConfigError, ExperimentConfig,
    ExperimentKind, FramesConfig, GridConfig, NormConfig, RepConfig, ScanConfig, ScanFamily,
    ALL_KINDS,
};
pub use experiments::{run_experiment, Outcome};

/// Exit codes of the binary.
pub const EXIT_PASS: i32 = 0;
pub const EXIT_TOLERANCE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

/// `{section: {key: value}}` from the canonical form.
pub fn params_json(c: &ExperimentConfig) -> Value {
    let mut out = Map::new();
    for (section, kv) in entries(c) {
        let m: Map<String, Value> = kv
            .into_iter()
            .map(|(k, v)| (k.to_string(), Value::String(v)))
            .collect();
        out.insert(section.to_string(), Value::Object(m));
    }
    Value::Object(out)
}

pub fn summary_json(c: &ExperimentConfig, outcome: &Outcome) -> Value {
    json!({
        "experiment": c.kind.name(),
        "params": params_json(c),
        "metrics": Value::Object(outcome.metrics.clone()),
        "pass": outcome.pass,
    })
}

/// Writes `<kind>.csv` and `<kind>.json` into `dir` and returns both paths.
pub fn write_artifacts(
    c: &ExperimentConfig,
    outcome: &Outcome,
    dir: &Path,
) -> std::io::Result<(PathBuf, PathBuf)> {
    fs::create_dir_all(dir)?;
    let csv = dir.join(format!("{}.csv", c.kind.name()));
    let js = dir.join(format!("{}.json", c.kind.name()));
    fs::write(&csv, outcome.csv())?;
    let mut text =
        serde_json::to_string_pretty(&summary_json(c, outcome)).expect("plain JSON values");
    text.push('\n');
    fs::write(&js, text)?;
    Ok((csv, js))
}
