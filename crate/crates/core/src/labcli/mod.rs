//! Config-driven scenario runner and its file formats. The only module that
//! touches the filesystem.
//!
//! A run reads one JSON config, executes a preset and leaves in the output
//! directory: CSV tables (17 significant digits), schema-versioned JSON
//! reports, binary snapshots, `manifest.json` and `timing.json`. The manifest
//! is written for every run, including ones that fail validation or abort.
//! Exit codes: 0 pass, 1 I/O, 2 check failure, 3 schema violation,
//! 4 runtime guard.

mod config;
mod manifest;
pub mod output;
mod presets;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Deserialize;

pub use config::{
    preset_summary, DataConfig, DiagnosticsConfig, Flow, GridConfig, RunConfig, SchemaError, StepperConfig,
    SweepConfig, PRESETS,
};
pub use manifest::{Abort, Check, Expectation, Observed, RunManifest, RunStatus};
pub use presets::RunError;

use crate::diagnostics::classify_growth;
use output::{write_json, CsvTable, SCHEMA_VERSION};
use presets::{run_preset, Context};

pub const MANIFEST_FILE: &str = "manifest.json";
pub const TIMING_FILE: &str = "timing.json";

#[derive(Debug)]
pub struct RunOutcome {
    pub status: RunStatus,
    pub manifest: RunManifest,
    /// Where the manifest went; `None` if even that could not be written.
    pub output_dir: Option<PathBuf>,
}

/// Runs the scenario described by the config file at `path`.
pub fn run_config_file(path: &Path) -> RunOutcome {
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let text = fs::read_to_string(path);
    let raw: Option<serde_json::Value> = text.as_ref().ok().and_then(|t| serde_json::from_str(t).ok());
    // Output directory for the manifest even when the config is invalid.
    let out = raw
        .as_ref()
        .and_then(|v| v.get("output_dir"))
        .and_then(|v| v.as_str())
        .map(|d| base.join(d))
        .unwrap_or_else(|| base.clone());
    let echo = match (&raw, &text) {
        (Some(v), _) => v.clone(),
        (None, Ok(t)) => serde_json::Value::String(t.clone()),
        (None, Err(e)) => serde_json::Value::String(format!("unreadable: {e}")),
    };
    let mut manifest = RunManifest::new(echo);
    let start = Instant::now();

    let result = match &text {
        Err(e) => Err(RunError::Schema(format!("cannot read config: {e}"))),
        Ok(t) => match RunConfig::from_json(t) {
            Err(e) => Err(RunError::Schema(e.0)),
            Ok(cfg) => fs::create_dir_all(&out).map_err(RunError::Io).and_then(|_| {
                let mut ctx = Context {
                    config: &cfg,
                    base: base.clone(),
                    out: out.clone(),
                    manifest: &mut manifest,
                };
                run_preset(&mut ctx)
            }),
        },
    };
    finish(manifest, result, &out, start)
}

fn finish(mut manifest: RunManifest, result: Result<(), RunError>, out: &Path, start: Instant) -> RunOutcome {
    manifest.status = match result {
        Ok(()) => manifest.check_status(),
        Err(RunError::Schema(msg)) => {
            manifest.error = Some(msg);
            RunStatus::Schema
        }
        Err(RunError::Guard(abort)) => {
            manifest.error = Some(format!("run aborted at t = {}: {}", abort.last_valid_time, abort.guard));
            manifest.abort = Some(abort);
            RunStatus::RuntimeGuard
        }
        Err(RunError::Failed(msg)) => {
            manifest.error = Some(msg);
            RunStatus::CheckFailure
        }
        Err(RunError::Io(e)) => {
            manifest.error = Some(format!("i/o: {e}"));
            RunStatus::Io
        }
    };
    let elapsed = start.elapsed().as_secs_f64();
    let written = fs::create_dir_all(out)
        .and_then(|_| write_json(&out.join(MANIFEST_FILE), "run-manifest", &manifest))
        .and_then(|_| {
            write_json(
                &out.join(TIMING_FILE),
                "timing",
                &serde_json::json!({ "wall_clock_seconds": elapsed }),
            )
        });
    let status = match written {
        Ok(()) => manifest.status,
        Err(_) => RunStatus::Io,
    };
    RunOutcome {
        status,
        manifest,
        output_dir: written.ok().map(|_| out.to_path_buf()),
    }
}

#[derive(Debug, Deserialize)]
struct StoredManifest {
    schema_version: u32,
    kind: String,
    data: RunManifest,
}

/// Outcome of re-checking a stored manifest.
#[derive(Debug, Clone, PartialEq)]
pub struct Verification {
    pub status: RunStatus,
    /// Checks whose stored verdict disagrees with the re-derived one.
    pub inconsistent: Vec<String>,
    pub failed: Vec<String>,
}

/// Re-derives every check from its stored observation. When a growth table
/// sits next to the manifest its verdict column is recomputed from the norms.
pub fn verify_report(path: &Path) -> Result<Verification, SchemaError> {
    let text = fs::read_to_string(path).map_err(|e| SchemaError(format!("{}: {e}", path.display())))?;
    let stored: StoredManifest = serde_json::from_str(&text).map_err(|e| SchemaError(e.to_string()))?;
    if stored.schema_version != SCHEMA_VERSION || stored.kind != "run-manifest" {
        return Err(SchemaError(format!(
            "expected run-manifest schema {SCHEMA_VERSION}, found {} {}",
            stored.kind, stored.schema_version
        )));
    }
    let m = stored.data;
    let mut inconsistent = Vec::new();
    let mut failed = Vec::new();
    for c in &m.checks {
        let holds = c.expected.holds(&c.observed);
        if holds != c.passed {
            inconsistent.push(c.name.clone());
        }
        if !holds {
            failed.push(c.name.clone());
        }
    }
    let dir = path.parent().unwrap_or(Path::new("."));
    if m.files.iter().any(|f| f == "growth.csv") {
        inconsistent.extend(recheck_growth(&dir.join("growth.csv"))?);
    }
    let status = if !inconsistent.is_empty() || !failed.is_empty() {
        RunStatus::CheckFailure
    } else if m.status != RunStatus::Pass {
        m.status
    } else {
        RunStatus::Pass
    };
    Ok(Verification {
        status,
        inconsistent,
        failed,
    })
}

/// Rows of a growth table whose verdict does not follow from its norms.
fn recheck_growth(path: &Path) -> Result<Vec<String>, SchemaError> {
    let bad = |e: String| SchemaError(format!("{}: {e}", path.display()));
    let table = CsvTable::read(path).map_err(|e| bad(e.to_string()))?;
    let col = |name: &str| table.column(name).ok_or_else(|| bad(format!("missing column {name}")));
    let (ct, cr, cn, cv) = (col("t")?, col("r")?, col("norm")?, col("verdict")?);
    let num = |s: &str| s.parse::<f64>().map_err(|e| bad(e.to_string()));
    // Rows arrive grouped by (t, r) in order of increasing radius.
    let mut groups: Vec<((String, String), Vec<f64>, Vec<String>)> = Vec::new();
    for row in &table.rows {
        let key = (row[ct].clone(), row[cr].clone());
        match groups.last_mut() {
            Some((k, norms, verdicts)) if *k == key => {
                norms.push(num(&row[cn])?);
                verdicts.push(row[cv].clone());
            }
            _ => groups.push((key, vec![num(&row[cn])?], vec![row[cv].clone()])),
        }
    }
    Ok(groups
        .into_iter()
        .filter(|(_, norms, verdicts)| {
            let v = classify_growth(norms).as_str();
            verdicts.iter().any(|s| s != v)
        })
        .map(|((t, r), _, _)| format!("growth verdict t={t} r={r}"))
        .collect())
}
