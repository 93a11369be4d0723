use std::fs;
use std::path::{Path, PathBuf};

use chrono::{DateTime, SecondsFormat, Utc};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::exit::Failure;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    pub role: String,
    pub path: String,
    pub sha256: String,
}

/// Everything needed to reproduce a report. Only `timestamp` differs
/// between a run and its rerun.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub config: Value,
    pub inputs: Vec<InputDigest>,
    pub tool_version: String,
    pub master_seed: Option<u64>,
    pub timestamp: String,
}

impl RunManifest {
    pub fn new(subcommand: &str, config: Value, inputs: Vec<InputDigest>, master_seed: Option<u64>) -> Self {
        RunManifest {
            subcommand: subcommand.into(),
            config,
            inputs,
            tool_version: env!("CARGO_PKG_VERSION").into(),
            master_seed,
            timestamp: timestamp(),
        }
    }
}

/// `SOURCE_DATE_EPOCH` pins the timestamp for reproducible output.
fn timestamp() -> String {
    let pinned = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse::<i64>().ok())
        .and_then(|secs| DateTime::<Utc>::from_timestamp(secs, 0));
    pinned
        .unwrap_or_else(Utc::now)
        .to_rfc3339_opts(SecondsFormat::Secs, true)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Envelope<R> {
    pub manifest: RunManifest,
    pub report: R,
}

/// Reads a file and records its digest.
pub fn read_input(role: &str, path: &Path) -> Result<(String, InputDigest), Failure> {
    let bytes = fs::read(path).map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    let digest = InputDigest {
        role: role.into(),
        path: path.display().to_string(),
        sha256: hex::encode(Sha256::digest(&bytes)),
    };
    let text = String::from_utf8(bytes)
        .map_err(|_| Failure::usage(format!("{} is not valid UTF-8", path.display())))?;
    Ok((text, digest))
}

/// The manifest of a previous report, checked to belong to `subcommand`.
pub fn load_manifest(path: &Path, subcommand: &str) -> Result<RunManifest, Failure> {
    let (text, _) = read_input("manifest", path)?;
    let envelope: Envelope<Value> = serde_json::from_str(&text)
        .map_err(|e| Failure::usage(format!("{}: not a domcon report: {e}", path.display())))?;
    let m = envelope.manifest;
    if m.subcommand != subcommand {
        return Err(Failure::usage(format!(
            "{}: manifest is for `{}`, not `{subcommand}`",
            path.display(),
            m.subcommand
        )));
    }
    Ok(m)
}

/// Emits the JSON envelope and the CSV table, either to `out` or to stdout
/// in the requested format.
pub fn emit<R: Serialize>(
    envelope: &Envelope<R>,
    csv: &str,
    out: Option<&PathBuf>,
    format: crate::args::Format,
) -> Result<(), Failure> {
    let mut json = serde_json::to_string_pretty(envelope)
        .map_err(|e| Failure::usage(format!("cannot serialize report: {e}")))?;
    json.push('\n');
    match out {
        Some(dir) => {
            let io = |e: std::io::Error| Failure::usage(format!("cannot write to {}: {e}", dir.display()));
            fs::create_dir_all(dir).map_err(io)?;
            let name = &envelope.manifest.subcommand;
            let json_path = dir.join(format!("{name}.json"));
            let csv_path = dir.join(format!("{name}.csv"));
            fs::write(&json_path, json).map_err(io)?;
            fs::write(&csv_path, csv).map_err(io)?;
            eprintln!("domcon: wrote {} and {}", json_path.display(), csv_path.display());
        }
        None => match format {
            crate::args::Format::Json => print!("{json}"),
            crate::args::Format::Csv => print!("{csv}"),
        },
    }
    Ok(())
}
