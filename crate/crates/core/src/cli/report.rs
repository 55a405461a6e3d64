//! Run reports: JSON summary, CSV traces and deterministic hashes.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use super::ExperimentConfig;
use crate::error::{Error, Result};
use crate::CONVENTION;

/// A CSV trace with a fixed file name.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    #[serde(skip)]
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Table { name: name.to_string(), header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    fn render(&self, config_hash: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# {CONVENTION}");
        let _ = writeln!(s, "# config_hash={config_hash}");
        let _ = writeln!(s, "{}", self.header.join(","));
        for r in &self.rows {
            let _ = writeln!(s, "{}", r.join(","));
        }
        s
    }
}

/// Shortest round-trip float text; identical inputs give identical bytes.
pub fn num(v: f64) -> String {
    format!("{v:e}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    ConfigError,
    NonConvergence,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::ConfigError => 1,
            Status::NonConvergence => 2,
        }
    }

    pub fn of(e: &Error) -> Self {
        match e {
            Error::NonConvergence { .. } => Status::NonConvergence,
            _ => Status::ConfigError,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub convention: &'static str,
    pub command: String,
    pub config: ExperimentConfig,
    pub config_hash: String,
    pub outputs: Map<String, Value>,
    pub tables: Vec<Table>,
    pub status: Status,
    pub error: Option<String>,
    /// SHA-256 over `outputs` and every table body.
    pub run_hash: String,
    /// Kept out of `report.json` so repeated runs stay byte-identical.
    #[serde(skip)]
    pub wall_time_s: f64,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn config_hash(cfg: &ExperimentConfig) -> String {
    // serde_json maps are sorted, so this is canonical
    let v = serde_json::to_value(cfg).expect("config serializes");
    sha256_hex(v.to_string().as_bytes())
}

impl RunReport {
    pub fn new(command: &str, config: &ExperimentConfig) -> Self {
        RunReport {
            convention: CONVENTION,
            command: command.to_string(),
            config: config.clone(),
            config_hash: config_hash(config),
            outputs: Map::new(),
            tables: Vec::new(),
            status: Status::Ok,
            error: None,
            run_hash: String::new(),
            wall_time_s: 0.0,
        }
    }

    pub fn insert(&mut self, key: &str, v: impl Serialize) -> Result<()> {
        self.outputs.insert(key.to_string(), serde_json::to_value(v)?);
        Ok(())
    }

    pub fn fail(&mut self, e: &Error) {
        self.status = Status::of(e);
        self.error = Some(e.to_string());
    }

    pub fn seal(&mut self) {
        let mut h = Sha256::new();
        h.update(Value::Object(self.outputs.clone()).to_string().as_bytes());
        for t in &self.tables {
            h.update(t.name.as_bytes());
            h.update(t.render("").as_bytes());
        }
        self.run_hash = hex::encode(h.finalize());
    }
}

/// Refuse a non-empty output directory unless `force`.
pub fn prepare_dir(dir: &Path, force: bool) -> Result<()> {
    if dir.exists() {
        let busy = std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))?.next().is_some();
        if busy && !force {
            return Err(Error::Config {
                path: "--out".into(),
                msg: format!("{} exists and is not empty; pass --force to overwrite", dir.display()),
            });
        }
    }
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// Write `report.json`, one CSV per table and `timing.json`; returns the paths.
pub fn emit_report(report: &RunReport, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();
    let path = dir.join("report.json");
    let mut text = serde_json::to_string_pretty(report)?;
    text.push('\n');
    std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
    written.push(path);
    for t in &report.tables {
        let path = dir.join(&t.name);
        std::fs::write(&path, t.render(&report.config_hash)).map_err(|e| Error::io(&path, e))?;
        written.push(path);
    }
    let path = dir.join("timing.json");
    let timing = serde_json::json!({ "config_hash": report.config_hash, "wall_time_s": report.wall_time_s });
    std::fs::write(&path, format!("{timing}\n")).map_err(|e| Error::io(&path, e))?;
    written.push(path);
    Ok(written)
}
