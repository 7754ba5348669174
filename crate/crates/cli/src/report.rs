use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};
use unavoidable::complex::scx::parse_scx;
use unavoidable::SimplicialComplex;

use crate::CliError;

pub const SCHEMA: &str = include_str!("../schemas/report.schema.json");

#[derive(Clone, Debug, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Vec<InputDigest>,
    pub results: Value,
    pub timings: BTreeMap<String, f64>,
    pub version: String,
}

/// Inputs read so far and wall-clock time per phase.
#[derive(Default)]
pub struct Context {
    pub inputs: Vec<InputDigest>,
    pub timings: BTreeMap<String, f64>,
}

impl Context {
    pub fn timed<T>(&mut self, phase: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        *self.timings.entry(phase.to_string()).or_insert(0.0) +=
            start.elapsed().as_secs_f64() * 1000.0;
        out
    }

    pub fn read(&mut self, path: &Path) -> Result<String, CliError> {
        let bytes =
            std::fs::read(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        let mut digest = String::with_capacity(64);
        for b in Sha256::digest(&bytes) {
            write!(digest, "{b:02x}").unwrap();
        }
        self.inputs.push(InputDigest {
            path: path.display().to_string(),
            sha256: digest,
        });
        String::from_utf8(bytes)
            .map_err(|_| CliError::Input(format!("{}: not UTF-8", path.display())))
    }

    pub fn load_complex(&mut self, path: &Path) -> Result<SimplicialComplex, CliError> {
        let text = self.read(path)?;
        self.timed("load", || parse_scx(&text))
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
    }

    pub fn into_report(self, command: &str, results: Value) -> Report {
        Report {
            command: command.to_string(),
            inputs: self.inputs,
            results,
            timings: self
                .timings
                .into_iter()
                .map(|(k, ms)| (k, (ms * 1000.0).round() / 1000.0))
                .collect(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}
