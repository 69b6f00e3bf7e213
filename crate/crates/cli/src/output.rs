//! Report documents and file writing.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

use srgcert::io::to_json_string;
use srgcert::lti::Spacing;

/// An input file and its content hash.
#[derive(Clone, Debug, Serialize)]
pub struct InputFile {
    pub role: String,
    pub path: String,
    pub sha256: String,
}

impl InputFile {
    pub fn hash(role: &str, path: &Path) -> Result<Self> {
        let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        Ok(Self {
            role: role.into(),
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(&bytes)),
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GridSpec {
    /// `None` for the built-in default band.
    pub f_min_hz: Option<f64>,
    pub f_max_hz: Option<f64>,
    pub points: usize,
    pub spacing: Option<Spacing>,
    pub fundamental_hz: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub inputs: Vec<InputFile>,
    pub grid_spec: GridSpec,
    pub tau_grid: Vec<f64>,
    pub seed: u64,
}

impl Provenance {
    pub fn new(command: &'static str, inputs: Vec<InputFile>, grid_spec: GridSpec, tau_grid: Vec<f64>, seed: u64) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command,
            inputs,
            grid_spec,
            tau_grid,
            seed,
        }
    }
}

/// Top-level JSON document: provenance plus the command's result.
#[derive(Serialize)]
pub struct Document<'a, T: Serialize> {
    pub provenance: &'a Provenance,
    #[serde(flatten)]
    pub body: T,
}

pub struct OutDir(PathBuf);

impl OutDir {
    pub fn create(path: &Path) -> Result<Self> {
        fs::create_dir_all(path).with_context(|| format!("creating output directory {}", path.display()))?;
        Ok(Self(path.to_path_buf()))
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.0.join(name)
    }

    pub fn write(&self, name: &str, contents: &str) -> Result<PathBuf> {
        let p = self.path(name);
        if let Some(dir) = p.parent() {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        }
        fs::write(&p, contents).with_context(|| format!("writing {}", p.display()))?;
        Ok(p)
    }

    pub fn write_json<T: Serialize>(&self, name: &str, value: &T) -> Result<PathBuf> {
        let text = to_json_string(value).with_context(|| format!("serializing {name}"))?;
        self.write(name, &text)
    }
}

/// Short decimal form for console output: at most 10 decimals, trailing zeros trimmed.
pub fn short(x: f64) -> String {
    if !x.is_finite() {
        return srgcert::io::fmt17(x);
    }
    let s = format!("{x:.10}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}
