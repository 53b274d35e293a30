use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use super::config::RunConfig;
use crate::error::Result;

/// Scientific notation with 17 significant digits.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes a comma-separated file with a header line.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut text = header.join(",");
    text.push('\n');
    for row in rows {
        let _ = writeln!(text, "{}", row.join(","));
    }
    std::fs::write(path, text)?;
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct Metadata<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'a str,
    pub status: &'a str,
    pub seed: u64,
    pub mode: &'static str,
    pub delta: f64,
    pub quad_tol: f64,
    pub ode_rtol: f64,
    pub ode_atol: f64,
    pub files: Vec<String>,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

/// Result files of one command, all under one directory.
#[derive(Debug)]
pub struct OutputDir {
    root: PathBuf,
    written: Vec<String>,
}

impl OutputDir {
    pub fn create(root: &Path) -> Result<Self> {
        std::fs::create_dir_all(root)?;
        Ok(Self {
            root: root.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    pub fn csv(&mut self, name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
        write_csv(&self.path(name), header, rows)?;
        self.written.push(name.to_string());
        Ok(())
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        std::fs::write(self.path(name), serde_json::to_string_pretty(value)? + "\n")?;
        self.written.push(name.to_string());
        Ok(())
    }

    pub fn files(&self) -> &[String] {
        &self.written
    }

    /// `metadata.json`, the only file carrying a timestamp.
    pub fn finish(self, cfg: &RunConfig, command: &str, status: &str) -> Result<Vec<String>> {
        let timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        let meta = Metadata {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command,
            status,
            seed: cfg.seed,
            mode: cfg.mode.name(),
            delta: cfg.effective_delta(),
            quad_tol: cfg.quad_tol,
            ode_rtol: cfg.ode_rtol,
            ode_atol: cfg.ode_atol,
            files: self.written.clone(),
            timestamp,
        };
        std::fs::write(self.path("metadata.json"), serde_json::to_string_pretty(&meta)? + "\n")?;
        Ok(self.written)
    }
}
