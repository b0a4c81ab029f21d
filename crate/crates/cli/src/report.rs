//! JSON reports, CSV files and plot scripts.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;

use crate::config::ExperimentConfig;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// One quantitative check: `value` compared against `limit`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub limit: f64,
    /// `"<="` or `">="`.
    pub relation: &'static str,
    pub pass: bool,
}

impl Check {
    pub fn at_most(name: &str, value: f64, limit: f64) -> Self {
        Self {
            name: name.into(),
            value,
            limit,
            relation: "<=",
            pass: value <= limit,
        }
    }

    pub fn at_least(name: &str, value: f64, limit: f64) -> Self {
        Self {
            name: name.into(),
            value,
            limit,
            relation: ">=",
            pass: value >= limit,
        }
    }
}

/// A numerical stage that could not produce its result.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub stage: String,
    pub error: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub artifact: &'static str,
    pub version: &'static str,
    pub subcommand: String,
    pub config: ExperimentConfig,
    pub results: serde_json::Map<String, Value>,
    pub checks: Vec<Check>,
    pub failures: Vec<Failure>,
    pub files: Vec<String>,
    pub pass: bool,
}

impl Report {
    pub fn new(subcommand: &str, config: &ExperimentConfig) -> Self {
        Self {
            artifact: "cwl",
            version: VERSION,
            subcommand: subcommand.into(),
            config: config.clone(),
            results: Default::default(),
            checks: Vec::new(),
            failures: Vec::new(),
            files: Vec::new(),
            pass: true,
        }
    }

    pub fn result<T: Serialize>(&mut self, key: &str, value: &T) {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        self.results.insert(key.into(), v);
    }

    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn fail(&mut self, stage: &str, error: impl std::fmt::Display) {
        self.failures.push(Failure {
            stage: stage.into(),
            error: error.to_string(),
        });
    }

    /// Runs `f`, turning an error into a failure entry.
    pub fn stage<T>(&mut self, stage: &str, f: impl FnOnce() -> cwl_core::Result<T>) -> Option<T> {
        match f() {
            Ok(v) => Some(v),
            Err(e) => {
                self.fail(stage, e);
                None
            }
        }
    }

    pub fn finish(&mut self) -> bool {
        self.pass = self.failures.is_empty() && self.checks.iter().all(|c| c.pass);
        self.pass
    }
}

/// Output directory of one subcommand.
pub struct Artifacts {
    pub dir: PathBuf,
    pub written: Vec<String>,
}

impl Artifacts {
    pub fn new(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn write(&mut self, name: &str, body: impl FnOnce(&mut dyn Write) -> std::io::Result<()>) -> Result<()> {
        let path = self.dir.join(name);
        let file = fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        let mut out = BufWriter::new(file);
        body(&mut out).with_context(|| format!("writing {}", path.display()))?;
        out.flush()?;
        self.written.push(name.to_string());
        Ok(())
    }

    /// Gnuplot script drawing `columns` of `csv` against column `x`.
    pub fn plot(
        &mut self,
        name: &str,
        csv: &str,
        title: &str,
        x: usize,
        columns: &[(usize, &str)],
        log: Log,
    ) -> Result<()> {
        let png = name.trim_end_matches(".gp").to_string() + ".png";
        let scale = match log {
            Log::None => "",
            Log::Y => "set logscale y\n",
            Log::XY => "set logscale xy\n",
        };
        let series: Vec<String> = columns
            .iter()
            .map(|(c, label)| format!("'{csv}' using {x}:{c} with linespoints title '{label}'"))
            .collect();
        let text = format!(
            "set datafile separator ','\nset key autotitle columnhead\nset terminal pngcairo size 900,600\nset output '{png}'\nset title '{title}'\n{scale}plot {}\n",
            series.join(", \\\n     ")
        );
        self.write(name, |out| out.write_all(text.as_bytes()))
    }

    pub fn write_report(&mut self, report: &mut Report) -> Result<()> {
        report.finish();
        self.written.push("report.json".into());
        report.files = self.written.clone();
        let text = serde_json::to_string_pretty(report)? + "\n";
        let path = self.dir.join("report.json");
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
pub enum Log {
    None,
    Y,
    XY,
}
