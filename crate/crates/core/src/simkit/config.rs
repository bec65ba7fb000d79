//! Sweep configuration: file format, CLI overrides and validation.
//!
//! A config file is flat TOML:
//!
//! ```toml
//! scheme = "scpnc"
//! code = "15,5"
//! snr_db = "0:14:2"        # or an explicit list: [0.0, 4.0, 8.0]
//! min_trials = 10000
//! max_trials = 1000000
//! target_relative_ci = 0.05
//! seed = 1
//! out = "scpnc.csv"
//! format = "csv"
//! workers = 4
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::block_code::supported_codes;
use crate::error::{Error, Result};
use crate::schemes::SchemeKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::InvalidConfig(format!(
                "unknown output format {other:?}"
            ))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        })
    }
}

/// `(n, k)` of the binning code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CodeSelector {
    pub n: usize,
    pub k: usize,
}

impl FromStr for CodeSelector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidConfig(format!("code must look like \"15,5\", got {s:?}"));
        let (n, k) = s
            .trim()
            .trim_matches(|c| c == '(' || c == ')')
            .split_once(',')
            .ok_or_else(bad)?;
        Ok(Self {
            n: n.trim().parse().map_err(|_| bad())?,
            k: k.trim().parse().map_err(|_| bad())?,
        })
    }
}

impl fmt::Display for CodeSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.n, self.k)
    }
}

/// Parses `start:stop:step` (inclusive of `stop`) or a comma-separated list.
pub fn parse_snr_grid(s: &str) -> Result<Vec<f64>> {
    let bad = |why: &str| Error::InvalidConfig(format!("bad SNR grid {s:?}: {why}"));
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad("not a number"));
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [start, stop, step] => {
            let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
            if step.is_nan()
                || step <= 0.0
                || !start.is_finite()
                || !stop.is_finite()
                || stop < start
            {
                return Err(bad("need start <= stop and step > 0"));
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
            Ok((0..count).map(|i| start + i as f64 * step).collect())
        }
        [_] => s.split(',').map(num).collect(),
        _ => Err(bad("expected start:stop:step")),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub scheme: SchemeKind,
    pub code: CodeSelector,
    pub snr_db_grid: Vec<f64>,
    pub min_trials: u64,
    pub max_trials: u64,
    /// Stop a point once the 95% CI half-width is at most this fraction of the estimate.
    pub target_relative_ci: f64,
    pub master_seed: u64,
    /// `None` writes to standard output.
    pub output_path: Option<PathBuf>,
    pub output_format: OutputFormat,
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            scheme: SchemeKind::Scpnc,
            code: CodeSelector { n: 15, k: 5 },
            snr_db_grid: (0..=14).map(f64::from).collect(),
            min_trials: 10_000,
            max_trials: 1_000_000,
            target_relative_ci: 0.05,
            master_seed: 1,
            output_path: None,
            output_format: OutputFormat::Csv,
            workers: None,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::InvalidConfig(m));
        if !supported_codes().any(|(n, k)| n == self.code.n && k == self.code.k) {
            return Err(Error::UnsupportedCode {
                n: self.code.n,
                k: self.code.k,
            });
        }
        if self.snr_db_grid.is_empty() {
            return fail("SNR grid is empty".into());
        }
        if self.snr_db_grid.iter().any(|v| !v.is_finite()) {
            return fail("SNR grid has non-finite values".into());
        }
        if self.snr_db_grid.windows(2).any(|w| w[1] <= w[0]) {
            return fail("SNR grid must be strictly increasing".into());
        }
        if self.min_trials == 0 || self.min_trials > self.max_trials {
            return fail(format!(
                "need 0 < min_trials <= max_trials, got {} and {}",
                self.min_trials, self.max_trials
            ));
        }
        if !(self.target_relative_ci > 0.0 && self.target_relative_ci < 1.0) {
            return fail(format!(
                "target_relative_ci must lie in (0, 1), got {}",
                self.target_relative_ci
            ));
        }
        if self.workers == Some(0) {
            return fail("workers must be positive".into());
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum CodeField {
    Text(String),
    Pair([usize; 2]),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum GridField {
    Text(String),
    List(Vec<f64>),
}

/// Partial configuration: every field optional, later layers win.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverrides {
    pub scheme: Option<String>,
    code: Option<CodeField>,
    snr_db: Option<GridField>,
    pub min_trials: Option<u64>,
    pub max_trials: Option<u64>,
    pub target_relative_ci: Option<f64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
    pub workers: Option<usize>,
}

impl ConfigOverrides {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml_str(&text).map_err(|e| match e {
            Error::InvalidConfig(m) => Error::InvalidConfig(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn set_code(&mut self, code: &str) {
        self.code = Some(CodeField::Text(code.to_string()));
    }

    pub fn set_snr_db(&mut self, grid: &str) {
        self.snr_db = Some(GridField::Text(grid.to_string()));
    }

    /// Applies every field set here on top of `base`.
    pub fn apply(&self, mut base: SweepConfig) -> Result<SweepConfig> {
        if let Some(s) = &self.scheme {
            base.scheme = s.parse()?;
        }
        match &self.code {
            Some(CodeField::Text(s)) => base.code = s.parse()?,
            Some(CodeField::Pair([n, k])) => base.code = CodeSelector { n: *n, k: *k },
            None => {}
        }
        match &self.snr_db {
            Some(GridField::Text(s)) => base.snr_db_grid = parse_snr_grid(s)?,
            Some(GridField::List(v)) => base.snr_db_grid = v.clone(),
            None => {}
        }
        if let Some(v) = self.min_trials {
            base.min_trials = v;
        }
        if let Some(v) = self.max_trials {
            base.max_trials = v;
        }
        if let Some(v) = self.target_relative_ci {
            base.target_relative_ci = v;
        }
        if let Some(v) = self.seed {
            base.master_seed = v;
        }
        if let Some(v) = &self.out {
            base.output_path = Some(v.clone());
        }
        if let Some(v) = &self.format {
            base.output_format = v.parse()?;
        }
        if let Some(v) = self.workers {
            base.workers = Some(v);
        }
        Ok(base)
    }

    /// Layers `self` over `file` (if any) over the defaults, then validates.
    pub fn resolve(&self, file: Option<&ConfigOverrides>) -> Result<SweepConfig> {
        let mut config = SweepConfig::default();
        if let Some(file) = file {
            config = file.apply(config)?;
        }
        let config = self.apply(config)?;
        config.validate()?;
        Ok(config)
    }
}
