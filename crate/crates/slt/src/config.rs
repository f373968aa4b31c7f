//! Experiment configuration and its `key = value` file form.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("bad value for `{key}`: `{value}`")]
    BadValue { key: String, value: String },
    #[error("bad overhead grid `{0}`")]
    BadGrid(String),
    #[error("invalid configuration: {0}")]
    Invalid(&'static str),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Mode {
    #[default]
    Montecarlo,
    Ga,
    Bounds,
    All,
}

impl Mode {
    pub fn runs_montecarlo(self) -> bool {
        matches!(self, Mode::Montecarlo | Mode::All)
    }

    pub fn runs_ga(self) -> bool {
        matches!(self, Mode::Ga | Mode::All)
    }

    pub fn runs_bounds(self) -> bool {
        matches!(self, Mode::Bounds | Mode::All)
    }
}

impl FromStr for Mode {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s.to_ascii_lowercase().as_str() {
            "montecarlo" | "mc" => Ok(Mode::Montecarlo),
            "ga" => Ok(Mode::Ga),
            "bounds" => Ok(Mode::Bounds),
            "all" => Ok(Mode::All),
            _ => Err(()),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Montecarlo => "montecarlo",
            Mode::Ga => "ga",
            Mode::Bounds => "bounds",
            Mode::All => "all",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub k: usize,
    pub epsilons: Vec<f64>,
    pub sigma2: f64,
    /// Preset name or distribution file path.
    pub distribution: String,
    /// Maximum codewords per point.
    pub trials: usize,
    pub max_bp_iters: usize,
    pub master_seed: u64,
    /// A point stops early once this many source-bit errors are seen.
    pub min_error_events: u64,
    pub mode: Mode,
    /// Send uniformly random source words instead of the all-zero word.
    pub random_codeword: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            k: 1000,
            epsilons: vec![0.0, 0.5, 1.0, 1.5, 2.0],
            sigma2: 1.0,
            distribution: "omega3".into(),
            trials: 100,
            max_bp_iters: slt_core::codec::DEFAULT_MAX_ITERS,
            master_seed: 0,
            min_error_events: 100,
            mode: Mode::Montecarlo,
            random_codeword: false,
        }
    }
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T, ConfigError> {
    value.parse().map_err(|_| ConfigError::BadValue {
        key: key.into(),
        value: value.into(),
    })
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.k < 1 {
            return Err(ConfigError::Invalid("k must be at least 1"));
        }
        if self.trials < 1 {
            return Err(ConfigError::Invalid("trials must be at least 1"));
        }
        if self.epsilons.is_empty() {
            return Err(ConfigError::Invalid("overhead grid is empty"));
        }
        if self.epsilons.iter().any(|e| !(*e >= 0.0) || !e.is_finite()) {
            return Err(ConfigError::Invalid(
                "overheads must be finite and non-negative",
            ));
        }
        if !(self.sigma2 > 0.0) || !self.sigma2.is_finite() {
            return Err(ConfigError::Invalid("sigma2 must be positive"));
        }
        Ok(())
    }

    /// Sets one field from its textual form. Keys match the field names;
    /// `seed` is accepted for `master_seed`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        match key {
            "k" => self.k = parse_value(key, value)?,
            "epsilons" | "epsilon" => self.epsilons = parse_grid(value)?,
            "sigma2" => self.sigma2 = parse_value(key, value)?,
            "distribution" => self.distribution = value.into(),
            "trials" => self.trials = parse_value(key, value)?,
            "max_bp_iters" => self.max_bp_iters = parse_value(key, value)?,
            "master_seed" | "seed" => self.master_seed = parse_value(key, value)?,
            "min_error_events" => self.min_error_events = parse_value(key, value)?,
            "mode" => self.mode = parse_value(key, value)?,
            "random_codeword" => self.random_codeword = parse_value(key, value)?,
            other => return Err(ConfigError::UnknownKey(other.into())),
        }
        Ok(())
    }

    /// Applies every `key = value` line of `text`; `#` starts a comment.
    pub fn apply_kv(&mut self, text: &str) -> Result<(), ConfigError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line: i + 1,
                msg: "expected `key = value`".into(),
            })?;
            self.set(key.trim(), value.trim())?;
        }
        Ok(())
    }

    pub fn from_kv_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let mut cfg = Self::default();
        cfg.apply_kv(&text)?;
        Ok(cfg)
    }
}

/// Parses `a,b,c` or an inclusive range `start:step:stop`.
pub fn parse_grid(text: &str) -> Result<Vec<f64>, ConfigError> {
    let bad = || ConfigError::BadGrid(text.into());
    let text = text.trim();
    if text.contains(':') {
        let parts: Vec<f64> = text
            .split(':')
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad())?;
        let [start, step, stop] = parts[..] else {
            return Err(bad());
        };
        if !(step > 0.0) || !(stop >= start) || !step.is_finite() || !stop.is_finite() {
            return Err(bad());
        }
        // Index-based so no error accumulates; snapping to 12 significant
        // digits turns 0.30000000000000004 back into 0.3.
        let count = ((stop - start) / step + 1e-9).floor() as usize;
        return Ok((0..=count).map(|i| snap(start + i as f64 * step)).collect());
    }
    text.split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect()
}

fn snap(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let scale = 10f64.powi(11 - x.abs().log10().floor() as i32);
    (x * scale).round() / scale
}
