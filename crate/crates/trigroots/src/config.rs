//! TOML run configuration.
//!
//! A config file has one table per subcommand; every key is optional and
//! falls back to the built-in default:
//!
//! ```toml
//! [converge]
//! family = "rademacher"
//! n_values = [100, 200, 400]
//! trials = 4000
//!
//! [gaussian]
//! u = 1.0
//! rho_list = [0.99, 0.999]
//! ```
//!
//! Command-line flags override the file.

use std::f64::consts::PI;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use trigroots_core::roots::{DEFAULT_OVERSAMPLE, MIN_OVERSAMPLE};
use trigroots_core::CoefficientFamily;

use crate::experiments::family_serde;
use crate::{Error, Result, THREADS_ENV};

/// Parsed config file.
#[derive(Debug, Clone, Default)]
pub struct ConfigFile {
    table: toml::Table,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let table = text
            .parse::<toml::Table>()
            .map_err(|e| Error::Config(format!("config file: {e}")))?;
        Ok(Self { table })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    /// The `[name]` table as `T`; a missing table gives `T::default()`.
    pub fn section<T: DeserializeOwned + Default>(&self, name: &str) -> Result<T> {
        match self.table.get(name) {
            None => Ok(T::default()),
            Some(toml::Value::Table(t)) => t
                .clone()
                .try_into()
                .map_err(|e| Error::Config(format!("[{name}]: {e}"))),
            Some(_) => Err(Error::Config(format!("`{name}` must be a table"))),
        }
    }
}

/// Renders a resolved config as a `[name]` TOML table.
pub fn echo<T: Serialize>(name: &str, config: &T) -> Result<String> {
    let mut doc = toml::Table::new();
    let value = toml::Value::try_from(config).map_err(|e| Error::Config(e.to_string()))?;
    doc.insert(name.to_string(), value);
    toml::to_string(&doc).map_err(|e| Error::Config(e.to_string()))
}

/// Thread count from the environment, which takes precedence over flags.
pub fn threads_from_env() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::Config(format!("{THREADS_ENV}={v:?} is not a thread count"))),
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(Error::Config(format!("{THREADS_ENV}: {e}"))),
    }
}

/// A single seeded sample and its roots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CountConfig {
    #[serde(with = "family_serde")]
    pub family: CoefficientFamily,
    pub n: usize,
    pub u: f64,
    pub a: f64,
    pub b: f64,
    pub seed: u64,
    pub oversample: usize,
}

impl Default for CountConfig {
    fn default() -> Self {
        Self {
            family: CoefficientFamily::Gaussian,
            n: 10,
            u: 0.0,
            a: 0.0,
            b: 2.0 * PI,
            seed: 1,
            oversample: DEFAULT_OVERSAMPLE,
        }
    }
}

impl CountConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Config("n must be at least 1".into()));
        }
        if !self.u.is_finite() {
            return Err(Error::Config("u must be finite".into()));
        }
        if !(self.a.is_finite() && self.b.is_finite() && self.a < self.b) {
            return Err(Error::Config(format!("need a < b, got a = {}, b = {}", self.a, self.b)));
        }
        if self.oversample < MIN_OVERSAMPLE {
            return Err(Error::Config(format!("oversample must be at least {MIN_OVERSAMPLE}")));
        }
        Ok(())
    }
}

/// Gaussian comparison-process tables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GaussianConfig {
    pub u: f64,
    pub delta_list: Vec<f64>,
    pub rho_list: Vec<f64>,
}

impl Default for GaussianConfig {
    fn default() -> Self {
        Self {
            u: 0.0,
            delta_list: vec![0.01, 0.05, 0.1, 0.5],
            rho_list: Vec::new(),
        }
    }
}

impl GaussianConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.u.is_finite() {
            return Err(Error::Config("u must be finite".into()));
        }
        if let Some(d) = self.delta_list.iter().find(|d| !(**d > 0.0 && d.is_finite())) {
            return Err(Error::Config(format!("delta {d} must be positive and finite")));
        }
        if let Some(r) = self.rho_list.iter().find(|r| !(r.abs() < 1.0)) {
            return Err(Error::Config(format!("rho {r} must lie in (-1, 1)")));
        }
        Ok(())
    }
}
