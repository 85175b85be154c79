use std::path::Path;

use serde::{Deserialize, Serialize};
use trigroots_core::gaussian::normal_small_ball;
use trigroots_core::poly::theoretical_derivative_variance;
use trigroots_core::rng::{domain, substream};
use trigroots_core::stats::{wilson_interval, Z95};
use trigroots_core::{CoefficientFamily, TrigPolySample};

use super::{check_trials, family_serde};
use crate::output::{fmt_f64, write_outputs, Document, Tabular};
use crate::parallel::run_trials;
use crate::{Error, Result};

/// Multiplier of the sanity envelope `C·(T + T^{-1/2} n^{-(2j+1)/4})`.
pub const ENVELOPE_CONSTANT: f64 = 5.0;

/// `P(|X_n^{(j)}(β)/n^j| ≤ T)` at a fixed point `β`, tabulated over `T`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SmallBallConfig {
    #[serde(with = "family_serde")]
    pub family: CoefficientFamily,
    pub u: f64,
    pub n: usize,
    pub j: u32,
    pub beta: f64,
    pub t_values: Vec<f64>,
    pub trials: u64,
    pub master_seed: u64,
    pub threads: usize,
    pub output_path: Option<String>,
}

impl Default for SmallBallConfig {
    fn default() -> Self {
        Self {
            family: CoefficientFamily::Gaussian,
            u: 0.0,
            n: 500,
            j: 0,
            beta: 1.0,
            t_values: vec![0.01, 0.03, 0.1, 0.3, 1.0],
            trials: 100_000,
            master_seed: 1,
            threads: 0,
            output_path: None,
        }
    }
}

impl SmallBallConfig {
    pub fn validate(&self) -> Result<()> {
        check_trials(self.trials)?;
        if self.n == 0 {
            return Err(Error::Config("n must be positive".into()));
        }
        if self.t_values.is_empty() || self.t_values.iter().any(|&t| !(t > 0.0)) {
            return Err(Error::Config("t_values must be non-empty and positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmallBallRow {
    pub t: f64,
    pub probability: f64,
    pub ci95_low: f64,
    pub ci95_high: f64,
    pub envelope: f64,
    pub within_envelope: bool,
    /// Same probability for a normal variable with the exact mean and variance.
    pub gaussian_reference: f64,
}

impl Tabular for SmallBallRow {
    const COLUMNS: &'static [&'static str] = &[
        "t",
        "probability",
        "ci95_low",
        "ci95_high",
        "envelope",
        "within_envelope",
        "gaussian_reference",
    ];

    fn cells(&self) -> Vec<String> {
        vec![
            fmt_f64(self.t),
            fmt_f64(self.probability),
            fmt_f64(self.ci95_low),
            fmt_f64(self.ci95_high),
            fmt_f64(self.envelope),
            self.within_envelope.to_string(),
            fmt_f64(self.gaussian_reference),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmallBallResult {
    pub config: SmallBallConfig,
    /// Variance of `X_n^{(j)}(β)/n^j`.
    pub scaled_variance: f64,
    pub rows: Vec<SmallBallRow>,
}

impl SmallBallResult {
    pub fn document(&self) -> Document<'_, SmallBallConfig, SmallBallRow, f64> {
        Document::new("smallball", &self.config, &self.rows, &self.scaled_variance)
    }
}

pub fn envelope(n: usize, j: u32, t: f64) -> f64 {
    let tail = (n as f64).powf(-(2.0 * j as f64 + 1.0) / 4.0);
    ENVELOPE_CONSTANT * (t + tail / t.sqrt())
}

pub fn estimate_small_ball(config: &SmallBallConfig) -> Result<SmallBallResult> {
    config.validate()?;
    let n = config.n;
    let norm = (n as f64).powi(config.j as i32);
    let scaled = run_trials(config.threads, config.trials, |trial| {
        let mut rng = substream(config.master_seed, domain::SMALL_BALL, n as u64, trial);
        let poly = TrigPolySample::sample(config.family, n, config.u, &mut rng)?;
        Ok(poly.evaluate_derivative(config.j, config.beta) / norm)
    })?;
    let variance = theoretical_derivative_variance(n, config.j) / (norm * norm);
    let mean = if config.j == 0 { config.u } else { 0.0 };
    let rows = config
        .t_values
        .iter()
        .map(|&t| {
            let hits = scaled.iter().filter(|y| y.abs() <= t).count() as u64;
            let (lo, hi) = wilson_interval(hits, config.trials, Z95);
            let p = hits as f64 / config.trials as f64;
            let env = envelope(n, config.j, t);
            SmallBallRow {
                t,
                probability: p,
                ci95_low: lo,
                ci95_high: hi,
                envelope: env,
                within_envelope: p <= env,
                gaussian_reference: normal_small_ball(mean, variance, t),
            }
        })
        .collect();
    let result = SmallBallResult {
        config: config.clone(),
        scaled_variance: variance,
        rows,
    };
    if let Some(path) = &config.output_path {
        write_outputs(Path::new(path), &result.document())?;
    }
    Ok(result)
}
