use std::path::Path;

use serde::{Deserialize, Serialize};
use trigroots_core::gaussian::limiting_chf;
use trigroots_core::rng::{domain, substream};
use trigroots_core::{CoefficientFamily, TrigPolySample};

use super::{check_trials, family_serde, CompensatedSum};
use crate::output::{fmt_f64, write_outputs, Document, Tabular};
use crate::parallel::{map_ordered, run_trials};
use crate::{Error, Result};

/// Empirical characteristic function of `(X_n(α_n), X_n(α_n + δ/n))`
/// against the limit `φ∞` on a `(λ, μ)` grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChfConfig {
    #[serde(with = "family_serde")]
    pub family: CoefficientFamily,
    pub u: f64,
    pub n: usize,
    pub delta: f64,
    pub trials: u64,
    pub grid: Vec<(f64, f64)>,
    pub master_seed: u64,
    pub threads: usize,
    pub output_path: Option<String>,
}

/// `{-3, -2.5, ..., 3}²`.
pub fn default_grid() -> Vec<(f64, f64)> {
    let axis: Vec<f64> = (-6..=6).map(|i| i as f64 * 0.5).collect();
    axis.iter().flat_map(|&l| axis.iter().map(move |&m| (l, m))).collect()
}

impl Default for ChfConfig {
    fn default() -> Self {
        Self {
            family: CoefficientFamily::Rademacher,
            u: 0.0,
            n: 500,
            delta: 0.5,
            trials: 100_000,
            grid: default_grid(),
            master_seed: 1,
            threads: 0,
            output_path: None,
        }
    }
}

impl ChfConfig {
    pub fn validate(&self) -> Result<()> {
        check_trials(self.trials)?;
        if self.n == 0 {
            return Err(Error::Config("n must be positive".into()));
        }
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(Error::Config("delta must be positive".into()));
        }
        if self.grid.is_empty() {
            return Err(Error::Config("grid must be non-empty".into()));
        }
        Ok(())
    }

    /// Lattice point `kδ/n` nearest 1.0 and its right neighbour.
    pub fn points(&self) -> (f64, f64) {
        let mesh = self.delta / self.n as f64;
        let k = (1.0 / mesh).round();
        (k * mesh, (k + 1.0) * mesh)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChfRow {
    pub lambda: f64,
    pub mu: f64,
    pub empirical_re: f64,
    pub empirical_im: f64,
    pub limit_re: f64,
    pub limit_im: f64,
    pub deviation: f64,
}

impl Tabular for ChfRow {
    const COLUMNS: &'static [&'static str] =
        &["lambda", "mu", "empirical_re", "empirical_im", "limit_re", "limit_im", "deviation"];

    fn cells(&self) -> Vec<String> {
        vec![
            fmt_f64(self.lambda),
            fmt_f64(self.mu),
            fmt_f64(self.empirical_re),
            fmt_f64(self.empirical_im),
            fmt_f64(self.limit_re),
            fmt_f64(self.limit_im),
            fmt_f64(self.deviation),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChfSummary {
    pub alpha: f64,
    pub beta: f64,
    pub sup_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChfResult {
    pub config: ChfConfig,
    pub summary: ChfSummary,
    pub rows: Vec<ChfRow>,
}

impl ChfResult {
    pub fn sup_deviation(&self) -> f64 {
        self.summary.sup_deviation
    }

    pub fn document(&self) -> Document<'_, ChfConfig, ChfRow, ChfSummary> {
        Document::new("chf", &self.config, &self.rows, &self.summary)
    }
}

pub fn run_chf_comparison(config: &ChfConfig) -> Result<ChfResult> {
    config.validate()?;
    let n = config.n;
    let (alpha, beta) = config.points();
    let pairs = run_trials(config.threads, config.trials, |trial| {
        let mut rng = substream(config.master_seed, domain::CHF, n as u64, trial);
        let poly = TrigPolySample::sample(config.family, n, config.u, &mut rng)?;
        Ok((poly.evaluate(alpha), poly.evaluate(beta)))
    })?;
    let count = config.trials as f64;
    let rows = map_ordered(config.threads, &config.grid, |&(lambda, mu)| {
        let (mut re, mut im) = (CompensatedSum::default(), CompensatedSum::default());
        for &(x, y) in &pairs {
            let (s, c) = (lambda * x + mu * y).sin_cos();
            re.add(c);
            im.add(s);
        }
        let emp = num_complex::Complex64::new(re.value() / count, im.value() / count);
        let lim = limiting_chf(config.u, config.delta, lambda, mu);
        ChfRow {
            lambda,
            mu,
            empirical_re: emp.re,
            empirical_im: emp.im,
            limit_re: lim.re,
            limit_im: lim.im,
            deviation: (emp - lim).norm(),
        }
    })?;
    let sup_deviation = rows.iter().map(|r| r.deviation).fold(0.0, f64::max);
    let result = ChfResult {
        config: config.clone(),
        summary: ChfSummary {
            alpha,
            beta,
            sup_deviation,
        },
        rows,
    };
    if let Some(path) = &config.output_path {
        write_outputs(Path::new(path), &result.document())?;
    }
    Ok(result)
}
