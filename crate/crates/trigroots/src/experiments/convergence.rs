use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};
use trigroots_core::gaussian::{limiting_density, rice_expected_roots};
use trigroots_core::rng::{domain, substream};
use trigroots_core::roots::{
    default_root_tolerance, LatticeCounter, RootCounter, snap_interval, DEFAULT_OVERSAMPLE,
};
use trigroots_core::stats::Z95;
use trigroots_core::{CoefficientFamily, Snap, TrigPolySample};

use super::{check_interval, check_trials, family_serde, IntMoments};
use crate::output::{fmt_f64, fmt_opt, write_outputs, Document, Tabular};
use crate::parallel::run_trials;
use crate::{Error, Result};

/// Root-count convergence run: `E N_n[a, b] / n` against its limit for each `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConvergenceConfig {
    #[serde(with = "family_serde")]
    pub family: CoefficientFamily,
    pub u: f64,
    pub n_values: Vec<usize>,
    pub a: f64,
    pub b: f64,
    /// Lattice spacing in units of `1/n`.
    pub delta: f64,
    pub trials: u64,
    pub master_seed: u64,
    /// Worker threads; 0 uses every core. Does not affect results.
    pub threads: usize,
    pub oversample: usize,
    pub output_path: Option<String>,
}

impl Default for ConvergenceConfig {
    fn default() -> Self {
        Self {
            family: CoefficientFamily::Gaussian,
            u: 0.0,
            n_values: vec![50, 100, 200, 400],
            a: 0.0,
            b: 2.0 * PI,
            delta: 0.25,
            trials: 2000,
            master_seed: 1,
            threads: 0,
            oversample: DEFAULT_OVERSAMPLE,
            output_path: None,
        }
    }
}

impl ConvergenceConfig {
    pub fn validate(&self) -> Result<()> {
        check_trials(self.trials)?;
        check_interval(self.a, self.b)?;
        if self.n_values.is_empty() || self.n_values[0] == 0 {
            return Err(Error::Config("n_values must be non-empty and positive".into()));
        }
        if self.n_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("n_values must be strictly increasing".into()));
        }
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(Error::Config("delta must be positive".into()));
        }
        if !self.u.is_finite() {
            return Err(Error::Config("u must be finite".into()));
        }
        if self.oversample < trigroots_core::roots::MIN_OVERSAMPLE {
            return Err(Error::Config("oversample must be at least 4".into()));
        }
        Ok(())
    }

    /// `(b - a)·exp(-u²/2)/(π√3)`.
    pub fn limit(&self) -> f64 {
        (self.b - self.a) * limiting_density(self.u)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub trials: u64,
    pub mean_roots_per_n: f64,
    pub stderr: Option<f64>,
    pub ci95_low: Option<f64>,
    pub ci95_high: Option<f64>,
    pub mean_lattice_per_n: f64,
    pub stderr_lattice: Option<f64>,
    pub lattice_a: f64,
    pub lattice_b: f64,
    pub rice_exact_per_n: Option<f64>,
    pub limit: f64,
}

impl Tabular for ConvergenceRow {
    const COLUMNS: &'static [&'static str] = &[
        "n",
        "trials",
        "mean_roots_per_n",
        "stderr",
        "ci95_low",
        "ci95_high",
        "mean_lattice_per_n",
        "stderr_lattice",
        "lattice_a",
        "lattice_b",
        "rice_exact_per_n",
        "limit",
    ];

    fn cells(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.trials.to_string(),
            fmt_f64(self.mean_roots_per_n),
            fmt_opt(self.stderr),
            fmt_opt(self.ci95_low),
            fmt_opt(self.ci95_high),
            fmt_f64(self.mean_lattice_per_n),
            fmt_opt(self.stderr_lattice),
            fmt_f64(self.lattice_a),
            fmt_f64(self.lattice_b),
            fmt_opt(self.rice_exact_per_n),
            fmt_f64(self.limit),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceMetadata {
    pub lattice_snap: &'static str,
    pub count_unit: &'static str,
}

const METADATA: ConvergenceMetadata = ConvergenceMetadata {
    lattice_snap: "inner: lattice sign changes are counted on [a'_n, b'_n] inside [a, b]",
    count_unit: "roots per unit degree; endpoint roots weigh 1/2",
};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceResult {
    pub config: ConvergenceConfig,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceResult {
    pub fn document(&self) -> Document<'_, ConvergenceConfig, ConvergenceRow, ConvergenceMetadata> {
        Document::new("converge", &self.config, &self.rows, &METADATA)
    }

    pub fn write(&self, base: &Path) -> Result<()> {
        write_outputs(base, &self.document()).map(|_| ())
    }
}

/// For each `n`, counts roots on `[a, b]` and lattice sign changes on the inner
/// snapped interval over `trials` samples, and reports per-degree means.
///
/// Writes `<output_path>.csv`/`.json` when `output_path` is set.
pub fn run_convergence(config: &ConvergenceConfig) -> Result<ConvergenceResult> {
    config.validate()?;
    let mut rows = Vec::with_capacity(config.n_values.len());
    for &n in &config.n_values {
        let counter = RootCounter::new(n, config.a, config.b, config.oversample)?;
        let lattice = match snap_interval(config.a, config.b, config.delta, n, Snap::Inner) {
            Ok(l) => Some(LatticeCounter::new(l)?),
            Err(_) => None,
        };
        let per_trial = run_trials(config.threads, config.trials, |trial| {
            let mut rng = substream(config.master_seed, domain::CONVERGENCE, n as u64, trial);
            let poly = TrigPolySample::sample(config.family, n, config.u, &mut rng)?;
            let tol = default_root_tolerance(&poly);
            let roots = counter.count_half_units(&poly, tol)?;
            let lat = match &lattice {
                Some(l) => l.count(&poly)?.half_units,
                None => 0,
            };
            Ok((roots as i64, lat as i64))
        })?;
        let mut roots = IntMoments::default();
        let mut lat = IntMoments::default();
        for (r, l) in per_trial {
            roots.add(r);
            lat.add(l);
        }
        // half-units → roots, then per unit degree
        let scale = 2.0 * n as f64;
        let (mean, stderr) = roots.scaled(scale);
        let (mean_lat, stderr_lat) = lat.scaled(scale);
        let rice = (config.family == CoefficientFamily::Gaussian)
            .then(|| rice_expected_roots(n, config.u, config.a, config.b) / n as f64);
        rows.push(ConvergenceRow {
            n,
            trials: config.trials,
            mean_roots_per_n: mean,
            stderr,
            ci95_low: stderr.map(|s| mean - Z95 * s),
            ci95_high: stderr.map(|s| mean + Z95 * s),
            mean_lattice_per_n: mean_lat,
            stderr_lattice: stderr_lat,
            lattice_a: lattice.as_ref().map_or(f64::NAN, |l| l.lattice().start()),
            lattice_b: lattice.as_ref().map_or(f64::NAN, |l| l.lattice().end()),
            rice_exact_per_n: rice,
            limit: config.limit(),
        });
    }
    let result = ConvergenceResult {
        config: config.clone(),
        rows,
    };
    if let Some(path) = &config.output_path {
        result.write(Path::new(path))?;
    }
    Ok(result)
}
