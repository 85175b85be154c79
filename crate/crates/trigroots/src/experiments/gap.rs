use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};
use trigroots_core::rng::{domain, substream};
use trigroots_core::roots::{
    default_root_tolerance, LatticeCounter, RootCounter, snap_interval, DEFAULT_OVERSAMPLE,
};
use trigroots_core::{CoefficientFamily, Snap, TrigPolySample};

use super::{check_interval, check_trials, family_serde, IntMoments};
use crate::output::{fmt_f64, fmt_opt, write_outputs, Document, Tabular};
use crate::parallel::run_trials;
use crate::{Error, Result};

/// Roots-minus-lattice-sign-changes gap on the outer snapped interval, per `δ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GapConfig {
    #[serde(with = "family_serde")]
    pub family: CoefficientFamily,
    pub u: f64,
    pub n: usize,
    pub a: f64,
    pub b: f64,
    pub delta_values: Vec<f64>,
    pub trials: u64,
    pub master_seed: u64,
    pub threads: usize,
    pub oversample: usize,
    pub output_path: Option<String>,
}

impl Default for GapConfig {
    fn default() -> Self {
        Self {
            family: CoefficientFamily::Gaussian,
            u: 0.0,
            n: 200,
            a: 0.0,
            b: 2.0 * PI,
            delta_values: vec![0.05, 0.1, 0.2, 0.4],
            trials: 2000,
            master_seed: 1,
            threads: 0,
            oversample: DEFAULT_OVERSAMPLE,
            output_path: None,
        }
    }
}

impl GapConfig {
    pub fn validate(&self) -> Result<()> {
        check_trials(self.trials)?;
        check_interval(self.a, self.b)?;
        if self.n == 0 {
            return Err(Error::Config("n must be positive".into()));
        }
        if self.delta_values.is_empty() {
            return Err(Error::Config("delta_values must be non-empty".into()));
        }
        if let Some(d) = self.delta_values.iter().find(|&&d| !(d > 0.0 && d < 0.5)) {
            return Err(Error::Config(format!("delta {d} outside (0, 1/2)")));
        }
        if self.oversample < trigroots_core::roots::MIN_OVERSAMPLE {
            return Err(Error::Config("oversample must be at least 4".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapRow {
    pub delta: f64,
    pub lattice_a: f64,
    pub lattice_b: f64,
    pub mean_roots_per_n: f64,
    pub mean_lattice_per_n: f64,
    /// `(E N_n - E N*_{n,δ}) / n` on `[a_n, b_n]`.
    pub gap_per_n: f64,
    pub stderr_gap: Option<f64>,
    /// Smallest per-trial gap in roots; negative values would break the sandwich.
    pub min_trial_gap: f64,
    pub negative_trials: u64,
    pub delta_cube_root: f64,
}

impl Tabular for GapRow {
    const COLUMNS: &'static [&'static str] = &[
        "delta",
        "lattice_a",
        "lattice_b",
        "mean_roots_per_n",
        "mean_lattice_per_n",
        "gap_per_n",
        "stderr_gap",
        "min_trial_gap",
        "negative_trials",
        "delta_cube_root",
    ];

    fn cells(&self) -> Vec<String> {
        vec![
            fmt_f64(self.delta),
            fmt_f64(self.lattice_a),
            fmt_f64(self.lattice_b),
            fmt_f64(self.mean_roots_per_n),
            fmt_f64(self.mean_lattice_per_n),
            fmt_f64(self.gap_per_n),
            fmt_opt(self.stderr_gap),
            fmt_f64(self.min_trial_gap),
            self.negative_trials.to_string(),
            fmt_f64(self.delta_cube_root),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapResult {
    pub config: GapConfig,
    pub rows: Vec<GapRow>,
}

impl GapResult {
    pub fn document(&self) -> Document<'_, GapConfig, GapRow, &'static str> {
        const NOTE: &str = "same coefficient samples for every delta; counts on the outer snapped interval";
        Document::new("gap", &self.config, &self.rows, &NOTE)
    }

    pub fn write(&self, base: &Path) -> Result<()> {
        write_outputs(base, &self.document()).map(|_| ())
    }
}

/// Estimates `E N_n[a_n, b_n] - E N*_{n,δ}[a_n, b_n]` per unit degree for each `δ`.
pub fn run_gap_experiment(config: &GapConfig) -> Result<GapResult> {
    config.validate()?;
    let n = config.n;
    let lattices = config
        .delta_values
        .iter()
        .map(|&d| {
            let l = snap_interval(config.a, config.b, d, n, Snap::Outer)?;
            Ok((RootCounter::new(n, l.start(), l.end(), config.oversample)?, LatticeCounter::new(l)?))
        })
        .collect::<trigroots_core::Result<Vec<_>>>()?;
    let per_trial = run_trials(config.threads, config.trials, |trial| {
        let mut rng = substream(config.master_seed, domain::GAP, n as u64, trial);
        let poly = TrigPolySample::sample(config.family, n, config.u, &mut rng)?;
        let tol = default_root_tolerance(&poly);
        lattices
            .iter()
            .map(|(counter, lattice)| {
                let roots = counter.count_half_units(&poly, tol)?;
                let lat = lattice.count(&poly)?;
                Ok((roots as i64, lat.half_units as i64))
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let scale = 2.0 * n as f64;
    let rows = lattices
        .iter()
        .enumerate()
        .map(|(idx, (_, counter))| {
            let l = counter.lattice();
            let (mut roots, mut lat, mut gap) = (IntMoments::default(), IntMoments::default(), IntMoments::default());
            let mut min_gap = i64::MAX;
            let mut negative = 0;
            for trial in &per_trial {
                let (r, s) = trial[idx];
                roots.add(r);
                lat.add(s);
                gap.add(r - s);
                min_gap = min_gap.min(r - s);
                negative += u64::from(r < s);
            }
            let (gap_mean, gap_se) = gap.scaled(scale);
            GapRow {
                delta: l.delta,
                lattice_a: l.start(),
                lattice_b: l.end(),
                mean_roots_per_n: roots.scaled(scale).0,
                mean_lattice_per_n: lat.scaled(scale).0,
                gap_per_n: gap_mean,
                stderr_gap: gap_se,
                min_trial_gap: min_gap as f64 / 2.0,
                negative_trials: negative,
                delta_cube_root: l.delta.cbrt(),
            }
        })
        .collect();
    let result = GapResult {
        config: config.clone(),
        rows,
    };
    if let Some(path) = &config.output_path {
        result.write(Path::new(path))?;
    }
    Ok(result)
}
