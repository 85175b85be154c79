//! Seeded Monte Carlo experiments.
//!
//! Every trial owns a counter-based substream keyed by
//! `(master_seed, experiment, n)` with the trial index as stream id, and
//! per-trial results are reduced in trial order (integer half-unit totals or
//! compensated sums). Results are therefore bit-identical for any thread count.

mod chf;
mod convergence;
mod events;
mod gap;
mod small_ball;

use std::f64::consts::PI;

pub use chf::{run_chf_comparison, ChfConfig, ChfResult, ChfRow};
pub use convergence::{run_convergence, ConvergenceConfig, ConvergenceResult, ConvergenceRow};
pub use events::{estimate_event_probability, EventConfig, EventEstimate, EVENT_NODES};
pub use gap::{run_gap_experiment, GapConfig, GapResult, GapRow};
pub use small_ball::{estimate_small_ball, SmallBallConfig, SmallBallResult, SmallBallRow};

use crate::{Error, Result};

pub(crate) mod family_serde {
    use serde::{Deserialize, Deserializer, Serializer};
    use trigroots_core::CoefficientFamily;

    pub fn serialize<S: Serializer>(f: &CoefficientFamily, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(f.name())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<CoefficientFamily, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub(crate) fn check_interval(a: f64, b: f64) -> Result<()> {
    if !(a.is_finite() && b.is_finite() && 0.0 <= a && a < b && b <= 2.0 * PI) {
        return Err(Error::Config(format!("interval [{a}, {b}] must satisfy 0 <= a < b <= 2π")));
    }
    Ok(())
}

pub(crate) fn check_trials(trials: u64) -> Result<()> {
    if trials == 0 {
        return Err(Error::Config("trials must be at least 1".into()));
    }
    Ok(())
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Exact integer moments of per-trial half-unit counts.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct IntMoments {
    pub count: u64,
    pub sum: i128,
    pub sum_sq: i128,
}

impl IntMoments {
    pub fn add(&mut self, x: i64) {
        let x = x as i128;
        self.count += 1;
        self.sum += x;
        self.sum_sq += x * x;
    }

    /// Mean and standard error after dividing every observation by `scale`.
    pub fn scaled(&self, scale: f64) -> (f64, Option<f64>) {
        let (m, se) = trigroots_core::stats::integer_mean_stderr(self.sum, self.sum_sq, self.count);
        (m / scale, se.map(|s| s / scale))
    }
}
