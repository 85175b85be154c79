use std::f64::consts::PI;
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};
use trigroots_core::rng::{domain, substream};
use trigroots_core::roots::count_derivative_roots;
use trigroots_core::stats::{wilson_interval, Z95};
use trigroots_core::{CoefficientFamily, TrigPolySample};

use super::{check_trials, family_serde};
use crate::output::{fmt_f64, write_outputs, Document, Tabular};
use crate::parallel::run_trials;
use crate::{Error, Result};

/// Grid nodes used to resolve roots inside one mesh-scale interval.
pub const EVENT_NODES: usize = 33;

/// Probability that the `j`-th derivative has at least `m` roots in `[α, α + δ/n]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EventConfig {
    #[serde(with = "family_serde")]
    pub family: CoefficientFamily,
    pub u: f64,
    pub n: usize,
    pub delta: f64,
    pub j: u32,
    pub m: usize,
    pub trials: u64,
    pub master_seed: u64,
    pub threads: usize,
    pub output_path: Option<String>,
}

impl Default for EventConfig {
    fn default() -> Self {
        Self {
            family: CoefficientFamily::Gaussian,
            u: 0.0,
            n: 500,
            delta: 0.1,
            j: 0,
            m: 1,
            trials: 100_000,
            master_seed: 1,
            threads: 0,
            output_path: None,
        }
    }
}

impl EventConfig {
    pub fn validate(&self) -> Result<()> {
        check_trials(self.trials)?;
        if self.n == 0 || self.m == 0 {
            return Err(Error::Config("n and m must be positive".into()));
        }
        if !(self.delta > 0.0) || self.delta / self.n as f64 >= 2.0 * PI {
            return Err(Error::Config("delta must be positive and delta/n below 2π".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventEstimate {
    pub delta: f64,
    pub j: u32,
    pub m: usize,
    pub trials: u64,
    pub successes: u64,
    pub probability: f64,
    pub ci95_low: f64,
    pub ci95_high: f64,
    /// Most roots the detector can resolve in one interval.
    pub capacity: usize,
    pub resolution_limited: bool,
}

impl Tabular for EventEstimate {
    const COLUMNS: &'static [&'static str] = &[
        "delta",
        "j",
        "m",
        "trials",
        "successes",
        "probability",
        "ci95_low",
        "ci95_high",
        "capacity",
        "resolution_limited",
    ];

    fn cells(&self) -> Vec<String> {
        vec![
            fmt_f64(self.delta),
            self.j.to_string(),
            self.m.to_string(),
            self.trials.to_string(),
            self.successes.to_string(),
            fmt_f64(self.probability),
            fmt_f64(self.ci95_low),
            fmt_f64(self.ci95_high),
            self.capacity.to_string(),
            self.resolution_limited.to_string(),
        ]
    }
}

impl EventEstimate {
    pub fn document<'a>(&'a self, config: &'a EventConfig) -> Document<'a, EventConfig, EventEstimate, &'static str> {
        const NOTE: &str = "interval start alpha drawn uniformly on [0, 2π - δ/n] per trial; boundary roots counted with full weight";
        Document::new("events", config, std::slice::from_ref(self), &NOTE)
    }
}

/// Empirical `P(D_m^{(j)})` over randomly placed intervals of length `δ/n`.
///
/// Roots on the interval boundary count fully. If `m` exceeds what
/// [`EVENT_NODES`] nodes can resolve, no trials are run and the estimate is
/// 0 with `resolution_limited` set.
pub fn estimate_event_probability(config: &EventConfig) -> Result<EventEstimate> {
    config.validate()?;
    let n = config.n;
    let width = config.delta / n as f64;
    // one sign change or one hidden pair per cell
    let capacity = 2 * (EVENT_NODES - 1);
    let successes = if config.m > capacity {
        0
    } else {
        let hits = run_trials(config.threads, config.trials, |trial| {
            let mut rng = substream(config.master_seed, domain::EVENTS, n as u64, trial);
            let poly = TrigPolySample::sample(config.family, n, config.u, &mut rng)?;
            let alpha = rng.random::<f64>() * (2.0 * PI - width);
            let tally = count_derivative_roots(&poly, config.j, alpha, alpha + width, EVENT_NODES, 0.0)?;
            Ok(tally.unweighted() >= config.m)
        })?;
        hits.into_iter().filter(|&h| h).count() as u64
    };
    let (lo, hi) = wilson_interval(successes, config.trials, Z95);
    let estimate = EventEstimate {
        delta: config.delta,
        j: config.j,
        m: config.m,
        trials: config.trials,
        successes,
        probability: successes as f64 / config.trials as f64,
        ci95_low: lo,
        ci95_high: hi,
        capacity,
        resolution_limited: config.m > capacity,
    };
    if let Some(path) = &config.output_path {
        write_outputs(Path::new(path), &estimate.document(config))?;
    }
    Ok(estimate)
}
