//! Text reports for the single-sample and Gaussian-table subcommands.

use std::fmt::Write as _;

use serde::Serialize;
use trigroots_core::gaussian::{
    crossing_probability, limiting_density, orthant_asymptotic, orthant_probability, sheppard_same_sign,
};
use trigroots_core::rng::{domain, substream};
use trigroots_core::roots::{count_roots, default_root_tolerance, RootKind, RootTally};
use trigroots_core::{BivariatePair, TrigPolySample};

use crate::config::{CountConfig, GaussianConfig};
use crate::output::{fmt_f64, Tabular};
use crate::Result;

/// The sample drawn by `count` for a given config.
pub fn count_sample(config: &CountConfig) -> Result<TrigPolySample> {
    let mut rng = substream(config.seed, domain::SINGLE, config.n as u64, 0);
    Ok(TrigPolySample::sample(config.family, config.n, config.u, &mut rng)?)
}

pub fn count_tally(config: &CountConfig) -> Result<RootTally> {
    config.validate()?;
    let poly = count_sample(config)?;
    let tol = default_root_tolerance(&poly);
    Ok(count_roots(&poly, config.a, config.b, config.oversample, tol)?)
}

/// Root count and locations, one root per line.
pub fn count_report(tally: &RootTally) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "half_units = {}", tally.half_units);
    let _ = writeln!(out, "roots = {}", fmt_f64(tally.count()));
    let _ = writeln!(out, "t,kind");
    for r in &tally.roots {
        let kind = match r.kind {
            RootKind::Interior => "interior",
            RootKind::Endpoint => "endpoint",
        };
        let _ = writeln!(out, "{},{kind}", fmt_f64(r.t));
    }
    out
}

/// Crossing probability of the limiting process over a lag `δ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossingRow {
    pub delta: f64,
    pub crossing_probability: f64,
    pub per_delta: f64,
    pub limiting_density: f64,
    /// `(P/δ)/limiting_density`, tends to 1 as `δ → 0`.
    pub ratio: f64,
}

impl Tabular for CrossingRow {
    const COLUMNS: &'static [&'static str] = &["delta", "crossing_probability", "per_delta", "limiting_density", "ratio"];

    fn cells(&self) -> Vec<String> {
        [self.delta, self.crossing_probability, self.per_delta, self.limiting_density, self.ratio]
            .into_iter()
            .map(fmt_f64)
            .collect()
    }
}

/// Orthant probabilities of a unit-variance pair with correlation `ρ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrthantRow {
    pub rho: f64,
    /// Closed form `P(X ≥ 0, Y ≥ 0)` for a centered pair.
    pub sheppard: f64,
    /// The same probability by quadrature, as a check.
    pub sheppard_quadrature: f64,
    /// `P(X ≤ u, Y ≥ u)` for a centered pair.
    pub orthant: f64,
    pub asymptotic: f64,
    /// `orthant/asymptotic`, tends to 1 as `ρ → 1`.
    pub ratio: f64,
}

impl Tabular for OrthantRow {
    const COLUMNS: &'static [&'static str] =
        &["rho", "sheppard", "sheppard_quadrature", "orthant", "asymptotic", "ratio"];

    fn cells(&self) -> Vec<String> {
        [self.rho, self.sheppard, self.sheppard_quadrature, self.orthant, self.asymptotic, self.ratio]
            .into_iter()
            .map(fmt_f64)
            .collect()
    }
}

pub fn crossing_rows(config: &GaussianConfig) -> Result<Vec<CrossingRow>> {
    config.validate()?;
    let density = limiting_density(config.u);
    config
        .delta_list
        .iter()
        .map(|&delta| {
            let p = crossing_probability(config.u, delta)?;
            Ok(CrossingRow {
                delta,
                crossing_probability: p,
                per_delta: p / delta,
                limiting_density: density,
                ratio: p / delta / density,
            })
        })
        .collect()
}

pub fn orthant_rows(config: &GaussianConfig) -> Result<Vec<OrthantRow>> {
    config.validate()?;
    config
        .rho_list
        .iter()
        .map(|&rho| {
            let centered = BivariatePair::new(0.0, rho)?;
            // P(X ≥ 0, Y ≥ 0) = 1/2 - P(X ≤ 0, Y ≥ 0)
            let same_sign = 0.5 - orthant_probability(centered, 0.0)?;
            let orthant = orthant_probability(centered, config.u)?;
            let asymptotic = orthant_asymptotic(config.u, rho);
            Ok(OrthantRow {
                rho,
                sheppard: sheppard_same_sign(rho),
                sheppard_quadrature: same_sign,
                orthant,
                asymptotic,
                ratio: orthant / asymptotic,
            })
        })
        .collect()
}
