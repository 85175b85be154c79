//! The limiting Gaussian comparison process.
//!
//! At separations of order `1/n`, `X_n` behaves like a stationary Gaussian
//! process `Z` with mean `u`, unit variance and covariance
//! `Cov[Z(t), Z(s)] = sinc(t - s)`. Sign changes of `Z` between `0` and `δ`
//! reduce to bivariate normal orthant probabilities, which are evaluated here
//! by one-dimensional quadrature and compared against Sheppard's closed form
//! and the `ρ ↑ 1` asymptotic.

use core::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::poly::theoretical_derivative_variance;
use crate::quadrature::integrate;
use crate::stats::{normal_cdf, normal_pdf, normal_sf};
use crate::{Error, Result};

const SINC_SERIES_BELOW: f64 = 1e-4;
const ORTHANT_TOL: f64 = 1e-13;

/// `sin(lag)/lag`, with `sinc(0) = 1`.
pub fn sinc_covariance(lag: f64) -> f64 {
    if lag.abs() < SINC_SERIES_BELOW {
        let x2 = lag * lag;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        libm::sin(lag) / lag
    }
}

/// A bivariate normal pair with common mean `u`, unit variances and correlation `rho`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BivariatePair {
    pub u: f64,
    pub rho: f64,
}

impl BivariatePair {
    pub fn new(u: f64, rho: f64) -> Result<Self> {
        if !u.is_finite() {
            return Err(Error::InvalidArgument("mean must be finite"));
        }
        if !(rho.abs() <= 1.0) {
            return Err(Error::InvalidArgument("correlation must lie in [-1, 1]"));
        }
        Ok(Self { u, rho })
    }

    /// The pair `(Z(0), Z(δ))` of the sinc-covariance process with mean `u`.
    pub fn from_lag(u: f64, delta: f64) -> Result<Self> {
        Self::new(u, sinc_covariance(delta))
    }

    /// Draws `(z0, z1)` via the 2×2 Cholesky factor of `[[1, ρ], [ρ, 1]]`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, f64) {
        let g1: f64 = rng.sample(StandardNormal);
        let g2: f64 = rng.sample(StandardNormal);
        let tail = libm::sqrt((1.0 - self.rho * self.rho).max(0.0));
        (self.u + g1, self.u + self.rho * g1 + tail * g2)
    }
}

/// `P(X ≤ level, Y ≥ level)` for `(X, Y)` distributed as `pair`.
///
/// Conditioning on `X = x` leaves `Y ~ N(u + ρ(x-u), 1-ρ²)`, so the
/// probability is `∫_{-∞}^{c} φ(x) Q((c - ρx)/√(1-ρ²)) dx` with `c = level - u`.
/// The integral is taken adaptively with absolute tolerance well below 1e-10.
pub fn orthant_probability(pair: BivariatePair, level: f64) -> Result<f64> {
    let rho = pair.rho;
    if rho.abs() >= 1.0 {
        return Err(Error::Degenerate("orthant probability needs |rho| < 1"));
    }
    if !level.is_finite() {
        return Err(Error::InvalidArgument("level must be finite"));
    }
    let c = level - pair.u;
    let s = libm::sqrt((1.0 - rho) * (1.0 + rho));
    let integrand = |x: f64| normal_pdf(x) * normal_sf((c - rho * x) / s);
    // Below c - 40 the marginal density underflows.
    let lo = c.min(0.0) - 40.0;
    let mut breaks = [f64::NAN; 12];
    let mut nb = 0;
    let mut push = |x: f64| {
        if x.is_finite() && nb < breaks.len() {
            breaks[nb] = x;
            nb += 1;
        }
    };
    // The conditional tail switches from ~1 to ~0 around x = c/ρ over a width ~s/|ρ|.
    if rho != 0.0 {
        let x0 = c / rho;
        let w = s / rho.abs();
        for m in [-16.0, -4.0, -1.0, 0.0, 1.0, 4.0, 16.0] {
            push(x0 + m * w);
        }
    }
    for m in [1.0, 4.0, 10.0] {
        push(c - m);
    }
    let (value, _) = integrate(integrand, lo, c, &breaks[..nb], ORTHANT_TOL);
    Ok(value.clamp(0.0, 1.0))
}

/// Sheppard's formula `P(X ≥ 0, Y ≥ 0) = 1/4 + arcsin(ρ)/(2π)` for a centered pair.
pub fn sheppard_same_sign(rho: f64) -> f64 {
    0.25 + libm::asin(rho.clamp(-1.0, 1.0)) / (2.0 * PI)
}

/// `√(1-ρ²)/(2π) · exp(-u²/2)`, the `ρ ↑ 1` asymptotic of
/// `P(X ≤ u, Y ≥ u)` for a centered pair.
pub fn orthant_asymptotic(u: f64, rho: f64) -> f64 {
    libm::sqrt((1.0 - rho * rho).max(0.0)) / (2.0 * PI) * libm::exp(-0.5 * u * u)
}

/// `P(Z(0)·Z(δ) < 0)` for the sinc-covariance process with mean `u`.
///
/// Equals `2 P(Z(0) ≤ 0, Z(δ) ≥ 0)` by exchangeability.
pub fn crossing_probability(u: f64, delta: f64) -> Result<f64> {
    if delta == 0.0 {
        return Err(Error::Degenerate("crossing probability needs delta > 0"));
    }
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::InvalidArgument("delta must be positive and finite"));
    }
    let pair = BivariatePair::from_lag(u, delta)?;
    if pair.rho >= 1.0 {
        // Z(0) = Z(δ) almost surely.
        return Ok(0.0);
    }
    Ok(2.0 * orthant_probability(pair, 0.0)?)
}

/// `exp(-u²/2)/(π√3)`, the limiting number of roots of `X_n` per unit length per unit degree.
pub fn limiting_density(u: f64) -> f64 {
    libm::exp(-0.5 * u * u) / (PI * libm::sqrt(3.0))
}

/// Characteristic function of `(Z(0), Z(δ))` at `(λ, μ)`:
/// `exp(iu(λ+μ) - (λ²+μ²)/2 - λμ·sinc δ)`.
pub fn limiting_chf(u: f64, delta: f64, lambda: f64, mu: f64) -> Complex64 {
    let s = -Complex64::new(0.0, u * (lambda + mu))
        + Complex64::new(0.5 * (lambda * lambda + mu * mu) + lambda * mu * sinc_covariance(delta), 0.0);
    (-s).exp()
}

/// Exact expected number of roots of `X_n` on `[a, b]` for Gaussian coefficients.
///
/// With Gaussian coefficients `X_n` is stationary with unit variance and
/// second spectral moment `λ₂ = (1/n)Σk²`, so the Rice formula gives
/// `(b-a)/π · √λ₂ · exp(-u²/2)`.
pub fn rice_expected_roots(n: usize, u: f64, a: f64, b: f64) -> f64 {
    (b - a) / PI * libm::sqrt(theoretical_derivative_variance(n, 1)) * libm::exp(-0.5 * u * u)
}

/// `P(|N(mean, var)| ≤ t)`.
pub fn normal_small_ball(mean: f64, var: f64, t: f64) -> f64 {
    let sd = libm::sqrt(var);
    (normal_cdf((t - mean) / sd) - normal_cdf((-t - mean) / sd)).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn sinc_values() {
        assert_eq!(sinc_covariance(0.0), 1.0);
        assert!(sinc_covariance(PI).abs() <= 1e-15);
        // the quartic term is 8.3e-11 at 0.01
        assert!((sinc_covariance(0.01) - (1.0 - 1e-4 / 6.0)).abs() <= 1e-10);
        assert!((sinc_covariance(0.01) - (1.0 - 1e-4 / 6.0 + 1e-8 / 120.0)).abs() <= 1e-12);
        // both sides of the series switch agree
        let below = sinc_covariance(0.999_999e-4);
        let above = sinc_covariance(1.000_001e-4);
        assert!((below - above).abs() < 1e-12);
    }

    #[test]
    fn pair_validation() {
        assert!(BivariatePair::new(0.0, 1.5).is_err());
        assert!(BivariatePair::new(0.0, f64::NAN).is_err());
        assert!(BivariatePair::new(f64::INFINITY, 0.0).is_err());
        assert!(BivariatePair::new(1.0, -1.0).is_ok());
    }

    #[test]
    fn perfectly_correlated_samples_coincide() {
        let pair = BivariatePair::new(0.3, 1.0).unwrap();
        let mut rng = seeded(5);
        for _ in 0..1000 {
            let (a, b) = pair.sample(&mut rng);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn orthant_closed_forms() {
        let p = orthant_probability(BivariatePair::new(0.0, 0.0).unwrap(), 0.0).unwrap();
        assert!((p - 0.25).abs() <= 1e-12);
        let p = orthant_probability(BivariatePair::new(0.0, 0.5).unwrap(), 0.0).unwrap();
        assert!((p - 1.0 / 6.0).abs() <= 1e-12, "{p}");
        // independent pair: P(X ≤ c) P(Y ≥ c)
        let p = orthant_probability(BivariatePair::new(0.0, 0.0).unwrap(), 0.7).unwrap();
        assert!((p - normal_cdf(0.7) * normal_sf(0.7)).abs() <= 1e-12);
    }

    #[test]
    fn orthant_degenerate() {
        for rho in [1.0, -1.0] {
            assert!(matches!(
                orthant_probability(BivariatePair::new(0.0, rho).unwrap(), 0.0),
                Err(Error::Degenerate(_))
            ));
        }
    }

    #[test]
    fn orthant_near_one_matches_asymptotic() {
        let p = orthant_probability(BivariatePair::new(0.0, 0.999).unwrap(), 1.0).unwrap();
        let ratio = p / orthant_asymptotic(1.0, 0.999);
        assert!((ratio - 1.0).abs() <= 0.02, "{ratio}");
    }

    #[test]
    fn sheppard_values() {
        assert_eq!(sheppard_same_sign(0.0), 0.25);
        assert_eq!(sheppard_same_sign(1.0), 0.5);
        assert!((sheppard_same_sign(0.5) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn sheppard_from_quadrature() {
        for i in 0..100 {
            let rho = -0.999 + 1.998 * (i as f64 + 0.5) / 100.0;
            let pair = BivariatePair::new(0.0, rho).unwrap();
            let same = 0.5 - orthant_probability(pair, 0.0).unwrap();
            assert!((same - sheppard_same_sign(rho)).abs() <= 1e-8, "rho {rho}");
        }
    }

    #[test]
    fn asymptotic_values() {
        assert_eq!(orthant_asymptotic(0.0, 1.0), 0.0);
        assert!((orthant_asymptotic(0.0, 0.0) - 1.0 / (2.0 * PI)).abs() < 1e-16);
        let want = 0.6 / (2.0 * PI) * (-2.0f64).exp();
        assert!((orthant_asymptotic(2.0, 0.8) - want).abs() < 1e-15);
    }

    #[test]
    fn crossing_values() {
        assert!((crossing_probability(0.0, PI).unwrap() - 0.5).abs() < 1e-12);
        let d = 0.01;
        let p = crossing_probability(0.0, d).unwrap();
        assert!((p / (d / (PI * 3f64.sqrt())) - 1.0).abs() <= 0.005);
        let p = crossing_probability(1.0, d).unwrap();
        let want = d * (-0.5f64).exp() / (PI * 3f64.sqrt());
        assert!((p / want - 1.0).abs() <= 0.01);
        assert!(matches!(crossing_probability(0.0, 0.0), Err(Error::Degenerate(_))));
        assert!(crossing_probability(0.0, -1.0).is_err());
    }

    #[test]
    fn crossing_symmetric_in_u() {
        for &u in &[0.3, 1.0, 2.5] {
            for &d in &[0.01, 0.5, 2.0] {
                let p = crossing_probability(u, d).unwrap();
                let q = crossing_probability(-u, d).unwrap();
                assert!((p - q).abs() <= 1e-11, "u={u} d={d}: {p} vs {q}");
            }
        }
    }

    #[test]
    fn density_values() {
        assert!((limiting_density(0.0) - 0.183_776).abs() < 1e-6);
        assert!((limiting_density(1.0) - limiting_density(0.0) * (-0.5f64).exp()).abs() < 1e-16);
        let mut last = limiting_density(0.0);
        for i in 1..60 {
            let v = limiting_density(i as f64 * 0.25);
            assert!(v < last);
            last = v;
        }
        assert!(last < 1e-40);
    }

    #[test]
    fn chf_values() {
        let c = limiting_chf(0.7, 0.3, 0.0, 0.0);
        assert!((c - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let c = limiting_chf(0.0, PI, 1.0, 1.0);
        assert!((c - Complex64::new((-1.0f64).exp(), 0.0)).norm() < 1e-15);
        let c = limiting_chf(1.0, 1.0, 1.0, 0.0);
        let want = Complex64::new(0.0, 1.0).exp() * (-0.5f64).exp();
        assert!((c - want).norm() < 1e-15);
        for i in -20..=20 {
            let l = i as f64 * 0.3;
            let m = limiting_chf(1.3, 0.8, l, 0.0).norm();
            assert!((m - (-l * l / 2.0).exp()).abs() < 1e-15);
        }
    }

    #[test]
    fn rice_values() {
        assert!((rice_expected_roots(1, 0.0, 0.0, 2.0 * PI) - 2.0).abs() < 1e-14);
        let per_n = rice_expected_roots(100_000, 0.0, 0.0, 2.0 * PI) / 100_000.0;
        assert!((per_n - 2.0 / 3f64.sqrt()).abs() < 1e-4);
        let r0 = rice_expected_roots(100, 0.0, 0.0, PI);
        let r1 = rice_expected_roots(100, 1.0, 0.0, PI);
        assert!((r1 / r0 - (-0.5f64).exp()).abs() < 1e-15);
    }
}
