//! Normal distribution helpers and binomial confidence intervals.

use core::f64::consts::{FRAC_1_SQRT_2, PI};

/// Two-sided 95% standard-normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

pub fn normal_pdf(x: f64) -> f64 {
    libm::exp(-0.5 * x * x) / libm::sqrt(2.0 * PI)
}

/// `P(N(0,1) ≤ x)`.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// `P(N(0,1) ≥ x)`, accurate in the far right tail.
pub fn normal_sf(x: f64) -> f64 {
    0.5 * libm::erfc(x * FRAC_1_SQRT_2)
}

/// Wilson score interval for `successes` out of `trials` at quantile `z`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * libm::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    let lo = if successes == 0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if successes >= trials { 1.0 } else { (centre + half).min(1.0) };
    (lo, hi)
}

/// Mean and standard error of the mean from exact integer moments.
///
/// `sum` and `sum_sq` are `Σx` and `Σx²` over `count` integer observations.
/// The standard error is `None` for fewer than two observations.
pub fn integer_mean_stderr(sum: i128, sum_sq: i128, count: u64) -> (f64, Option<f64>) {
    if count == 0 {
        return (f64::NAN, None);
    }
    let n = count as i128;
    let mean = sum as f64 / count as f64;
    if count < 2 {
        return (mean, None);
    }
    // n·Σx² - (Σx)² is exact in i128 for any realistic run.
    let centered = n * sum_sq - sum * sum;
    let var = centered as f64 / (n as f64 * (n - 1) as f64);
    (mean, Some(libm::sqrt(var.max(0.0) / count as f64)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cdf_values() {
        assert_eq!(normal_cdf(0.0), 0.5);
        assert!((normal_cdf(1.959_963_984_540_054) - 0.975).abs() < 1e-15);
        assert!((normal_sf(10.0) - 7.619_853_024_160_527e-24).abs() < 1e-36);
    }

    #[test]
    fn wilson_brackets_estimate() {
        let (lo, hi) = wilson_interval(30, 100, Z95);
        assert!(lo < 0.3 && 0.3 < hi);
        assert!((lo - 0.219_1).abs() < 1e-3 && (hi - 0.396_1).abs() < 1e-3);
        let (lo, hi) = wilson_interval(0, 1000, Z95);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.005);
    }

    #[test]
    fn integer_moments() {
        let xs = [4i128, 2, 6, 4];
        let s: i128 = xs.iter().sum();
        let s2: i128 = xs.iter().map(|x| x * x).sum();
        let (m, se) = integer_mean_stderr(s, s2, 4);
        assert_eq!(m, 4.0);
        // sample variance 8/3
        assert!((se.unwrap() - (8.0f64 / 3.0 / 4.0).sqrt()).abs() < 1e-15);
        assert_eq!(integer_mean_stderr(3, 9, 1), (3.0, None));
    }
}
