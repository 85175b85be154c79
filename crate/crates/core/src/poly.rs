//! The polynomial model: coefficient laws, samples, and evaluation.
//!
//! Evaluation never calls `sin`/`cos` per term. Sums of the form
//! `Σ p_k cos kt + q_k sin kt` are computed with the Clenshaw recurrence in
//! Reinsch's form, which keeps the error bounded near `t ≡ 0` and `t ≡ π`
//! where the plain three-term recurrence loses digits. Grid evaluation runs
//! several nodes through the recurrence at once.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::synthesis::GridPlan;
use crate::{Error, Result};

const SQRT_3: f64 = 1.732_050_807_568_877_2;

/// Law of the coefficients `A_k`, `B_k`. Every family has mean 0 and variance 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoefficientFamily {
    Gaussian,
    /// ±1 with probability 1/2 each.
    Rademacher,
    /// Uniform on `[-√3, √3]`.
    Uniform,
}

impl CoefficientFamily {
    pub const ALL: [CoefficientFamily; 3] = [Self::Gaussian, Self::Rademacher, Self::Uniform];

    pub fn name(self) -> &'static str {
        match self {
            Self::Gaussian => "gaussian",
            Self::Rademacher => "rademacher",
            Self::Uniform => "uniform",
        }
    }

    pub fn draw<R: Rng + ?Sized>(self, rng: &mut R) -> f64 {
        match self {
            Self::Gaussian => rng.sample(StandardNormal),
            Self::Rademacher => {
                if rng.random::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
            Self::Uniform => (2.0 * rng.random::<f64>() - 1.0) * SQRT_3,
        }
    }
}

impl fmt::Display for CoefficientFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CoefficientFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gaussian" | "normal" => Ok(Self::Gaussian),
            "rademacher" | "bernoulli" => Ok(Self::Rademacher),
            "uniform" => Ok(Self::Uniform),
            _ => Err(Error::InvalidArgument("unknown coefficient family")),
        }
    }
}

/// Draws `A_1..A_n` then `B_1..B_n` from `rng`, in that order.
pub fn sample_coefficients<R: Rng + ?Sized>(
    family: CoefficientFamily,
    n: usize,
    rng: &mut R,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(Error::InvalidArgument("degree n must be at least 1"));
    }
    let a = (0..n).map(|_| family.draw(rng)).collect();
    let b = (0..n).map(|_| family.draw(rng)).collect();
    Ok((a, b))
}

/// `(1/n) Σ_{k=1}^n k^{2j}`, the variance of the `j`-th derivative at any point.
pub fn theoretical_derivative_variance(n: usize, j: u32) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let sum: f64 = (1..=n).map(|k| libm::pow(k as f64, 2.0 * j as f64)).sum();
    sum / n as f64
}

/// Natural magnitude of `X_n` values, `1 + |u| + 2√n`; absolute tolerances scale with it.
pub fn evaluation_scale(u: f64, n: usize) -> f64 {
    1.0 + u.abs() + 2.0 * libm::sqrt(n as f64)
}

/// One realization of `X_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPolySample {
    u: f64,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl TrigPolySample {
    pub fn new(u: f64, a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::InvalidArgument("degree n must be at least 1"));
        }
        if a.len() != b.len() {
            return Err(Error::InvalidArgument("A and B must both have length n"));
        }
        if !u.is_finite() {
            return Err(Error::InvalidArgument("shift u must be finite"));
        }
        Ok(Self { u, a, b })
    }

    pub fn sample<R: Rng + ?Sized>(
        family: CoefficientFamily,
        n: usize,
        u: f64,
        rng: &mut R,
    ) -> Result<Self> {
        let (a, b) = sample_coefficients(family, n, rng)?;
        Self::new(u, a, b)
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    fn scale(&self) -> f64 {
        1.0 / libm::sqrt(self.n() as f64)
    }

    pub(crate) fn series(&self) -> SeriesRef<'_> {
        SeriesRef {
            cos_coef: &self.a,
            sin_coef: &self.b,
            scale: self.scale(),
            offset: self.u,
        }
    }

    pub fn evaluate(&self, t: f64) -> f64 {
        self.series().evaluate(t)
    }

    /// `X_n^{(j)}(t)`; `j = 0` is [`evaluate`](Self::evaluate).
    pub fn evaluate_derivative(&self, j: u32, t: f64) -> f64 {
        if j == 0 {
            return self.evaluate(t);
        }
        self.derivative(j).evaluate(t)
    }

    /// Coefficients of the `j`-th derivative, for repeated evaluation.
    ///
    /// `d^j/dt^j cos(kt) = k^j cos(kt + jπ/2)` and likewise for `sin`, so the
    /// derivative is again a trigonometric sum whose coefficient pair is a
    /// quarter-turn rotation of `(A_k, B_k)` scaled by `k^j`.
    pub fn derivative(&self, j: u32) -> Derivative {
        let n = self.n();
        let mut cos_coef = Vec::with_capacity(n);
        let mut sin_coef = Vec::with_capacity(n);
        for (idx, (&ak, &bk)) in self.a.iter().zip(&self.b).enumerate() {
            let w = libm::pow((idx + 1) as f64, j as f64);
            let (p, q) = match j % 4 {
                0 => (ak, bk),
                1 => (bk, -ak),
                2 => (-ak, -bk),
                _ => (-bk, ak),
            };
            cos_coef.push(w * p);
            sin_coef.push(w * q);
        }
        Derivative {
            order: j,
            offset: if j == 0 { self.u } else { 0.0 },
            scale: self.scale(),
            cos_coef,
            sin_coef,
        }
    }

    /// Values at `t0 + i·step` for `i < count`.
    pub fn evaluate_on_grid(&self, t0: f64, step: f64, count: usize) -> Result<GridEvaluation> {
        let values = self.series().evaluate_grid(t0, step, count)?;
        Ok(GridEvaluation { t0, step, values })
    }
}

/// Precomputed `j`-th derivative of a sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Derivative {
    order: u32,
    offset: f64,
    scale: f64,
    cos_coef: Vec<f64>,
    sin_coef: Vec<f64>,
}

impl Derivative {
    pub fn order(&self) -> u32 {
        self.order
    }

    pub(crate) fn series(&self) -> SeriesRef<'_> {
        SeriesRef {
            cos_coef: &self.cos_coef,
            sin_coef: &self.sin_coef,
            scale: self.scale,
            offset: self.offset,
        }
    }

    pub fn evaluate(&self, t: f64) -> f64 {
        self.series().evaluate(t)
    }

    pub fn evaluate_on_grid(&self, t0: f64, step: f64, count: usize) -> Result<GridEvaluation> {
        let values = self.series().evaluate_grid(t0, step, count)?;
        Ok(GridEvaluation { t0, step, values })
    }
}

/// Values of a series on the uniform grid `t0 + i·step`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridEvaluation {
    pub t0: f64,
    pub step: f64,
    pub values: Vec<f64>,
}

impl GridEvaluation {
    pub fn count(&self) -> usize {
        self.values.len()
    }

    pub fn node(&self, i: usize) -> f64 {
        self.t0 + i as f64 * self.step
    }
}

/// `offset + scale · Σ_{k=1}^n (cos_coef[k-1] cos kt + sin_coef[k-1] sin kt)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SeriesRef<'a> {
    pub cos_coef: &'a [f64],
    pub sin_coef: &'a [f64],
    pub scale: f64,
    pub offset: f64,
}

impl SeriesRef<'_> {
    pub fn evaluate(&self, t: f64) -> f64 {
        let [[v]] = clenshaw::<1, 1>(&[Phase::new(t)], [*self]);
        v
    }

    pub fn evaluate_grid(&self, t0: f64, step: f64, count: usize) -> Result<Vec<f64>> {
        check_grid(t0, step, count)?;
        if prefers_synthesis(self.cos_coef.len(), count) {
            return GridPlan::new(self.cos_coef.len(), t0, step, count)?.synthesize(*self);
        }
        let mut out = Vec::with_capacity(count);
        for_each_grid_block::<1>(t0, step, count, [*self], |vals| out.push(vals[0]))?;
        Ok(out)
    }
}

// Below this much work (degree × nodes) the per-node recurrence beats
// setting up an FFT plan.
const SYNTHESIS_MIN_WORK: usize = 1 << 16;

pub(crate) fn prefers_synthesis(degree: usize, count: usize) -> bool {
    degree >= 32 && degree.saturating_mul(count) >= SYNTHESIS_MIN_WORK
}

/// Two series on the same grid in one sweep (a function and its derivative).
pub(crate) fn evaluate_grid_pair(
    f: SeriesRef<'_>,
    df: SeriesRef<'_>,
    t0: f64,
    step: f64,
    count: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut values = Vec::with_capacity(count);
    let mut slopes = Vec::with_capacity(count);
    for_each_grid_block::<2>(t0, step, count, [f, df], |vals| {
        values.push(vals[0]);
        slopes.push(vals[1]);
    })?;
    Ok((values, slopes))
}

pub(crate) fn check_grid(t0: f64, step: f64, count: usize) -> Result<()> {
    if count == 0 {
        return Err(Error::InvalidArgument("grid needs at least one node"));
    }
    if !t0.is_finite() {
        return Err(Error::InvalidArgument("grid origin must be finite"));
    }
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::InvalidArgument("grid step must be positive and finite"));
    }
    if !(t0 + (count - 1) as f64 * step).is_finite() {
        return Err(Error::InvalidArgument("grid extent overflows"));
    }
    Ok(())
}

const LANES: usize = 4;

fn for_each_grid_block<const S: usize>(
    t0: f64,
    step: f64,
    count: usize,
    series: [SeriesRef<'_>; S],
    mut sink: impl FnMut([f64; S]),
) -> Result<()> {
    check_grid(t0, step, count)?;
    let node = |i: usize| t0 + i as f64 * step;
    let mut i = 0;
    while i + LANES <= count {
        let phases: [Phase; LANES] = core::array::from_fn(|l| Phase::new(node(i + l)));
        for vals in clenshaw::<LANES, S>(&phases, series) {
            sink(vals);
        }
        i += LANES;
    }
    while i < count {
        let [vals] = clenshaw::<1, S>(&[Phase::new(node(i))], series);
        sink(vals);
        i += 1;
    }
    Ok(())
}

/// Per-node constants of the Reinsch-modified Clenshaw recurrence.
///
/// With `b_k = c_k + 2cos(t) b_{k+1} - b_{k+2}`, the auxiliary sequence is
/// `x_k = b_k - sign·b_{k+1}` and satisfies
/// `x_k = c_k + sign·x_{k+1} + gamma·b_{k+1}`, `b_k = x_k + sign·b_{k+1}`,
/// where `gamma = -4 sin²(t/2)` (`sign = 1`, used when `cos t ≥ 0`) or
/// `gamma = 4 cos²(t/2)` (`sign = -1`). Then
/// `Σ c_k cos kt = sign·x_1 + gamma·b_1/2` and `Σ c_k sin kt = sin(t)·b_1`.
#[derive(Debug, Clone, Copy)]
struct Phase {
    sign: f64,
    gamma: f64,
    sin_t: f64,
}

impl Phase {
    fn new(t: f64) -> Self {
        let (sin_t, cos_t) = libm::sincos(t);
        let (sin_half, cos_half) = libm::sincos(0.5 * t);
        if cos_t >= 0.0 {
            Self {
                sign: 1.0,
                gamma: -4.0 * sin_half * sin_half,
                sin_t,
            }
        } else {
            Self {
                sign: -1.0,
                gamma: 4.0 * cos_half * cos_half,
                sin_t,
            }
        }
    }
}

#[inline]
fn clenshaw<const L: usize, const S: usize>(
    phases: &[Phase; L],
    series: [SeriesRef<'_>; S],
) -> [[f64; S]; L] {
    let sign: [f64; L] = core::array::from_fn(|l| phases[l].sign);
    let gamma: [f64; L] = core::array::from_fn(|l| phases[l].gamma);
    let mut out = [[0.0; S]; L];
    for (s, ser) in series.iter().enumerate() {
        let n = ser.cos_coef.len().min(ser.sin_coef.len());
        let (pc, ps) = (&ser.cos_coef[..n], &ser.sin_coef[..n]);
        let mut xc = [0.0; L];
        let mut bc = [0.0; L];
        let mut xs = [0.0; L];
        let mut bs = [0.0; L];
        for k in (0..n).rev() {
            let (ck, sk) = (pc[k], ps[k]);
            for l in 0..L {
                xc[l] = ck + sign[l] * xc[l] + gamma[l] * bc[l];
                bc[l] = xc[l] + sign[l] * bc[l];
                xs[l] = sk + sign[l] * xs[l] + gamma[l] * bs[l];
                bs[l] = xs[l] + sign[l] * bs[l];
            }
        }
        for l in 0..L {
            let cos_sum = sign[l] * xc[l] + 0.5 * gamma[l] * bc[l];
            let sin_sum = phases[l].sin_t * bs[l];
            out[l][s] = ser.offset + ser.scale * (cos_sum + sin_sum);
        }
    }
    out
}
