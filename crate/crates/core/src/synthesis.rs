//! Grid synthesis of trigonometric sums by the chirp-z transform.
//!
//! For nodes `t_j = t0 + j·h` the sum `S_j = Σ_{k=1}^n c_k e^{ik t_j}` is a
//! chirp-z transform. Writing `kj = (k² + j² - (j-k)²)/2` turns it into a
//! linear convolution of `c_k e^{ik t0} e^{ihk²/2}` with the chirp
//! `e^{-ihm²/2}`, followed by multiplication with `e^{ihj²/2}`. The
//! convolution runs through a power-of-two FFT, so a grid of `M` nodes costs
//! `O((M+n) log(M+n))` instead of `O(Mn)`. A [`GridPlan`] holds everything
//! that depends only on the grid and the degree and is reused across samples.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::poly::{check_grid, Derivative, GridEvaluation, SeriesRef, TrigPolySample};
use crate::{Error, Result};

fn cis(angle: f64) -> Complex64 {
    let (s, c) = libm::sincos(angle);
    Complex64::new(c, s)
}

/// In-place iterative radix-2 FFT.
#[derive(Debug, Clone)]
struct Fft {
    len: usize,
    // e^{-2πik/len} for k < len/2
    twiddles: Vec<Complex64>,
}

impl Fft {
    fn new(len: usize) -> Self {
        debug_assert!(len.is_power_of_two());
        let twiddles = (0..len / 2)
            .map(|k| cis(-2.0 * PI * k as f64 / len as f64))
            .collect();
        Self { len, twiddles }
    }

    fn forward(&self, buf: &mut [Complex64]) {
        self.transform(buf, false);
    }

    /// Unnormalized inverse.
    fn inverse(&self, buf: &mut [Complex64]) {
        self.transform(buf, true);
    }

    fn transform(&self, buf: &mut [Complex64], inverse: bool) {
        let n = self.len;
        debug_assert_eq!(buf.len(), n);
        let bits = n.trailing_zeros();
        if bits == 0 {
            return;
        }
        for i in 0..n {
            let j = i.reverse_bits() >> (usize::BITS - bits);
            if i < j {
                buf.swap(i, j);
            }
        }
        let mut size = 2;
        while size <= n {
            let half = size / 2;
            let stride = n / size;
            for start in (0..n).step_by(size) {
                for k in 0..half {
                    let mut w = self.twiddles[k * stride];
                    if inverse {
                        w = w.conj();
                    }
                    let a = buf[start + k];
                    let b = buf[start + k + half] * w;
                    buf[start + k] = a + b;
                    buf[start + k + half] = a - b;
                }
            }
            size *= 2;
        }
    }
}

/// Precomputed chirp-z synthesis for degree-`n` sums on a fixed uniform grid.
#[derive(Debug, Clone)]
pub struct GridPlan {
    degree: usize,
    t0: f64,
    step: f64,
    count: usize,
    fft: Fft,
    // index k-1: e^{ik t0} e^{ihk²/2}
    pre: Vec<Complex64>,
    // index j: e^{ihj²/2}/len
    post: Vec<Complex64>,
    kernel_hat: Vec<Complex64>,
}

impl GridPlan {
    pub fn new(degree: usize, t0: f64, step: f64, count: usize) -> Result<Self> {
        check_grid(t0, step, count)?;
        if degree == 0 {
            return Err(Error::InvalidArgument("degree n must be at least 1"));
        }
        let len = (count + degree + 1).next_power_of_two();
        let fft = Fft::new(len);
        let half_step = 0.5 * step;
        let sq = |m: usize| (m as f64) * (m as f64);
        let pre = (1..=degree)
            .map(|k| cis(k as f64 * t0 + half_step * sq(k)))
            .collect();
        let scale = 1.0 / len as f64;
        let post = (0..count).map(|j| cis(half_step * sq(j)) * scale).collect();
        // kernel g_m = e^{-ihm²/2} for m in [-degree, count-1], stored at m mod len
        let mut kernel = vec![Complex64::new(0.0, 0.0); len];
        for (m, g) in kernel[..count].iter_mut().enumerate() {
            *g = cis(-half_step * sq(m));
        }
        for m in 1..=degree {
            kernel[len - m] = cis(-half_step * sq(m));
        }
        fft.forward(&mut kernel);
        Ok(Self {
            degree,
            t0,
            step,
            count,
            fft,
            pre,
            post,
            kernel_hat: kernel,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub(crate) fn synthesize(&self, series: SeriesRef<'_>) -> Result<Vec<f64>> {
        if series.cos_coef.len() != self.degree || series.sin_coef.len() != self.degree {
            return Err(Error::InvalidArgument("plan degree does not match the polynomial"));
        }
        let mut buf = vec![Complex64::new(0.0, 0.0); self.fft.len];
        for (k, ((&p, &q), &w)) in series.cos_coef.iter().zip(series.sin_coef).zip(&self.pre).enumerate() {
            // Re((p - iq) e^{ikt}) = p cos kt + q sin kt
            buf[k + 1] = Complex64::new(p, -q) * w;
        }
        self.fft.forward(&mut buf);
        for (x, &g) in buf.iter_mut().zip(&self.kernel_hat) {
            *x *= g;
        }
        self.fft.inverse(&mut buf);
        Ok(buf[..self.count]
            .iter()
            .zip(&self.post)
            .map(|(&z, &w)| series.offset + series.scale * (z * w).re)
            .collect())
    }

    pub fn evaluate(&self, poly: &TrigPolySample) -> Result<GridEvaluation> {
        Ok(GridEvaluation {
            t0: self.t0,
            step: self.step,
            values: self.synthesize(poly.series())?,
        })
    }

    pub fn evaluate_derivative(&self, derivative: &Derivative) -> Result<GridEvaluation> {
        Ok(GridEvaluation {
            t0: self.t0,
            step: self.step,
            values: self.synthesize(derivative.series())?,
        })
    }
}
