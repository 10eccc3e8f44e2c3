//! Length-`n` discrete Fourier transforms behind a small trait.
//!
//! Sign convention: `forward` computes `X_m = Σ_q x_q e^{-2πi mq/n}` and
//! `inverse` computes `x_q = Σ_m X_m e^{+2πi mq/n}`, both unnormalized.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

pub trait Transform: Send + Sync {
    fn len(&self) -> usize;
    fn forward(&self, buf: &mut [Complex64]);
    fn inverse(&self, buf: &mut [Complex64]);
}

/// Mixed-radix / Bluestein FFT from `rustfft`; any length.
#[derive(Clone)]
pub struct RustFft {
    n: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl RustFft {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            n,
            fwd: planner.plan_fft_forward(n),
            inv: planner.plan_fft_inverse(n),
        }
    }
}

impl Transform for RustFft {
    fn len(&self) -> usize {
        self.n
    }

    fn forward(&self, buf: &mut [Complex64]) {
        self.fwd.process(buf);
    }

    fn inverse(&self, buf: &mut [Complex64]) {
        self.inv.process(buf);
    }
}

/// Direct `O(n²)` evaluation; the reference the FFT path is tested against.
#[derive(Clone)]
pub struct NaiveDft {
    roots: Vec<Complex64>,
}

impl NaiveDft {
    pub fn new(n: usize) -> Self {
        let roots = (0..n)
            .map(|m| Complex64::from_polar(1.0, 2.0 * PI * m as f64 / n as f64))
            .collect();
        Self { roots }
    }

    fn apply(&self, buf: &mut [Complex64], sign: i64) {
        let n = self.roots.len();
        let out: Vec<Complex64> = (0..n)
            .map(|m| {
                buf.iter().enumerate().fold(Complex64::new(0.0, 0.0), |acc, (q, &x)| {
                    let e = (sign * (m * q % n) as i64).rem_euclid(n as i64) as usize;
                    acc + x * self.roots[e]
                })
            })
            .collect();
        buf.copy_from_slice(&out);
    }
}

impl Transform for NaiveDft {
    fn len(&self) -> usize {
        self.roots.len()
    }

    fn forward(&self, buf: &mut [Complex64]) {
        self.apply(buf, -1);
    }

    fn inverse(&self, buf: &mut [Complex64]) {
        self.apply(buf, 1);
    }
}
