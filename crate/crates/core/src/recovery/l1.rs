use std::time::Instant;

use num_complex::Complex64;

use super::{ensure_finite, finish, zero_result, Algorithm, RecoveryOptions, RecoveryResult};
use crate::error::{Error, Result};
use crate::operator::{GaborOperator, SparseVector};
use crate::tf::norm2;

/// Entries below this fraction of `‖x̂‖_∞` are zeroed in the returned vector.
pub const RESPARSIFY_RATIO: f64 = 1e-8;

/// Soft-threshold level relative to `‖Ψ* y‖_∞ / F`.
const THRESHOLD_SCALE: f64 = 1.0;

/// `z ↦ z·max(1 - θ/|z|, 0)`.
pub fn soft_threshold(z: Complex64, theta: f64) -> Complex64 {
    let m = z.norm();
    if m <= theta {
        Complex64::new(0.0, 0.0)
    } else {
        z * (1.0 - theta / m)
    }
}

fn l1(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).sum()
}

/// `min ‖z‖₁` subject to `Ψ z = y` by ADMM: Euclidean projection onto the
/// affine constraint, complex soft thresholding, dual update.
///
/// `ΨΨ* = F·I`, so the projection is `v - Ψ*(Ψv - y)/F` with no linear solve.
/// Since `Ψx = y` after every projection, `‖Ψz - y‖₂ ≤ √F ‖z - x‖₂` bounds
/// the infeasibility of the sparse iterate `z`. The run converges when that
/// bound is below `tol·‖y‖₂` and `‖z‖₁` changes by less than `tol` relative.
/// Hitting `max_iters` returns the last `z` with `converged = false`.
pub fn basis_pursuit(op: &GaborOperator, y: &[Complex64], opts: &RecoveryOptions) -> Result<RecoveryResult> {
    let start = Instant::now();
    Error::check_len(op.n(), y.len())?;
    opts.validate()?;
    ensure_finite(y, 0)?;
    if let Some(w) = &opts.warm_start {
        Error::check_len(op.atoms(), w.len())?;
    }
    let y_norm = norm2(y);
    if y_norm == 0.0 {
        return Ok(zero_result(op, Algorithm::BasisPursuit, start));
    }
    let frame = op.frame_bound();
    let project = |v: &[Complex64]| -> Result<Vec<Complex64>> {
        let mut r = op.synthesis(v)?;
        for (ri, yi) in r.iter_mut().zip(y) {
            *ri -= yi;
        }
        let back = op.analysis(&r)?;
        Ok(v.iter().zip(&back).map(|(a, b)| a - b / frame).collect())
    };

    let min_norm: Vec<Complex64> = op.analysis(y)?.into_iter().map(|z| z / frame).collect();
    let theta = THRESHOLD_SCALE * min_norm.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    let mut z = match &opts.warm_start {
        Some(w) => w.to_dense(),
        None => min_norm,
    };
    let mut u = vec![Complex64::new(0.0, 0.0); z.len()];
    let mut z_l1 = l1(&z);
    let max_iters = opts.iters_for(Algorithm::BasisPursuit);
    let mut converged = false;
    let mut iterations = 0;
    while iterations < max_iters {
        iterations += 1;
        let v: Vec<Complex64> = z.iter().zip(&u).map(|(a, b)| a - b).collect();
        let x = project(&v)?;
        ensure_finite(&x, iterations)?;
        let mut gap = 0.0;
        for i in 0..z.len() {
            let w = x[i] + u[i];
            z[i] = soft_threshold(w, theta);
            u[i] = w - z[i];
            gap += (x[i] - z[i]).norm_sqr();
        }
        let new_l1 = l1(&z);
        let feasible = frame.sqrt() * gap.sqrt() <= opts.tol * y_norm;
        let stagnant = (new_l1 - z_l1).abs() <= opts.tol * new_l1.max(f64::MIN_POSITIVE);
        z_l1 = new_l1;
        if feasible && stagnant {
            converged = true;
            break;
        }
    }
    let cutoff = RESPARSIFY_RATIO * z.iter().fold(0.0f64, |m, v| m.max(v.norm()));
    for v in z.iter_mut() {
        if v.norm() < cutoff {
            *v = Complex64::new(0.0, 0.0);
        }
    }
    finish(op, y, SparseVector::from_dense(&z), iterations, converged, Algorithm::BasisPursuit, start)
}
