use std::time::Instant;

use num_complex::Complex64;

use super::{
    check_inputs, ensure_finite, finish, hard_threshold, least_squares_on_support, relative_change, residual,
    sparse_from_support, top_s_indices, zero_result, Algorithm, RecoveryOptions, RecoveryResult,
};
use crate::error::Result;
use crate::operator::{GaborOperator, SparseVector};
use crate::tf::norm2;

/// `x + μ Ψ*(y - Ψx)` densified, with the residual it was computed from.
fn gradient_step(
    op: &GaborOperator,
    y: &[Complex64],
    x: &SparseVector,
    adaptive: bool,
) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    let r = residual(op, y, x)?;
    let grad = op.analysis(&r)?;
    let mu = if adaptive { normalized_step(op, x, &grad)? } else { 1.0 };
    let mut v = x.to_dense();
    for (vi, gi) in v.iter_mut().zip(&grad) {
        *vi += mu * gi;
    }
    Ok((v, r))
}

/// `‖g_S‖² / ‖Ψ g_S‖²` on the current support, or on the top `n` gradient
/// entries when the iterate is zero.
fn normalized_step(op: &GaborOperator, x: &SparseVector, grad: &[Complex64]) -> Result<f64> {
    let support: Vec<usize> = if x.support().is_empty() {
        top_s_indices(grad, op.n().min(grad.len()))
    } else {
        x.support().to_vec()
    };
    let g_s = SparseVector::from_pairs(grad.len(), support.iter().map(|&i| (i, grad[i])).collect())?;
    let num = g_s.norm2().powi(2);
    let den = norm2(&op.synthesis_sparse(&g_s)?).powi(2);
    Ok(if num > 0.0 && den > 0.0 { num / den } else { 1.0 })
}

/// Iterative hard thresholding `x ← H_s(x + Ψ*(y - Ψx))`.
pub fn iht(op: &GaborOperator, y: &[Complex64], s: usize, opts: &RecoveryOptions) -> Result<RecoveryResult> {
    let start = Instant::now();
    check_inputs(op, y, s, opts)?;
    let y_norm = norm2(y);
    if y_norm == 0.0 {
        return Ok(zero_result(op, Algorithm::Iht, start));
    }
    let mut x = opts.warm_start.clone().unwrap_or_else(|| SparseVector::zeros(op.atoms()));
    let max_iters = opts.iters_for(Algorithm::Iht);
    let mut converged = false;
    let mut iterations = 0;
    loop {
        let (v, r) = gradient_step(op, y, &x, opts.adaptive_step)?;
        ensure_finite(&v, iterations + 1)?;
        if norm2(&r) <= opts.tol * y_norm {
            converged = true;
            break;
        }
        if iterations == max_iters {
            break;
        }
        iterations += 1;
        let next = hard_threshold(&v, s);
        let change = relative_change(&next, &x);
        x = next;
        if change < opts.tol {
            converged = true;
            break;
        }
    }
    finish(op, y, x, iterations, converged, Algorithm::Iht, start)
}

/// Hard thresholding pursuit: the IHT support choice followed by least
/// squares on that support. Also stops when the support repeats.
pub fn htp(op: &GaborOperator, y: &[Complex64], s: usize, opts: &RecoveryOptions) -> Result<RecoveryResult> {
    let start = Instant::now();
    check_inputs(op, y, s, opts)?;
    let y_norm = norm2(y);
    if y_norm == 0.0 {
        return Ok(zero_result(op, Algorithm::Htp, start));
    }
    let len = op.atoms();
    let mut x = opts.warm_start.clone().unwrap_or_else(|| SparseVector::zeros(len));
    let max_iters = opts.iters_for(Algorithm::Htp);
    let mut converged = false;
    let mut iterations = 0;
    let mut previous_support: Option<Vec<usize>> = None;
    loop {
        let (v, r) = gradient_step(op, y, &x, opts.adaptive_step)?;
        ensure_finite(&v, iterations + 1)?;
        if norm2(&r) <= opts.tol * y_norm {
            converged = true;
            break;
        }
        if iterations == max_iters {
            break;
        }
        iterations += 1;
        let support = top_s_indices(&v, s.min(op.n()));
        if previous_support.as_deref() == Some(support.as_slice()) {
            converged = true;
            break;
        }
        let values = least_squares_on_support(op, y, &support)?;
        ensure_finite(&values, iterations)?;
        let next = sparse_from_support(len, &support, &values);
        let change = relative_change(&next, &x);
        x = next;
        previous_support = Some(support);
        if change < opts.tol {
            converged = true;
            break;
        }
    }
    finish(op, y, x, iterations, converged, Algorithm::Htp, start)
}
