use std::time::Instant;

use num_complex::Complex64;

use super::{
    check_inputs, ensure_finite, finish, least_squares_on_support, ranked_indices, relative_change, residual, sparse_from_support,
    top_s_indices, zero_result, Algorithm, RecoveryOptions, RecoveryResult,
};
use crate::error::Result;
use crate::operator::{GaborOperator, SparseVector};
use crate::tf::norm2;

/// Orthogonal matching pursuit: `s` rounds of picking the atom most
/// correlated with the residual, each followed by least squares on the
/// selected set. Stops early once the residual is below `tol·‖y‖`.
pub fn omp(op: &GaborOperator, y: &[Complex64], s: usize, opts: &RecoveryOptions) -> Result<RecoveryResult> {
    let start = Instant::now();
    check_inputs(op, y, s, opts)?;
    let y_norm = norm2(y);
    if y_norm == 0.0 {
        return Ok(zero_result(op, Algorithm::Omp, start));
    }
    let len = op.atoms();
    let rounds = s.min(op.n());
    let mut support: Vec<usize> = Vec::with_capacity(rounds);
    let mut x = SparseVector::zeros(len);
    let mut r = y.to_vec();
    let mut iterations = 0;
    while iterations < rounds && norm2(&r) > opts.tol * y_norm {
        iterations += 1;
        let mut corr = op.analysis(&r)?;
        ensure_finite(&corr, iterations)?;
        for &i in &support {
            corr[i] = Complex64::new(0.0, 0.0);
        }
        let pick = top_s_indices(&corr, 1)[0];
        support.push(pick);
        let values = least_squares_on_support(op, y, &support)?;
        ensure_finite(&values, iterations)?;
        x = sparse_from_support(len, &support, &values);
        r = residual(op, y, &x)?;
    }
    let converged = norm2(&r) <= opts.tol * y_norm;
    finish(op, y, x, iterations, converged, Algorithm::Omp, start)
}

/// CoSaMP: merge the `2s` largest proxy entries with the current support,
/// solve least squares on the union, prune to `s`.
pub fn cosamp(op: &GaborOperator, y: &[Complex64], s: usize, opts: &RecoveryOptions) -> Result<RecoveryResult> {
    let start = Instant::now();
    check_inputs(op, y, s, opts)?;
    let y_norm = norm2(y);
    if y_norm == 0.0 {
        return Ok(zero_result(op, Algorithm::CoSaMP, start));
    }
    let len = op.atoms();
    let n = op.n();
    let s = s.min(n);
    let mut x = opts.warm_start.clone().unwrap_or_else(|| SparseVector::zeros(len));
    let max_iters = opts.iters_for(Algorithm::CoSaMP);
    let mut r = residual(op, y, &x)?;
    let mut converged = norm2(&r) <= opts.tol * y_norm;
    let mut iterations = 0;
    while !converged && iterations < max_iters {
        iterations += 1;
        let proxy = op.analysis(&r)?;
        ensure_finite(&proxy, iterations)?;
        let current = x.support();
        let room = n.saturating_sub(current.len()).min(2 * s);
        let mut merged = current.to_vec();
        merged.extend(
            ranked_indices(&proxy, room + current.len())
                .into_iter()
                .filter(|i| current.binary_search(i).is_err())
                .take(room),
        );
        merged.sort_unstable();
        let b = least_squares_on_support(op, y, &merged)?;
        ensure_finite(&b, iterations)?;
        let mut dense = vec![Complex64::new(0.0, 0.0); len];
        for (&i, &v) in merged.iter().zip(&b) {
            dense[i] = v;
        }
        let keep = top_s_indices(&dense, s);
        let values: Vec<Complex64> = keep.iter().map(|&i| dense[i]).collect();
        let next = sparse_from_support(len, &keep, &values);
        let change = relative_change(&next, &x);
        x = next;
        r = residual(op, y, &x)?;
        converged = norm2(&r) <= opts.tol * y_norm || change < opts.tol;
    }
    finish(op, y, x, iterations, converged, Algorithm::CoSaMP, start)
}
