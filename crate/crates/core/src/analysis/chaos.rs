//! The matrices `B(x)` whose quadratic forms in the window sequence give the
//! restricted isometry deviations of a Gabor synthesis matrix.
//!
//! With `W_{q',q} = A_{q'}* A_q` for `q' ≠ q` (zero on the diagonal),
//! `B(x)_{q',q} = x* W_{q',q} x` and, for a window `g = ε / √n` with
//! `|ε_q| = 1`, `x*(Ψ*Ψ - I)x = (1/n) ε* B(x) ε`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::analysis::rip::hermitian_eigenvalues;
use crate::error::{Error, Result};
use crate::fft::{RustFft, Transform};
use crate::operator::{inner, GaborOperator};
use crate::tf::norm2;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// All `n` vectors `A_q x`, `q = 0..n`, from `n` length-`n` transforms:
/// with `U_j = Σ_ℓ x_(j,ℓ) ω^{ℓ·}`, `(A_q x)_k = U_{k-q}[k]`.
pub fn a_q_vectors(x: &[Complex64], n: usize) -> Result<Vec<Vec<Complex64>>> {
    Error::check_len(n * n, x.len())?;
    let fft = RustFft::new(n);
    let u: Vec<Vec<Complex64>> = (0..n)
        .map(|j| {
            let mut buf: Vec<Complex64> = (0..n).map(|ell| x[ell * n + j]).collect();
            fft.inverse(&mut buf);
            buf
        })
        .collect();
    Ok((0..n)
        .map(|q| (0..n).map(|k| u[(k + n - q) % n][k]).collect())
        .collect())
}

/// `B(x)`: Hermitian, zero diagonal, window independent.
#[derive(Debug, Clone, PartialEq)]
pub struct ChaosMatrix {
    n: usize,
    b: DMatrix<Complex64>,
    source: Vec<Complex64>,
}

impl ChaosMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.b
    }

    pub fn source(&self) -> &[Complex64] {
        &self.source
    }

    /// `ε* B ε`.
    pub fn quadratic_form(&self, eps: &[Complex64]) -> Result<Complex64> {
        Error::check_len(self.n, eps.len())?;
        let mut acc = ZERO;
        for qp in 0..self.n {
            for q in 0..self.n {
                acc += eps[qp].conj() * self.b[(qp, q)] * eps[q];
            }
        }
        Ok(acc)
    }
}

pub fn chaos_matrix(x: &[Complex64], n: usize) -> Result<ChaosMatrix> {
    let v = a_q_vectors(x, n)?;
    let mut b = DMatrix::zeros(n, n);
    for qp in 0..n {
        for q in (qp + 1)..n {
            // (A_{q'} x)* (A_q x)
            let val = inner(&v[q], &v[qp]);
            b[(qp, q)] = val;
            b[(q, qp)] = val.conj();
        }
    }
    Ok(ChaosMatrix { n, b, source: x.to_vec() })
}

/// `B(x, z)_{q',q} = (A_{q'} x)* (A_q z)` on all `(q', q)`, diagonal included.
pub fn bilinear_chaos_matrix(x: &[Complex64], z: &[Complex64], n: usize) -> Result<DMatrix<Complex64>> {
    let vx = a_q_vectors(x, n)?;
    let vz = a_q_vectors(z, n)?;
    Ok(DMatrix::from_fn(n, n, |qp, q| inner(&vz[q], &vx[qp])))
}

/// Both sides of `x*(Ψ*Ψ - I)x = (1/n) ε* B(x) ε`, real parts.
///
/// Requires a window whose sequence satisfies `|ε_q| = 1`.
pub fn chaos_rip_link(op: &GaborOperator, x: &[Complex64]) -> Result<(f64, f64)> {
    let n = op.n();
    Error::check_len(n * n, x.len())?;
    let window = op.window();
    if !window.has_unimodular_sequence() {
        return Err(Error::InvalidParameter(format!(
            "the chaos representation needs |eps_q| = 1; {} windows do not satisfy it",
            window.kind()
        )));
    }
    let y = op.synthesis(x)?;
    let lhs = norm2(&y).powi(2) - norm2(x).powi(2);
    let rhs = chaos_matrix(x, n)?.quadratic_form(window.epsilon())?.re / n as f64;
    Ok((lhs, rhs))
}

/// `Σ |Re x_λ| + |Im x_λ|`.
pub fn star_norm(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.re.abs() + z.im.abs()).sum()
}

/// `d₁ = ‖B(x) - B(y)‖_{2→2}` and `d₂ = ‖B(x) - B(y)‖_F`.
///
/// `B(x) - B(y)` is Hermitian, so the operator norm is its largest absolute
/// eigenvalue.
pub fn metric_d1_d2(x: &[Complex64], y: &[Complex64], n: usize) -> Result<(f64, f64)> {
    Error::check_len(n * n, y.len())?;
    let d = chaos_matrix(x, n)?.b - chaos_matrix(y, n)?.b;
    let d2 = d.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let ev = hermitian_eigenvalues(d);
    let d1 = ev.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    Ok((d1.min(d2), d2))
}
