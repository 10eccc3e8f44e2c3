//! Dense numerical check of the algebraic identities satisfied by the block
//! matrices `A_q = (T^q | M T^q | … | M^{n-1} T^q)`.
//!
//! Every `A_q` is materialized from translate/modulate of basis vectors, one
//! `q` at a time, so memory stays at `O(n³)`. Exhaustive column checks run
//! for `n ≤ 16`; above that a seeded sample of `4n` columns is used.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::analysis::rip::partial_shuffle;
use crate::error::{Error, Result};
use crate::operator::inner;
use crate::rng::{substream, tag};
use crate::table::{Table, Value};
use crate::tf::{modulate, tf_shift, translate, Dim, TfIndex};

pub const IDENTITY_TOLERANCE: f64 = 1e-8;
const MAX_N: usize = 64;
const EXHAUSTIVE_MAX_N: usize = 16;
const SPARSITY_TRIALS: u64 = 5;
const PAIR_SAMPLES: usize = 10;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityCheck {
    pub id: &'static str,
    pub n: usize,
    pub max_abs_deviation: f64,
    pub pass: bool,
    /// Where the largest deviation occurred.
    pub location: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub n: usize,
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub const COLUMNS: [&'static str; 4] = ["check_id", "n", "max_abs_deviation", "pass"];

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new(Self::COLUMNS);
        for c in &self.checks {
            t.push(vec![
                c.id.into(),
                c.n.into(),
                c.max_abs_deviation.into(),
                Value::from(if c.pass { "pass" } else { "fail" }),
            ])
            .expect("row width");
        }
        t
    }
}

#[derive(Default)]
struct Worst {
    dev: f64,
    at: String,
}

impl Worst {
    fn see(&mut self, dev: f64, at: impl FnOnce() -> String) {
        if dev > self.dev || (dev.is_nan() && !self.dev.is_nan()) {
            self.dev = dev;
            self.at = at();
        }
    }

    fn finish(self, id: &'static str, n: usize) -> IdentityCheck {
        IdentityCheck {
            id,
            n,
            pass: self.dev <= IDENTITY_TOLERANCE,
            max_abs_deviation: self.dev,
            location: self.at,
        }
    }
}

fn basis(len: usize, i: usize) -> Vec<Complex64> {
    let mut v = vec![ZERO; len];
    v[i] = ONE;
    v
}

/// Column `ℓ·n + k` of `A_q` is `M^ℓ T^q e_k`.
fn dense_a_q(n: usize, q: usize) -> DMatrix<Complex64> {
    let mut a = DMatrix::zeros(n, n * n);
    for ell in 0..n {
        for k in 0..n {
            let col = modulate(&translate(&basis(n, k), q as i64), ell as i64);
            a.column_mut(ell * n + k).copy_from_slice(&col);
        }
    }
    a
}

fn matvec(a: &DMatrix<Complex64>, x: &[Complex64]) -> Vec<Complex64> {
    (0..a.nrows())
        .map(|r| x.iter().enumerate().fold(ZERO, |acc, (j, v)| acc + a[(r, j)] * v))
        .collect()
}

/// `A* v` for `v ∈ ℂⁿ`.
fn adjoint_matvec(a: &DMatrix<Complex64>, v: &[Complex64]) -> Vec<Complex64> {
    (0..a.ncols())
        .map(|j| (0..a.nrows()).fold(ZERO, |acc, r| acc + a[(r, j)].conj() * v[r]))
        .collect()
}

/// Runs the six identity checks at dimension `n` (`2 ≤ n ≤ 64`):
///
/// * `aq_basis`: `A_q e_λ = π(λ) e_q`
/// * `aq_gram_sum`: `Σ_q A_q* A_q = n I`
/// * `aq_projection_sum`: `Σ_q A_q P_λ A_q* = I`
/// * `sparsity_bound`: `Σ_{q,q'} |x* A_{q'}* A_q y|² ≤ n ‖x‖₀ ‖x‖₂² ‖y‖₂²`
/// * `bilinear_unitary`: `B(e_λ', e_λ)* B(e_λ', e_λ) = I`
/// * `bilinear_frobenius`: `‖B(e_λ', e_λ)‖_F² = n`
pub fn verify_identities(n: usize) -> Result<IdentityReport> {
    let n = Dim::new(n)?.n();
    if n > MAX_N {
        return Err(Error::Resource(format!("dense identity verification supports n <= {MAX_N}, got {n}")));
    }
    let big_n = n * n;
    let mut rng = substream(n as u64, &[tag::PROBE]);

    let columns: Vec<usize> = if n <= EXHAUSTIVE_MAX_N {
        (0..big_n).collect()
    } else {
        let mut c = partial_shuffle(&mut rng, big_n, 4 * n);
        c.sort_unstable();
        c
    };

    // Random sparse x and dense y for the sparsity bound.
    let sparsity = 3.min(big_n);
    let probes: Vec<(Vec<Complex64>, Vec<Complex64>)> = (0..SPARSITY_TRIALS)
        .map(|_| {
            let mut x = vec![ZERO; big_n];
            for i in partial_shuffle(&mut rng, big_n, sparsity) {
                x[i] = Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
            }
            let y = (0..big_n)
                .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
                .collect();
            (x, y)
        })
        .collect();

    // Index pairs (λ', λ); the first shares its translation.
    let mut pairs: Vec<(usize, usize)> = vec![(0, n.min(big_n - 1))];
    while pairs.len() < PAIR_SAMPLES {
        let p = partial_shuffle(&mut rng, big_n, 2);
        pairs.push((p[0], p[1]));
    }

    let mut basis_check = Worst::default();
    let mut gram_cols: Vec<Vec<Complex64>> = vec![vec![ZERO; big_n]; columns.len()];
    let mut proj: Vec<DMatrix<Complex64>> = vec![DMatrix::zeros(n, n); columns.len()];
    let mut ax: Vec<Vec<Vec<Complex64>>> = vec![Vec::with_capacity(n); probes.len()];
    let mut ay: Vec<Vec<Vec<Complex64>>> = vec![Vec::with_capacity(n); probes.len()];
    // A_q e_λ for every λ appearing in a pair, per q.
    let mut pair_cols: Vec<(Vec<Vec<Complex64>>, Vec<Vec<Complex64>>)> =
        vec![(Vec::with_capacity(n), Vec::with_capacity(n)); pairs.len()];

    for q in 0..n {
        let a = dense_a_q(n, q);
        let e_q = basis(n, q);
        for col in 0..big_n {
            let lam = TfIndex::from_column(col, n);
            let expected = tf_shift(&e_q, lam);
            for r in 0..n {
                let dev = (a[(r, col)] - expected[r]).norm();
                basis_check.see(dev, || format!("q={q} lambda=({},{}) row={r}", lam.k, lam.ell));
            }
        }
        for (slot, &col) in columns.iter().enumerate() {
            let c: Vec<Complex64> = a.column(col).iter().copied().collect();
            for (acc, v) in gram_cols[slot].iter_mut().zip(adjoint_matvec(&a, &c)) {
                *acc += v;
            }
            let cv = nalgebra::DVector::from_vec(c);
            proj[slot] += &cv * cv.adjoint();
        }
        for (t, (x, y)) in probes.iter().enumerate() {
            ax[t].push(matvec(&a, x));
            ay[t].push(matvec(&a, y));
        }
        for (slot, &(lp, l)) in pairs.iter().enumerate() {
            pair_cols[slot].0.push(a.column(lp).iter().copied().collect());
            pair_cols[slot].1.push(a.column(l).iter().copied().collect());
        }
    }

    let mut gram_check = Worst::default();
    for (slot, &col) in columns.iter().enumerate() {
        for (row, v) in gram_cols[slot].iter().enumerate() {
            let target = if row == col { n as f64 } else { 0.0 };
            let dev = (v - Complex64::new(target, 0.0)).norm();
            gram_check.see(dev, || format!("entry ({row},{col})"));
        }
    }

    let mut proj_check = Worst::default();
    for (slot, &col) in columns.iter().enumerate() {
        let dev = (&proj[slot] - DMatrix::<Complex64>::identity(n, n))
            .iter()
            .fold(0.0f64, |m, z| m.max(z.norm()));
        let lam = TfIndex::from_column(col, n);
        proj_check.see(dev, || format!("lambda=({},{})", lam.k, lam.ell));
    }

    let mut sparse_check = Worst::default();
    for (t, (x, y)) in probes.iter().enumerate() {
        let mut lhs = 0.0;
        for q in 0..n {
            for qp in 0..n {
                // x* A_{q'}* A_q y
                lhs += inner(&ay[t][q], &ax[t][qp]).norm_sqr();
            }
        }
        let l0 = x.iter().filter(|z| **z != ZERO).count() as f64;
        let nx = x.iter().map(|z| z.norm_sqr()).sum::<f64>();
        let ny = y.iter().map(|z| z.norm_sqr()).sum::<f64>();
        let rhs = n as f64 * l0 * nx * ny;
        sparse_check.see((lhs - rhs).max(0.0), || format!("probe {t}: lhs={lhs:e} rhs={rhs:e}"));
    }

    let mut unitary_check = Worst::default();
    let mut frob_check = Worst::default();
    for (slot, &(lp, l)) in pairs.iter().enumerate() {
        let (cols_lp, cols_l) = &pair_cols[slot];
        let b = DMatrix::from_fn(n, n, |qp, q| inner(&cols_l[q], &cols_lp[qp]));
        let where_ = || {
            let (a, b) = (TfIndex::from_column(lp, n), TfIndex::from_column(l, n));
            format!("lambda'=({},{}) lambda=({},{})", a.k, a.ell, b.k, b.ell)
        };
        let dev = (b.adjoint() * &b - DMatrix::<Complex64>::identity(n, n))
            .iter()
            .fold(0.0f64, |m, z| m.max(z.norm()));
        unitary_check.see(dev, where_);
        let f2: f64 = b.iter().map(|z| z.norm_sqr()).sum();
        frob_check.see((f2 - n as f64).abs(), where_);
    }

    Ok(IdentityReport {
        n,
        checks: vec![
            basis_check.finish("aq_basis", n),
            gram_check.finish("aq_gram_sum", n),
            proj_check.finish("aq_projection_sum", n),
            sparse_check.finish("sparsity_bound", n),
            unitary_check.finish("bilinear_unitary", n),
            frob_check.finish("bilinear_frobenius", n),
        ],
    })
}
