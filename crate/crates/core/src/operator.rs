//! The Gabor synthesis operator `Ψ_g ∈ ℂ^{n×n²}` and its building blocks.
//!
//! Column `ℓ·n + k` of `Ψ_g` holds the atom `π(k, ℓ) g`, so the first `n`
//! columns are the cyclic translates of `g`, the next `n` are their first
//! modulations, and so on. Forward and adjoint products run in
//! `O(n² log n)`: one length-`n` transform per translation `k`.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft::{RustFft, Transform};
use crate::tf::{norm2, roots_of_unity, tf_shift, TfIndex, Window};

/// Largest `n` [`GaborOperator::build_dense`] materializes without an override.
pub const DEFAULT_DENSE_LIMIT: usize = 256;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// A vector of length `N` stored by its support.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseVector {
    len: usize,
    support: Vec<usize>,
    values: Vec<Complex64>,
}

impl SparseVector {
    pub fn zeros(len: usize) -> Self {
        SparseVector { len, support: Vec::new(), values: Vec::new() }
    }

    /// Builds from `(index, value)` pairs in any order. Indices must be
    /// distinct and below `len`. Explicit zeros are kept on the support.
    pub fn from_pairs(len: usize, mut pairs: Vec<(usize, Complex64)>) -> Result<Self> {
        pairs.sort_by_key(|p| p.0);
        for w in pairs.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidSupport(format!("duplicate index {}", w[0].0)));
            }
        }
        if let Some(&(i, _)) = pairs.last() {
            if i >= len {
                return Err(Error::InvalidSupport(format!("index {i} out of range for length {len}")));
            }
        }
        let (support, values) = pairs.into_iter().unzip();
        Ok(SparseVector { len, support, values })
    }

    /// Keeps the entries that are exactly nonzero.
    pub fn from_dense(x: &[Complex64]) -> Self {
        let (support, values) = x
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != ZERO)
            .map(|(i, &v)| (i, v))
            .unzip();
        SparseVector { len: x.len(), support, values }
    }

    pub fn to_dense(&self) -> Vec<Complex64> {
        let mut out = vec![ZERO; self.len];
        for (&i, &v) in self.support.iter().zip(&self.values) {
            out[i] = v;
        }
        out
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        self.support.iter().copied().zip(self.values.iter().copied())
    }

    /// Number of nonzero stored values.
    pub fn l0(&self) -> usize {
        self.values.iter().filter(|v| **v != ZERO).count()
    }

    pub fn norm2(&self) -> f64 {
        norm2(&self.values)
    }

    /// Membership in `T_s = {‖x‖₂ = 1, ‖x‖₀ ≤ s}`, norm checked to `1e-12`.
    pub fn in_unit_sparse_set(&self, s: usize) -> bool {
        self.l0() <= s && (self.norm2() - 1.0).abs() <= 1e-12
    }
}

/// Implicit `n × n²` Gabor synthesis matrix for one window.
#[derive(Clone)]
pub struct GaborOperator {
    window: Window,
    roots: Vec<Complex64>,
    fft: Arc<dyn Transform>,
}

impl std::fmt::Debug for GaborOperator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GaborOperator")
            .field("n", &self.n())
            .field("window", &self.window.kind())
            .field("seed", &self.window.seed())
            .finish()
    }
}

impl GaborOperator {
    pub fn new(window: Window) -> Self {
        let fft = Arc::new(RustFft::new(window.n()));
        Self::with_transform(window, fft)
    }

    /// Uses a specific transform backend (e.g. [`crate::fft::NaiveDft`]).
    pub fn with_transform(window: Window, fft: Arc<dyn Transform>) -> Self {
        assert_eq!(fft.len(), window.n(), "transform length must equal n");
        let roots = roots_of_unity(window.n());
        GaborOperator { window, roots, fft }
    }

    pub fn n(&self) -> usize {
        self.window.n()
    }

    /// `N = n²`.
    pub fn atoms(&self) -> usize {
        self.window.dim().atoms()
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn g(&self) -> &[Complex64] {
        self.window.g()
    }

    /// `ΨΨ* = (n‖g‖²) I` for the full Gabor system; this is that constant.
    pub fn frame_bound(&self) -> f64 {
        self.n() as f64 * norm2(self.g()).powi(2)
    }

    /// The atom `π(λ) g`.
    pub fn atom(&self, lambda: TfIndex) -> Vec<Complex64> {
        tf_shift(self.g(), lambda)
    }

    pub fn atom_at(&self, column: usize) -> Vec<Complex64> {
        self.atom(TfIndex::from_column(column, self.n()))
    }

    /// Dense `n × n²` matrix, guarded at `n ≤ 256`.
    pub fn build_dense(&self) -> Result<DMatrix<Complex64>> {
        self.build_dense_with_limit(DEFAULT_DENSE_LIMIT)
    }

    pub fn build_dense_with_limit(&self, max_n: usize) -> Result<DMatrix<Complex64>> {
        let n = self.n();
        if n > max_n {
            return Err(Error::Resource(format!(
                "dense Gabor matrix for n = {n} exceeds the limit n <= {max_n}"
            )));
        }
        let mut m = DMatrix::zeros(n, n * n);
        for col in 0..n * n {
            m.column_mut(col).copy_from_slice(&self.atom_at(col));
        }
        Ok(m)
    }

    /// `y = Ψ x` for a dense coefficient vector of length `n²`.
    pub fn synthesis(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = self.n();
        Error::check_len(n * n, x.len())?;
        let g = self.g();
        let mut y = vec![ZERO; n];
        let mut buf = vec![ZERO; n];
        for k in 0..n {
            let mut any = false;
            for ell in 0..n {
                buf[ell] = x[ell * n + k];
                any |= buf[ell] != ZERO;
            }
            if !any {
                continue;
            }
            // u_k[q] = Σ_ℓ x_(k,ℓ) ω^{ℓq}
            self.fft.inverse(&mut buf);
            for q in 0..n {
                y[q] += buf[q] * g[(q + n - k) % n];
            }
        }
        Ok(y)
    }

    /// `y = Ψ x` for a sparse `x`; sums atoms directly when `s ≤ n / ln n`.
    pub fn synthesis_sparse(&self, x: &SparseVector) -> Result<Vec<Complex64>> {
        let n = self.n();
        Error::check_len(n * n, x.len())?;
        if (x.support().len() as f64) <= n as f64 / (n as f64).ln() {
            Ok(self.sum_atoms(x.iter()))
        } else {
            self.synthesis(&x.to_dense())
        }
    }

    /// `Σ x_λ π(λ) g` by explicit accumulation, `O(s·n)`.
    pub fn sum_atoms(&self, entries: impl Iterator<Item = (usize, Complex64)>) -> Vec<Complex64> {
        let n = self.n();
        let g = self.g();
        let mut y = vec![ZERO; n];
        for (col, c) in entries {
            let TfIndex { k, ell } = TfIndex::from_column(col, n);
            for q in 0..n {
                y[q] += c * self.roots[(ell * q) % n] * g[(q + n - k) % n];
            }
        }
        y
    }

    /// `Ψ* y`: entry `ℓ·n + k` is `⟨y, π(k, ℓ) g⟩ = Σ_q y_q conj(g_{q-k}) ω^{-ℓq}`.
    pub fn analysis(&self, y: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = self.n();
        Error::check_len(n, y.len())?;
        let g = self.g();
        let mut out = vec![ZERO; n * n];
        let mut buf = vec![ZERO; n];
        for k in 0..n {
            for q in 0..n {
                buf[q] = y[q] * g[(q + n - k) % n].conj();
            }
            self.fft.forward(&mut buf);
            for ell in 0..n {
                out[ell * n + k] = buf[ell];
            }
        }
        Ok(out)
    }

    /// `A_q z` with `A_q = (T^q | M T^q | … | M^{n-1} T^q)`:
    /// `(A_q z)_k = Σ_ℓ z_((k-q) mod n, ℓ) ω^{ℓk}`.
    pub fn a_q_apply(&self, q: usize, z: &[Complex64]) -> Result<Vec<Complex64>> {
        a_q_apply(self.n(), q, z)
    }

    /// `⟨π(λ) g, π(λ') g⟩`, linear in the first argument.
    pub fn atom_inner_product(&self, lambda: TfIndex, lambda_prime: TfIndex) -> Result<Complex64> {
        let n = self.n();
        for l in [lambda, lambda_prime] {
            if l.k >= n || l.ell >= n {
                return Err(Error::InvalidParameter(format!("index {l:?} outside Z_{n} x Z_{n}")));
            }
        }
        Ok(inner(&self.atom(lambda), &self.atom(lambda_prime)))
    }

    /// Discrete ambiguity function: entry `ℓ·n + k` is `⟨π(k, ℓ) g, g⟩`.
    ///
    /// `|⟨π(λ) g, π(λ') g⟩| = |⟨π(λ - λ') g, g⟩|`, so this table holds every
    /// pairwise atom correlation up to phase.
    pub fn ambiguity(&self) -> Vec<Complex64> {
        let n = self.n();
        let g = self.g();
        let mut out = vec![ZERO; n * n];
        let mut buf = vec![ZERO; n];
        for k in 0..n {
            for q in 0..n {
                buf[q] = g[(q + n - k) % n] * g[q].conj();
            }
            self.fft.inverse(&mut buf);
            for ell in 0..n {
                out[ell * n + k] = buf[ell];
            }
        }
        out
    }

    /// Mutual coherence `max_{λ≠λ'} |⟨π(λ) g, π(λ') g⟩|` via [`Self::ambiguity`].
    pub fn coherence(&self) -> f64 {
        self.ambiguity().iter().skip(1).map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// `Σ a_i conj(b_i)`.
#[inline]
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).fold(ZERO, |acc, (x, y)| acc + x * y.conj())
}

/// `A_q z` for the window-independent block matrix `A_q`.
pub fn a_q_apply(n: usize, q: usize, z: &[Complex64]) -> Result<Vec<Complex64>> {
    Error::check_len(n * n, z.len())?;
    if q >= n {
        return Err(Error::InvalidParameter(format!("q = {q} outside [0, {n})")));
    }
    let roots = roots_of_unity(n);
    Ok((0..n)
        .map(|k| {
            let src = (k + n - q) % n;
            (0..n).fold(ZERO, |acc, ell| acc + z[ell * n + src] * roots[(ell * k) % n])
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fft::NaiveDft;
    use crate::rng::substream;
    use crate::tf::WindowKind;
    use rand::Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_vec(len: usize, seed: u64) -> Vec<Complex64> {
        let mut rng = substream(seed, &[7]);
        (0..len).map(|_| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect()
    }

    fn delta_window(n: usize) -> Window {
        let mut v = vec![ZERO; n];
        v[0] = c(1.0, 0.0);
        Window::from_vector(v).unwrap()
    }

    fn matvec(m: &DMatrix<Complex64>, x: &[Complex64]) -> Vec<Complex64> {
        (0..m.nrows()).map(|r| (0..m.ncols()).fold(ZERO, |a, j| a + m[(r, j)] * x[j])).collect()
    }

    fn rel_dev(a: &[Complex64], b: &[Complex64]) -> f64 {
        let diff: Vec<Complex64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        norm2(&diff) / norm2(b).max(1e-300)
    }

    #[test]
    fn dense_matrix_of_delta_window() {
        let op = GaborOperator::new(delta_window(2));
        let m = op.build_dense().unwrap();
        let cols = [[1.0, 0.0], [0.0, 1.0], [1.0, 0.0], [0.0, -1.0]];
        for (j, col) in cols.iter().enumerate() {
            for r in 0..2 {
                assert!((m[(r, j)] - c(col[r], 0.0)).norm() < 1e-15, "col {j}");
            }
        }
    }

    #[test]
    fn dense_columns_unit_norm_and_first_block_circulant() {
        let w = Window::generate(WindowKind::Steinhaus, 8, 5).unwrap();
        let op = GaborOperator::new(w.clone());
        let m = op.build_dense().unwrap();
        for j in 0..64 {
            assert!((m.column(j).norm() - 1.0).abs() < 1e-12);
        }
        for k in 0..8 {
            for q in 0..8 {
                assert_eq!(m[(q, k)], w.g()[(q + 8 - k) % 8]);
            }
        }
    }

    #[test]
    fn dense_guard() {
        let op = GaborOperator::new(Window::generate(WindowKind::Rademacher, 8, 0).unwrap());
        assert!(matches!(op.build_dense_with_limit(4), Err(Error::Resource(_))));
    }

    #[test]
    fn synthesis_examples() {
        let op = GaborOperator::new(Window::generate(WindowKind::Rademacher, 8, 3).unwrap());
        let lam = TfIndex { k: 3, ell: 5 };
        let mut x = vec![ZERO; 64];
        x[lam.column(8)] = c(1.0, 0.0);
        assert!(rel_dev(&op.synthesis(&x).unwrap(), &op.atom(lam)) < 1e-12);
        assert!(op.synthesis(&vec![ZERO; 64]).unwrap().iter().all(|z| *z == ZERO));

        let x = random_vec(64, 11);
        let dense = matvec(&op.build_dense().unwrap(), &x);
        assert!(rel_dev(&op.synthesis(&x).unwrap(), &dense) < 1e-10);
        assert!(matches!(op.synthesis(&x[..10]), Err(Error::Dimension { .. })));
    }

    #[test]
    fn sparse_synthesis_both_paths_agree() {
        let op = GaborOperator::new(Window::generate(WindowKind::Gaussian, 16, 3).unwrap());
        for s in [1usize, 3, 40] {
            let pairs: Vec<_> = (0..s).map(|i| ((i * 37 + 5) % 256, c(i as f64 + 1.0, -0.5))).collect();
            let sv = SparseVector::from_pairs(256, pairs).unwrap();
            let a = op.synthesis_sparse(&sv).unwrap();
            let b = op.synthesis(&sv.to_dense()).unwrap();
            assert!(rel_dev(&a, &b) < 1e-12);
        }
    }

    #[test]
    fn analysis_examples() {
        let op = GaborOperator::new(Window::generate(WindowKind::Rademacher, 8, 2).unwrap());
        let out = op.analysis(op.g()).unwrap();
        assert!((out[0] - c(1.0, 0.0)).norm() < 1e-12);

        let m = op.build_dense().unwrap();
        let y = random_vec(8, 3);
        let dense: Vec<Complex64> = (0..64)
            .map(|j| (0..8).fold(ZERO, |a, r| a + m[(r, j)].conj() * y[r]))
            .collect();
        assert!(rel_dev(&op.analysis(&y).unwrap(), &dense) < 1e-10);
    }

    #[test]
    fn adjoint_pairing() {
        let op = GaborOperator::new(Window::generate(WindowKind::Steinhaus, 8, 9).unwrap());
        let x = random_vec(64, 1);
        let y = random_vec(8, 2);
        let lhs = inner(&op.synthesis(&x).unwrap(), &y);
        let rhs = inner(&x, &op.analysis(&y).unwrap());
        assert!((lhs - rhs).norm() <= 1e-10 * norm2(&x) * norm2(&y));
    }

    #[test]
    fn alltop_analysis_of_an_atom() {
        let op = GaborOperator::new(Window::generate(WindowKind::Alltop, 5, 0).unwrap());
        let lam = TfIndex { k: 2, ell: 4 };
        let out = op.analysis(&op.atom(lam)).unwrap();
        for (j, z) in out.iter().enumerate() {
            if j == lam.column(5) {
                assert!((z - c(1.0, 0.0)).norm() < 1e-10);
            } else {
                assert!(z.norm() <= 5f64.sqrt().recip() + 1e-10);
            }
        }
    }

    #[test]
    fn naive_backend_matches_fft_backend() {
        let w = Window::generate(WindowKind::Steinhaus, 7, 4).unwrap();
        let fast = GaborOperator::new(w.clone());
        let slow = GaborOperator::with_transform(w, Arc::new(NaiveDft::new(7)));
        let x = random_vec(49, 5);
        let y = random_vec(7, 6);
        assert!(rel_dev(&fast.synthesis(&x).unwrap(), &slow.synthesis(&x).unwrap()) < 1e-12);
        assert!(rel_dev(&fast.analysis(&y).unwrap(), &slow.analysis(&y).unwrap()) < 1e-12);
    }

    #[test]
    fn a_q_examples() {
        let n = 6;
        for q in 0..n {
            for col in [0usize, 7, 20, 35] {
                let lam = TfIndex::from_column(col, n);
                let mut z = vec![ZERO; n * n];
                z[col] = c(1.0, 0.0);
                let mut e_q = vec![ZERO; n];
                e_q[q] = c(1.0, 0.0);
                let expected = tf_shift(&e_q, lam);
                assert!(rel_dev(&a_q_apply(n, q, &z).unwrap(), &expected) < 1e-12);
            }
        }
        assert!(a_q_apply(n, 2, &vec![ZERO; 36]).unwrap().iter().all(|v| *v == ZERO));
        assert!(a_q_apply(n, 6, &vec![ZERO; 36]).is_err());

        // Ψ_g = Σ_q g_q A_q
        let op = GaborOperator::new(Window::generate(WindowKind::Gaussian, n, 8).unwrap());
        let z = random_vec(n * n, 9);
        let mut sum = vec![ZERO; n];
        for q in 0..n {
            for (acc, v) in sum.iter_mut().zip(op.a_q_apply(q, &z).unwrap()) {
                *acc += op.g()[q] * v;
            }
        }
        assert!(rel_dev(&sum, &op.synthesis(&z).unwrap()) < 1e-10);
    }

    #[test]
    fn atom_inner_product_examples() {
        let op = GaborOperator::new(Window::generate(WindowKind::Alltop, 5, 0).unwrap());
        let a = TfIndex { k: 1, ell: 3 };
        assert!((op.atom_inner_product(a, a).unwrap() - c(1.0, 0.0)).norm() < 1e-12);
        for col in 0..25 {
            let b = TfIndex::from_column(col, 5);
            if b != a {
                // Distinct translations give a Gauss sum of modulus 1/√5; equal
                // translations are orthogonal.
                let v = op.atom_inner_product(a, b).unwrap();
                let expected = if b.k == a.k { 0.0 } else { 5f64.sqrt().recip() };
                assert!((v.norm() - expected).abs() < 1e-10);
                let w = op.atom_inner_product(b, a).unwrap();
                assert!((v - w.conj()).norm() < 1e-14);
            }
        }
        let delta = GaborOperator::new(delta_window(4));
        let v = delta
            .atom_inner_product(TfIndex { k: 0, ell: 0 }, TfIndex { k: 0, ell: 1 })
            .unwrap();
        assert!((v - c(1.0, 0.0)).norm() < 1e-15);
        assert!(delta.atom_inner_product(TfIndex { k: 4, ell: 0 }, a).is_err());
    }

    #[test]
    fn coherence_matches_pairwise_maximum() {
        for (kind, n, seed) in [
            (WindowKind::Rademacher, 4, 0),
            (WindowKind::Steinhaus, 6, 1),
            (WindowKind::Gaussian, 5, 2),
            (WindowKind::Alltop, 7, 0),
        ] {
            let op = GaborOperator::new(Window::generate(kind, n, seed).unwrap());
            let mut brute = 0.0f64;
            for i in 0..n * n {
                for j in 0..n * n {
                    if i != j {
                        let v = inner(&op.atom_at(i), &op.atom_at(j)).norm();
                        brute = brute.max(v);
                    }
                }
            }
            assert!((op.coherence() - brute).abs() < 1e-12, "{kind} n={n}");
        }
    }

    #[test]
    fn coherence_examples() {
        for n in [5usize, 7] {
            let op = GaborOperator::new(Window::generate(WindowKind::Alltop, n, 0).unwrap());
            assert!((op.coherence() - (n as f64).sqrt().recip()).abs() < 1e-10);
        }
        for n in [2usize, 3, 8] {
            assert!((GaborOperator::new(delta_window(n)).coherence() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn difference_class_structure() {
        let n = 6;
        let op = GaborOperator::new(Window::generate(WindowKind::Steinhaus, n, 3).unwrap());
        let pairs = [((1, 2), (4, 5)), ((0, 0), (3, 1)), ((5, 5), (2, 0))];
        let tau = TfIndex { k: 4, ell: 3 };
        for ((k, l), (kp, lp)) in pairs {
            let a = TfIndex { k, ell: l };
            let b = TfIndex { k: kp, ell: lp };
            let v = op.atom_inner_product(a, b).unwrap().norm();
            let w = op.atom_inner_product(a.add(tau, n), b.add(tau, n)).unwrap().norm();
            assert!((v - w).abs() < 1e-10);
        }
    }

    #[test]
    fn tight_frame_constant() {
        let op = GaborOperator::new(Window::generate(WindowKind::Gaussian, 6, 1).unwrap());
        let y = random_vec(6, 4);
        let back = op.synthesis(&op.analysis(&y).unwrap()).unwrap();
        let scaled: Vec<Complex64> = y.iter().map(|v| v * op.frame_bound()).collect();
        assert!(rel_dev(&back, &scaled) < 1e-12);
        assert!((op.frame_bound() - 6.0).abs() < 1e-12);
    }

    #[test]
    fn sparse_vector_contract() {
        let x = SparseVector::from_pairs(10, vec![(7, c(1.0, 0.0)), (2, c(0.0, 2.0))]).unwrap();
        assert_eq!(x.support(), &[2, 7]);
        assert_eq!(x.l0(), 2);
        assert_eq!(SparseVector::from_dense(&x.to_dense()), x);
        assert!(SparseVector::from_pairs(10, vec![(1, ZERO), (1, ZERO)]).is_err());
        assert!(SparseVector::from_pairs(10, vec![(10, ZERO)]).is_err());
        let unit = SparseVector::from_pairs(4, vec![(0, c(0.6, 0.0)), (3, c(0.0, 0.8))]).unwrap();
        assert!(unit.in_unit_sparse_set(2));
        assert!(!unit.in_unit_sparse_set(1));
    }
}
