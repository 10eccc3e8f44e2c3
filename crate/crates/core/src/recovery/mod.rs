//! Sparse recovery from `y = Ψ x + e` through the fast operator.
//!
//! All solvers share [`RecoveryOptions`] and return a [`RecoveryResult`]
//! whose `residual_norm` is recomputed from the final `x_hat`.

mod greedy;
mod l1;
mod thresholding;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::analysis::hermitian_eigenvalues;
use crate::error::{Error, Result};
use crate::operator::{inner, GaborOperator, SparseVector};
use crate::table::Value;
use crate::tf::norm2;

pub use greedy::{cosamp, omp};
pub use l1::{basis_pursuit, soft_threshold};
pub use thresholding::{htp, iht};

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_ITERS: usize = 1000;
pub const DEFAULT_BP_MAX_ITERS: usize = 5000;
/// Gram matrices with a smaller eigenvalue are rejected by least squares.
pub const GRAM_EIGENVALUE_FLOOR: f64 = 1e-10;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Iht,
    Htp,
    CoSaMP,
    Omp,
    /// ℓ₁ minimization subject to `Ψ z = y`.
    BasisPursuit,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] =
        [Algorithm::Iht, Algorithm::Htp, Algorithm::CoSaMP, Algorithm::Omp, Algorithm::BasisPursuit];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Iht => "iht",
            Algorithm::Htp => "htp",
            Algorithm::CoSaMP => "cosamp",
            Algorithm::Omp => "omp",
            Algorithm::BasisPursuit => "bp",
        }
    }

    /// Restricted isometry requirement `δ_{κs} < δ*`, where one is known.
    pub fn thresholds(self) -> Option<AlgorithmThresholds> {
        RIP_THRESHOLDS.iter().copied().find(|t| t.algorithm == self)
    }

    pub fn default_max_iters(self) -> usize {
        match self {
            Algorithm::BasisPursuit => DEFAULT_BP_MAX_ITERS,
            _ => DEFAULT_MAX_ITERS,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "iht" => Ok(Algorithm::Iht),
            "htp" => Ok(Algorithm::Htp),
            "cosamp" => Ok(Algorithm::CoSaMP),
            "omp" => Ok(Algorithm::Omp),
            "bp" | "basis_pursuit" | "l1" => Ok(Algorithm::BasisPursuit),
            other => Err(Error::Usage(format!("unknown algorithm '{other}'"))),
        }
    }
}

/// Recovery is guaranteed when `δ_{κs} < δ*`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlgorithmThresholds {
    pub algorithm: Algorithm,
    pub kappa: usize,
    pub delta_star: f64,
}

pub const RIP_THRESHOLDS: [AlgorithmThresholds; 4] = [
    AlgorithmThresholds { algorithm: Algorithm::BasisPursuit, kappa: 2, delta_star: 0.465_153_077_165_046_6 },
    AlgorithmThresholds { algorithm: Algorithm::CoSaMP, kappa: 4, delta_star: 0.384_274_410_703_554_17 },
    AlgorithmThresholds { algorithm: Algorithm::Iht, kappa: 3, delta_star: 0.5 },
    AlgorithmThresholds { algorithm: Algorithm::Htp, kappa: 3, delta_star: 0.577_350_269_189_625_8 },
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GuaranteeStatus {
    Yes,
    No,
    Unknown,
}

impl GuaranteeStatus {
    pub fn name(self) -> &'static str {
        match self {
            GuaranteeStatus::Yes => "yes",
            GuaranteeStatus::No => "no",
            GuaranteeStatus::Unknown => "unknown",
        }
    }
}

/// Whether a known exact `δ_t` settles the guarantee for sparsity `s`.
/// Uses that `δ_t` is nondecreasing in `t`.
pub fn guarantee_status(algorithm: Algorithm, s: usize, exact_delta: Option<(usize, f64)>) -> GuaranteeStatus {
    let (Some(th), Some((t, delta))) = (algorithm.thresholds(), exact_delta) else {
        return GuaranteeStatus::Unknown;
    };
    let needed = th.kappa * s;
    if t >= needed && delta < th.delta_star {
        GuaranteeStatus::Yes
    } else if t <= needed && delta >= th.delta_star {
        GuaranteeStatus::No
    } else {
        GuaranteeStatus::Unknown
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryOptions {
    /// `None` selects the per-algorithm default.
    pub max_iters: Option<usize>,
    pub tol: f64,
    /// Normalized IHT step `‖g_S‖² / ‖Ψ g_S‖²` instead of 1.
    pub adaptive_step: bool,
    /// Initial iterate for IHT, HTP and CoSaMP.
    pub warm_start: Option<SparseVector>,
}

impl Default for RecoveryOptions {
    fn default() -> Self {
        RecoveryOptions { max_iters: None, tol: DEFAULT_TOL, adaptive_step: false, warm_start: None }
    }
}

impl RecoveryOptions {
    fn iters_for(&self, algorithm: Algorithm) -> usize {
        self.max_iters.unwrap_or_else(|| algorithm.default_max_iters())
    }

    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::InvalidParameter(format!("tol must be positive, got {}", self.tol)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryResult {
    pub x_hat: SparseVector,
    /// `‖y - Ψ x_hat‖₂`.
    pub residual_norm: f64,
    pub iterations: usize,
    pub converged: bool,
    pub algorithm: Algorithm,
    pub elapsed: Duration,
}

/// Runs `algorithm`; `s` is ignored by basis pursuit.
pub fn recover(
    op: &GaborOperator,
    y: &[Complex64],
    algorithm: Algorithm,
    s: usize,
    opts: &RecoveryOptions,
) -> Result<RecoveryResult> {
    match algorithm {
        Algorithm::Iht => iht(op, y, s, opts),
        Algorithm::Htp => htp(op, y, s, opts),
        Algorithm::CoSaMP => cosamp(op, y, s, opts),
        Algorithm::Omp => omp(op, y, s, opts),
        Algorithm::BasisPursuit => basis_pursuit(op, y, opts),
    }
}

/// `σ_s(x)₁`: ℓ₁ norm of `x` without its `s` largest-magnitude entries.
pub fn best_s_term_error(x: &[Complex64], s: usize) -> f64 {
    let keep = top_s_indices(x, s);
    let total: f64 = x.iter().map(|z| z.norm()).sum();
    let kept: f64 = keep.iter().map(|&i| x[i].norm()).sum();
    (total - kept).max(0.0)
}

/// Indices of the `s` largest magnitudes, ties to the lower index, ascending.
pub fn top_s_indices(v: &[Complex64], s: usize) -> Vec<usize> {
    let mut idx = ranked_indices(v, s);
    idx.sort_unstable();
    idx
}

/// Indices of the `s` largest magnitudes, largest first, ties to the lower index.
pub fn ranked_indices(v: &[Complex64], s: usize) -> Vec<usize> {
    let s = s.min(v.len());
    if s == 0 {
        return Vec::new();
    }
    let mag: Vec<f64> = v.iter().map(|z| z.norm_sqr()).collect();
    let order = |a: &usize, b: &usize| mag[*b].total_cmp(&mag[*a]).then(a.cmp(b));
    let mut idx: Vec<usize> = (0..v.len()).collect();
    if s < idx.len() {
        idx.select_nth_unstable_by(s - 1, order);
        idx.truncate(s);
    }
    idx.sort_unstable_by(order);
    idx
}

/// `H_s(v)` as a sparse vector; exact zeros are dropped.
pub fn hard_threshold(v: &[Complex64], s: usize) -> SparseVector {
    let pairs = top_s_indices(v, s).into_iter().filter(|&i| v[i] != ZERO).map(|i| (i, v[i])).collect();
    SparseVector::from_pairs(v.len(), pairs).expect("indices are distinct and in range")
}

/// Minimizes `‖y - Ψ_S z‖₂` over `z` supported on `support` through the
/// Hermitian normal equations. Returns the values in the order of `support`.
pub fn least_squares_on_support(op: &GaborOperator, y: &[Complex64], support: &[usize]) -> Result<Vec<Complex64>> {
    Error::check_len(op.n(), y.len())?;
    if support.is_empty() {
        return Ok(Vec::new());
    }
    let mut sorted = support.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidSupport("duplicate indices".into()));
    }
    if let Some(&i) = sorted.last() {
        if i >= op.atoms() {
            return Err(Error::InvalidSupport(format!("index {i} >= {}", op.atoms())));
        }
    }
    if support.len() > op.n() {
        return Err(Error::IllConditioned { min_eig: 0.0 });
    }
    let atoms: Vec<Vec<Complex64>> = support.iter().map(|&c| op.atom_at(c)).collect();
    let k = atoms.len();
    let gram = DMatrix::from_fn(k, k, |i, j| inner(&atoms[j], &atoms[i]));
    let min_eig = hermitian_eigenvalues(gram.clone())[0];
    if !(min_eig > GRAM_EIGENVALUE_FLOOR) {
        return Err(Error::IllConditioned { min_eig });
    }
    let rhs = DVector::from_fn(k, |i, _| inner(y, &atoms[i]));
    let chol = gram.cholesky().ok_or(Error::IllConditioned { min_eig })?;
    Ok(chol.solve(&rhs).iter().copied().collect())
}

fn sparse_from_support(len: usize, support: &[usize], values: &[Complex64]) -> SparseVector {
    let pairs = support.iter().copied().zip(values.iter().copied()).filter(|(_, v)| *v != ZERO).collect();
    SparseVector::from_pairs(len, pairs).expect("support is valid")
}

fn residual(op: &GaborOperator, y: &[Complex64], x: &SparseVector) -> Result<Vec<Complex64>> {
    let ax = op.synthesis_sparse(x)?;
    Ok(y.iter().zip(&ax).map(|(a, b)| a - b).collect())
}

/// Also rejects iterates whose squared norm overflows.
fn ensure_finite(values: &[Complex64], iteration: usize) -> Result<()> {
    if values.iter().map(|z| z.norm_sqr()).sum::<f64>().is_finite() {
        Ok(())
    } else {
        Err(Error::Divergence { iteration })
    }
}

/// Relative change `‖a - b‖₂ / max(‖b‖₂, tiny)` between sparse iterates.
fn relative_change(a: &SparseVector, b: &SparseVector) -> f64 {
    let (da, db) = (a.to_dense(), b.to_dense());
    let diff: f64 = da.iter().zip(&db).map(|(p, q)| (p - q).norm_sqr()).sum::<f64>().sqrt();
    let scale = norm2(&db).max(f64::MIN_POSITIVE);
    diff / scale
}

fn check_inputs(op: &GaborOperator, y: &[Complex64], s: usize, opts: &RecoveryOptions) -> Result<()> {
    Error::check_len(op.n(), y.len())?;
    opts.validate()?;
    if s == 0 || s > op.atoms() {
        return Err(Error::InvalidParameter(format!("sparsity must be in [1, {}], got {s}", op.atoms())));
    }
    if let Some(w) = &opts.warm_start {
        Error::check_len(op.atoms(), w.len())?;
    }
    ensure_finite(y, 0)
}

fn finish(
    op: &GaborOperator,
    y: &[Complex64],
    x_hat: SparseVector,
    iterations: usize,
    converged: bool,
    algorithm: Algorithm,
    start: Instant,
) -> Result<RecoveryResult> {
    let residual_norm = norm2(&residual(op, y, &x_hat)?);
    Ok(RecoveryResult { x_hat, residual_norm, iterations, converged, algorithm, elapsed: start.elapsed() })
}

fn zero_result(op: &GaborOperator, algorithm: Algorithm, start: Instant) -> RecoveryResult {
    RecoveryResult {
        x_hat: SparseVector::zeros(op.atoms()),
        residual_norm: 0.0,
        iterations: 1,
        converged: true,
        algorithm,
        elapsed: start.elapsed(),
    }
}

/// One solver run on a known truth, in the shape of a CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryRecord {
    pub algorithm: Algorithm,
    pub n: usize,
    pub s: usize,
    pub window: String,
    pub seed: u64,
    pub noise: f64,
    /// `‖x - x̂‖₂ / ‖x‖₂`, or `‖x̂‖₂` when `x = 0`; NaN when the solver failed.
    pub rel_error: f64,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl RecoveryRecord {
    pub const COLUMNS: [&'static str; 10] =
        ["algo", "n", "s", "window", "seed", "noise", "rel_error", "residual", "iters", "converged"];

    pub fn to_row(&self) -> Vec<Value> {
        vec![
            self.algorithm.name().into(),
            self.n.into(),
            self.s.into(),
            self.window.clone().into(),
            self.seed.into(),
            self.noise.into(),
            self.rel_error.into(),
            self.residual.into(),
            self.iterations.into(),
            self.converged.into(),
        ]
    }
}

/// `‖x - x̂‖₂ / ‖x‖₂`, falling back to `‖x̂‖₂` for `x = 0`.
pub fn relative_error(truth: &SparseVector, estimate: &SparseVector) -> f64 {
    let diff = relative_change(estimate, truth);
    if truth.norm2() == 0.0 {
        estimate.norm2()
    } else {
        diff
    }
}
