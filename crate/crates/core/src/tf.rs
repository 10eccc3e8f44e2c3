//! Cyclic translations, modulations and windows on `ℂⁿ`.
//!
//! `(T^k v)_q = v_{(q-k) mod n}`, `(M^ℓ v)_q = ω^{ℓq} v_q` with `ω = e^{2πi/n}`,
//! and the time-frequency shift `π(k, ℓ) = M^ℓ T^k`. Shift amounts are any
//! integers and are reduced modulo `n`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::rng::{substream, tag};

/// Signal length `n` (at least 2); the Gabor system has `N = n²` atoms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dim(usize);

impl Dim {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!("n must be at least 2, got {n}")));
        }
        Ok(Dim(n))
    }

    #[inline]
    pub fn n(self) -> usize {
        self.0
    }

    /// Number of atoms, `n²`.
    #[inline]
    pub fn atoms(self) -> usize {
        self.0 * self.0
    }
}

/// A lattice point `λ = (k, ℓ)`: translation `k`, modulation `ℓ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TfIndex {
    pub k: usize,
    pub ell: usize,
}

impl TfIndex {
    /// Reduces arbitrary integers into `[0, n)²`.
    pub fn new(k: i64, ell: i64, n: usize) -> Self {
        TfIndex { k: reduce(k, n), ell: reduce(ell, n) }
    }

    /// Column index `ℓ·n + k` (translations fast, modulations slow).
    #[inline]
    pub fn column(self, n: usize) -> usize {
        self.ell * n + self.k
    }

    #[inline]
    pub fn from_column(idx: usize, n: usize) -> Self {
        TfIndex { k: idx % n, ell: idx / n }
    }

    /// Componentwise `self - other` modulo `n`.
    pub fn sub(self, other: TfIndex, n: usize) -> Self {
        TfIndex { k: (self.k + n - other.k) % n, ell: (self.ell + n - other.ell) % n }
    }

    pub fn add(self, other: TfIndex, n: usize) -> Self {
        TfIndex { k: (self.k + other.k) % n, ell: (self.ell + other.ell) % n }
    }
}

#[inline]
pub(crate) fn reduce(m: i64, n: usize) -> usize {
    m.rem_euclid(n as i64) as usize
}

/// `ω^m = e^{2πi m/n}`, with `m` reduced mod `n` before exponentiation.
#[inline]
pub fn omega_pow(m: i64, n: usize) -> Complex64 {
    let r = reduce(m, n);
    Complex64::from_polar(1.0, 2.0 * PI * r as f64 / n as f64)
}

/// Table of `ω^0, …, ω^{n-1}`.
pub fn roots_of_unity(n: usize) -> Vec<Complex64> {
    (0..n).map(|m| omega_pow(m as i64, n)).collect()
}

pub fn translate(v: &[Complex64], k: i64) -> Vec<Complex64> {
    let n = v.len();
    if n == 0 {
        return Vec::new();
    }
    let k = reduce(k, n);
    (0..n).map(|q| v[(q + n - k) % n]).collect()
}

pub fn modulate(v: &[Complex64], ell: i64) -> Vec<Complex64> {
    let n = v.len();
    if n == 0 {
        return Vec::new();
    }
    let ell = reduce(ell, n);
    v.iter()
        .enumerate()
        .map(|(q, &x)| x * omega_pow(((ell * q) % n) as i64, n))
        .collect()
}

/// `π(λ) v = M^ℓ T^k v`.
pub fn tf_shift(v: &[Complex64], lambda: TfIndex) -> Vec<Complex64> {
    modulate(&translate(v, lambda.k as i64), lambda.ell as i64)
}

/// [`translate`] with an explicit expected length.
pub fn translate_checked(v: &[Complex64], k: i64, n: usize) -> Result<Vec<Complex64>> {
    Error::check_len(n, v.len())?;
    Ok(translate(v, k))
}

/// [`modulate`] with an explicit expected length.
pub fn modulate_checked(v: &[Complex64], ell: i64, n: usize) -> Result<Vec<Complex64>> {
    Error::check_len(n, v.len())?;
    Ok(modulate(v, ell))
}

/// [`tf_shift`] with an explicit expected length.
pub fn tf_shift_checked(v: &[Complex64], lambda: TfIndex, n: usize) -> Result<Vec<Complex64>> {
    Error::check_len(n, v.len())?;
    Ok(tf_shift(v, lambda))
}

pub fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn norm2(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WindowKind {
    Rademacher,
    Steinhaus,
    Alltop,
    Gaussian,
    /// A caller-supplied vector, normalized to unit norm.
    Custom,
}

impl WindowKind {
    pub const GENERATED: [WindowKind; 4] =
        [WindowKind::Rademacher, WindowKind::Steinhaus, WindowKind::Alltop, WindowKind::Gaussian];

    pub fn name(self) -> &'static str {
        match self {
            WindowKind::Rademacher => "rademacher",
            WindowKind::Steinhaus => "steinhaus",
            WindowKind::Alltop => "alltop",
            WindowKind::Gaussian => "gaussian",
            WindowKind::Custom => "custom",
        }
    }

    fn stream_tag(self) -> u64 {
        match self {
            WindowKind::Rademacher => 1,
            WindowKind::Steinhaus => 2,
            WindowKind::Alltop => 3,
            WindowKind::Gaussian => 4,
            WindowKind::Custom => 5,
        }
    }
}

impl fmt::Display for WindowKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WindowKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rademacher" => Ok(WindowKind::Rademacher),
            "steinhaus" => Ok(WindowKind::Steinhaus),
            "alltop" => Ok(WindowKind::Alltop),
            "gaussian" => Ok(WindowKind::Gaussian),
            other => Err(Error::Usage(format!("unknown window kind '{other}'"))),
        }
    }
}

/// A unit-norm generating vector `g` and the unnormalized sequence `ε` it came from.
///
/// For Rademacher, Steinhaus and Alltop windows `g = n^{-1/2} ε`. A Gaussian
/// window is the raw complex normal draw `ε` divided by its realized norm.
#[derive(Debug, Clone, PartialEq)]
pub struct Window {
    dim: Dim,
    kind: WindowKind,
    seed: u64,
    epsilon: Vec<Complex64>,
    g: Vec<Complex64>,
}

impl Window {
    /// Draws (or, for Alltop, computes) a window. Equal arguments give
    /// bit-identical vectors; `seed` is ignored for Alltop.
    pub fn generate(kind: WindowKind, n: usize, seed: u64) -> Result<Self> {
        let dim = Dim::new(n)?;
        let seed = if kind == WindowKind::Alltop { 0 } else { seed };
        let mut rng = substream(seed, &[tag::WINDOW, kind.stream_tag(), n as u64]);
        let epsilon: Vec<Complex64> = match kind {
            WindowKind::Rademacher => (0..n)
                .map(|_| Complex64::new(if rng.random::<bool>() { 1.0 } else { -1.0 }, 0.0))
                .collect(),
            WindowKind::Steinhaus => (0..n)
                .map(|_| Complex64::from_polar(1.0, 2.0 * PI * rng.random::<f64>()))
                .collect(),
            WindowKind::Alltop => {
                if n < 5 || !is_prime(n) {
                    return Err(Error::InvalidParameter(format!(
                        "the Alltop window needs a prime n >= 5, got {n}"
                    )));
                }
                (0..n)
                    .map(|q| {
                        let cube = (q as u128).pow(3) % n as u128;
                        omega_pow(cube as i64, n)
                    })
                    .collect()
            }
            WindowKind::Gaussian => (0..n)
                .map(|_| {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = rng.sample(StandardNormal);
                    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
                })
                .collect(),
            WindowKind::Custom => {
                return Err(Error::InvalidParameter(
                    "custom windows are built with Window::from_vector".into(),
                ))
            }
        };
        let scale = match kind {
            WindowKind::Gaussian => {
                let norm = norm2(&epsilon);
                if norm == 0.0 {
                    return Err(Error::InvalidParameter("degenerate Gaussian draw".into()));
                }
                1.0 / norm
            }
            _ => 1.0 / (n as f64).sqrt(),
        };
        let g = epsilon.iter().map(|e| e * scale).collect();
        Ok(Window { dim, kind, seed, epsilon, g })
    }

    /// Wraps an arbitrary nonzero vector, normalized to unit norm; `ε = √n g`.
    pub fn from_vector(v: Vec<Complex64>) -> Result<Self> {
        let dim = Dim::new(v.len())?;
        let norm = norm2(&v);
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidParameter("window vector must be nonzero and finite".into()));
        }
        let g: Vec<Complex64> = v.iter().map(|z| z / norm).collect();
        let root_n = (dim.n() as f64).sqrt();
        let epsilon = g.iter().map(|z| z * root_n).collect();
        Ok(Window { dim, kind: WindowKind::Custom, seed: 0, epsilon, g })
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.dim.n()
    }

    pub fn kind(&self) -> WindowKind {
        self.kind
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// The unit-norm window `g`.
    pub fn g(&self) -> &[Complex64] {
        &self.g
    }

    /// The unnormalized sequence `ε`.
    pub fn epsilon(&self) -> &[Complex64] {
        &self.epsilon
    }

    /// True when every `|ε_q| = 1` (Rademacher, Steinhaus, Alltop).
    pub fn has_unimodular_sequence(&self) -> bool {
        self.epsilon.iter().all(|e| (e.norm() - 1.0).abs() < 1e-12)
    }
}

/// Convenience alias for [`Window::generate`].
pub fn make_window(kind: WindowKind, n: usize, seed: u64) -> Result<Window> {
    Window::generate(kind, n, seed)
}
