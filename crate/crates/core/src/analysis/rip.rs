use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::operator::{inner, GaborOperator};
use crate::rng::{substream, tag};
use crate::table::{Table, Value};
use crate::tf::WindowKind;

/// Maximum number of supports [`exact_rip_constant`] will enumerate.
pub const DEFAULT_ENUMERATION_BUDGET: u128 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RipMode {
    Exact,
    MonteCarlo,
}

impl RipMode {
    pub fn name(self) -> &'static str {
        match self {
            RipMode::Exact => "exact",
            RipMode::MonteCarlo => "monte_carlo",
        }
    }
}

/// Restricted isometry statistics for one operator and sparsity level.
///
/// `delta_hat` is the largest `max(λ_max - 1, 1 - λ_min)` over the examined
/// supports. In Monte Carlo mode it is a lower bound on `δ_s`; `deltas` keeps
/// the per-trial values. `trials` is the number of supports examined in
/// either mode.
#[derive(Debug, Clone, PartialEq)]
pub struct RipEstimate {
    pub n: usize,
    pub s: usize,
    pub window: WindowKind,
    pub seed: u64,
    pub mode: RipMode,
    pub trials: usize,
    pub support_count: usize,
    pub delta_hat: f64,
    pub mean_delta: f64,
    pub std_delta: f64,
    pub deltas: Vec<f64>,
}

impl RipEstimate {
    pub const COLUMNS: [&'static str; 9] =
        ["n", "s", "window", "seed", "mode", "trials", "delta_hat", "mean_delta", "std_delta"];

    pub fn to_row(&self) -> Vec<Value> {
        vec![
            self.n.into(),
            self.s.into(),
            self.window.name().into(),
            self.seed.into(),
            self.mode.name().into(),
            self.trials.into(),
            self.delta_hat.into(),
            self.mean_delta.into(),
            self.std_delta.into(),
        ]
    }

    pub fn table(rows: &[RipEstimate]) -> Table {
        let mut t = Table::new(Self::COLUMNS);
        for r in rows {
            t.push(r.to_row()).expect("row width");
        }
        t
    }
}

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul(n - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// `G_ij = ⟨a_j, a_i⟩` for the given atoms.
pub fn gram_matrix(atoms: &[Vec<Complex64>]) -> DMatrix<Complex64> {
    let s = atoms.len();
    let mut g = DMatrix::zeros(s, s);
    for i in 0..s {
        g[(i, i)] = Complex64::new(atoms[i].iter().map(|z| z.norm_sqr()).sum(), 0.0);
        for j in (i + 1)..s {
            let v = inner(&atoms[j], &atoms[i]);
            g[(i, j)] = v;
            g[(j, i)] = v.conj();
        }
    }
    g
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues(m: DMatrix<Complex64>) -> Vec<f64> {
    if m.nrows() == 1 {
        return vec![m[(0, 0)].re];
    }
    let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

fn extremal(atoms: &[Vec<Complex64>]) -> (f64, f64) {
    let ev = hermitian_eigenvalues(gram_matrix(atoms));
    (ev[0], ev[ev.len() - 1])
}

fn deviation((lo, hi): (f64, f64)) -> f64 {
    (hi - 1.0).max(1.0 - lo)
}

fn validate_support(op: &GaborOperator, support: &[usize]) -> Result<()> {
    if support.is_empty() {
        return Err(Error::InvalidSupport("empty support".into()));
    }
    let mut sorted = support.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidSupport("duplicate indices".into()));
    }
    if let Some(&max) = sorted.last() {
        if max >= op.atoms() {
            return Err(Error::InvalidSupport(format!("index {max} >= {}", op.atoms())));
        }
    }
    Ok(())
}

/// Extremal eigenvalues `(λ_min, λ_max)` of the Gram matrix of the selected
/// columns. Supports larger than `n` are allowed but always rank deficient.
pub fn submatrix_extremal_eigs(op: &GaborOperator, support: &[usize]) -> Result<(f64, f64)> {
    validate_support(op, support)?;
    let atoms: Vec<_> = support.iter().map(|&c| op.atom_at(c)).collect();
    Ok(extremal(&atoms))
}

fn check_sparsity(op: &GaborOperator, s: usize) -> Result<()> {
    if s == 0 || s > op.atoms() {
        return Err(Error::InvalidParameter(format!(
            "sparsity must be in [1, {}], got {s}",
            op.atoms()
        )));
    }
    Ok(())
}

#[derive(Clone, Copy)]
struct Stats {
    count: usize,
    max: f64,
    sum: f64,
    sum_sq: f64,
}

impl Stats {
    const EMPTY: Stats = Stats { count: 0, max: f64::NEG_INFINITY, sum: 0.0, sum_sq: 0.0 };

    fn add(&mut self, d: f64) {
        self.count += 1;
        self.max = self.max.max(d);
        self.sum += d;
        self.sum_sq += d * d;
    }

    fn merge(self, o: Stats) -> Stats {
        Stats {
            count: self.count + o.count,
            max: self.max.max(o.max),
            sum: self.sum + o.sum,
            sum_sq: self.sum_sq + o.sum_sq,
        }
    }

    fn mean_std(&self) -> (f64, f64) {
        let c = self.count as f64;
        let mean = self.sum / c;
        (mean, (self.sum_sq / c - mean * mean).max(0.0).sqrt())
    }
}

/// Exhaustive `δ_s` over every size-`s` support, within the default budget.
pub fn exact_rip_constant(op: &GaborOperator, s: usize) -> Result<RipEstimate> {
    exact_rip_constant_with_budget(op, s, DEFAULT_ENUMERATION_BUDGET)
}

/// Exhaustive `δ_s`. For a fixed support the worst `x` is an extremal
/// eigenvector, so enumerating supports gives `δ_s` exactly.
pub fn exact_rip_constant_with_budget(op: &GaborOperator, s: usize, budget: u128) -> Result<RipEstimate> {
    check_sparsity(op, s)?;
    let big_n = op.atoms();
    let count = binomial(big_n as u128, s as u128);
    if count > budget {
        return Err(Error::Resource(format!(
            "C({big_n}, {s}) = {count} supports exceeds the enumeration budget {budget}; use Monte Carlo estimation"
        )));
    }
    let atoms: Vec<Vec<Complex64>> = (0..big_n).map(|c| op.atom_at(c)).collect();

    // Parallel over the leading index; partial stats merge in index order.
    let partial: Vec<Stats> = (0..=big_n - s)
        .into_par_iter()
        .map(|first| {
            let mut stats = Stats::EMPTY;
            let mut rest: Vec<usize> = (first + 1..first + s).collect();
            let mut chosen: Vec<Vec<Complex64>> = Vec::with_capacity(s);
            loop {
                chosen.clear();
                chosen.push(atoms[first].clone());
                chosen.extend(rest.iter().map(|&c| atoms[c].clone()));
                stats.add(deviation(extremal(&chosen)));
                if !next_combination(&mut rest, big_n) {
                    break;
                }
            }
            stats
        })
        .collect();
    let stats = partial.into_iter().fold(Stats::EMPTY, Stats::merge);
    let (mean, std) = stats.mean_std();
    Ok(RipEstimate {
        n: op.n(),
        s,
        window: op.window().kind(),
        seed: op.window().seed(),
        mode: RipMode::Exact,
        trials: stats.count,
        support_count: stats.count,
        delta_hat: stats.max,
        mean_delta: mean,
        std_delta: std,
        deltas: Vec::new(),
    })
}

/// Advances a strictly increasing index vector over `[.., limit)` to the next
/// combination in lexicographic order. Returns `false` when exhausted.
fn next_combination(idx: &mut [usize], limit: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < limit - (k - i) {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// The support drawn for Monte Carlo trial `trial`: the first `s` positions of
/// a Fisher–Yates shuffle of `[0, n_atoms)`. Supports for smaller `s` under
/// the same `(seed, trial)` are prefixes of this one.
pub fn sample_support(n_atoms: usize, s: usize, seed: u64, trial: u64) -> Vec<usize> {
    let mut rng = substream(seed, &[tag::MONTE_CARLO, trial]);
    partial_shuffle(&mut rng, n_atoms, s)
}

pub(crate) fn partial_shuffle<R: Rng>(rng: &mut R, len: usize, s: usize) -> Vec<usize> {
    // Sparse Fisher–Yates: only displaced positions are stored.
    let mut moved: Vec<(usize, usize)> = Vec::new();
    let lookup = |moved: &Vec<(usize, usize)>, i: usize| {
        moved.iter().rev().find(|(p, _)| *p == i).map_or(i, |(_, v)| *v)
    };
    let mut out = Vec::with_capacity(s);
    for i in 0..s.min(len) {
        let j = rng.random_range(i..len);
        let vi = lookup(&moved, i);
        let vj = lookup(&moved, j);
        out.push(vj);
        moved.push((j, vi));
        moved.push((i, vj));
    }
    out
}

/// Monte Carlo lower bound on `δ_s` over `trials` random supports. Each
/// trial's support depends only on `(seed, trial)`, so the result does not
/// depend on the number of worker threads.
pub fn monte_carlo_rip(op: &GaborOperator, s: usize, trials: usize, seed: u64) -> Result<RipEstimate> {
    check_sparsity(op, s)?;
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let big_n = op.atoms();
    let deltas: Vec<f64> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let support = sample_support(big_n, s, seed, t);
            let atoms: Vec<_> = support.iter().map(|&c| op.atom_at(c)).collect();
            deviation(extremal(&atoms))
        })
        .collect();
    let stats = deltas.iter().fold(Stats::EMPTY, |mut acc, &d| {
        acc.add(d);
        acc
    });
    let (mean, std) = stats.mean_std();
    Ok(RipEstimate {
        n: op.n(),
        s,
        window: op.window().kind(),
        seed,
        mode: RipMode::MonteCarlo,
        trials,
        support_count: trials,
        delta_hat: stats.max,
        mean_delta: mean,
        std_delta: std,
        deltas,
    })
}

/// `δ_s ≤ (s - 1) μ`.
pub fn coherence_rip_bound(mu: f64, s: usize) -> f64 {
    s.saturating_sub(1) as f64 * mu
}

/// Lower bound `√((N - n) / (n (N - 1)))` on the coherence of any `n × N`
/// matrix with unit columns.
pub fn welch_bound(n: usize, big_n: usize) -> Result<f64> {
    if n == 0 || big_n <= n {
        return Err(Error::InvalidParameter(format!("need N > n >= 1, got n = {n}, N = {big_n}")));
    }
    let (n, big_n) = (n as f64, big_n as f64);
    Ok(((big_n - n) / (n * (big_n - 1.0))).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tf::Window;

    fn op(kind: WindowKind, n: usize, seed: u64) -> GaborOperator {
        GaborOperator::new(Window::generate(kind, n, seed).unwrap())
    }

    /// Independent reference: the 2n × 2n real symmetric embedding of a
    /// Hermitian matrix has each eigenvalue twice.
    fn embedded_eigs(m: &DMatrix<Complex64>) -> Vec<f64> {
        let s = m.nrows();
        let mut r = DMatrix::<f64>::zeros(2 * s, 2 * s);
        for i in 0..s {
            for j in 0..s {
                let z = m[(i, j)];
                r[(i, j)] = z.re;
                r[(i + s, j + s)] = z.re;
                r[(i, j + s)] = -z.im;
                r[(i + s, j)] = z.im;
            }
        }
        let mut ev: Vec<f64> = r.symmetric_eigen().eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev.into_iter().step_by(2).collect()
    }

    #[test]
    fn single_column_is_isometric() {
        let o = op(WindowKind::Steinhaus, 6, 1);
        let (lo, hi) = submatrix_extremal_eigs(&o, &[13]).unwrap();
        assert!((lo - 1.0).abs() < 1e-12 && (hi - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pair_eigenvalues_closed_form() {
        let o = op(WindowKind::Rademacher, 8, 3);
        for (a, b) in [(0usize, 1usize), (5, 40), (63, 2)] {
            let c = inner(&o.atom_at(b), &o.atom_at(a)).norm();
            let (lo, hi) = submatrix_extremal_eigs(&o, &[a, b]).unwrap();
            assert!((lo - (1.0 - c)).abs() < 1e-12);
            assert!((hi - (1.0 + c)).abs() < 1e-12);
        }
    }

    #[test]
    fn four_atom_gram_matches_reference_solver() {
        let o = op(WindowKind::Rademacher, 4, 0);
        let support = [0usize, 1, 2, 3];
        let atoms: Vec<_> = support.iter().map(|&c| o.atom_at(c)).collect();
        let g = gram_matrix(&atoms);
        let reference = embedded_eigs(&g);
        let (lo, hi) = submatrix_extremal_eigs(&o, &support).unwrap();
        assert!((lo - reference[0]).abs() < 1e-8);
        assert!((hi - reference[3]).abs() < 1e-8);
        let trace: f64 = (0..4).map(|i| g[(i, i)].re).sum();
        assert!((trace - 4.0).abs() < 1e-8);
    }

    #[test]
    fn support_validation() {
        let o = op(WindowKind::Rademacher, 4, 0);
        assert!(matches!(submatrix_extremal_eigs(&o, &[1, 1]), Err(Error::InvalidSupport(_))));
        assert!(matches!(submatrix_extremal_eigs(&o, &[16]), Err(Error::InvalidSupport(_))));
        assert!(submatrix_extremal_eigs(&o, &[]).is_err());
    }

    #[test]
    fn exact_s1_is_zero_and_s2_is_coherence() {
        for (kind, n) in [(WindowKind::Rademacher, 4), (WindowKind::Alltop, 5), (WindowKind::Gaussian, 6)] {
            let o = op(kind, n, 2);
            assert!(exact_rip_constant(&o, 1).unwrap().delta_hat.abs() < 1e-12);
            let d2 = exact_rip_constant(&o, 2).unwrap();
            assert!((d2.delta_hat - o.coherence()).abs() < 1e-10);
            assert_eq!(d2.support_count as u128, binomial((n * n) as u128, 2));
        }
    }

    #[test]
    fn exact_nondecreasing_in_s() {
        let o = op(WindowKind::Steinhaus, 4, 5);
        let d: Vec<f64> = (1..=3).map(|s| exact_rip_constant(&o, s).unwrap().delta_hat).collect();
        assert!(d[0] <= d[1] + 1e-12 && d[1] <= d[2] + 1e-12);
    }

    #[test]
    fn budget_and_range_errors() {
        let o = op(WindowKind::Rademacher, 8, 0);
        assert!(matches!(exact_rip_constant(&o, 5), Err(Error::Resource(_))));
        assert!(matches!(exact_rip_constant(&o, 0), Err(Error::InvalidParameter(_))));
        assert!(matches!(monte_carlo_rip(&o, 65, 3, 0), Err(Error::InvalidParameter(_))));
        assert!(monte_carlo_rip(&o, 2, 0, 0).is_err());
    }

    #[test]
    fn combinations_enumerate_in_order() {
        let mut idx = vec![0, 1];
        let mut seen = vec![idx.clone()];
        while next_combination(&mut idx, 4) {
            seen.push(idx.clone());
        }
        assert_eq!(seen, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(binomial(16, 2), 120);
        assert_eq!(binomial(25, 3), 2300);
        assert_eq!(binomial(3, 5), 0);
    }

    #[test]
    fn sampled_supports_are_distinct_nested_and_uniformish() {
        let mut hits = vec![0usize; 16];
        for t in 0..4000 {
            let s3 = sample_support(16, 3, 9, t);
            let s2 = sample_support(16, 2, 9, t);
            assert_eq!(&s3[..2], &s2[..]);
            let mut sorted = s3.clone();
            sorted.sort_unstable();
            sorted.dedup();
            assert_eq!(sorted.len(), 3);
            for &i in &s3 {
                hits[i] += 1;
            }
        }
        // Each index expected 750 times.
        assert!(hits.iter().all(|&h| (600..900).contains(&h)), "{hits:?}");
        assert_eq!(sample_support(5, 5, 1, 0).len(), 5);
    }

    #[test]
    fn monte_carlo_small_cases() {
        let o = op(WindowKind::Rademacher, 4, 0);
        let mc1 = monte_carlo_rip(&o, 1, 64, 0).unwrap();
        assert!(mc1.delta_hat.abs() < 1e-12);
        let exact = exact_rip_constant(&o, 2).unwrap();
        let mc = monte_carlo_rip(&o, 2, 2000, 0).unwrap();
        assert!(mc.delta_hat <= exact.delta_hat + 1e-15);
        assert_eq!(mc.deltas.len(), 2000);
        let mc3 = monte_carlo_rip(&o, 3, 2000, 0).unwrap();
        assert!(mc3.delta_hat >= mc.delta_hat);
        for (a, b) in mc3.deltas.iter().zip(&mc.deltas) {
            assert!(a + 1e-12 >= *b);
        }
    }

    #[test]
    fn eigen_sandwich_per_sample() {
        let o = op(WindowKind::Steinhaus, 8, 4);
        let est = monte_carlo_rip(&o, 3, 50, 11).unwrap();
        for t in 0..50 {
            let support = sample_support(64, 3, 11, t);
            let (lo, hi) = submatrix_extremal_eigs(&o, &support).unwrap();
            assert!(1.0 - est.delta_hat <= lo + 1e-12);
            assert!(lo <= hi);
            assert!(hi <= 1.0 + est.delta_hat + 1e-12);
        }
    }

    #[test]
    fn coherence_bound_and_welch() {
        assert!((coherence_rip_bound(1.0 / 5f64.sqrt(), 3) - 2.0 / 5f64.sqrt()).abs() < 1e-15);
        assert_eq!(coherence_rip_bound(0.3, 1), 0.0);
        assert!((welch_bound(5, 25).unwrap() - (1.0f64 / 6.0).sqrt()).abs() < 1e-15);
        assert!((welch_bound(1, 2).unwrap() - 1.0).abs() < 1e-15);
        assert!(welch_bound(3, 3).is_err());
        assert!(op(WindowKind::Alltop, 5, 0).coherence() >= welch_bound(5, 25).unwrap());
    }

    #[test]
    fn exact_below_coherence_bound() {
        for n in [4usize, 5] {
            for (kind, seed) in [(WindowKind::Rademacher, 1), (WindowKind::Steinhaus, 2), (WindowKind::Gaussian, 3)] {
                let o = op(kind, n, seed);
                let mu = o.coherence();
                for s in [2, 3] {
                    let d = exact_rip_constant(&o, s).unwrap().delta_hat;
                    assert!(d <= coherence_rip_bound(mu, s) + 1e-10);
                }
            }
        }
    }

    #[test]
    fn estimate_row_layout() {
        let o = op(WindowKind::Rademacher, 4, 0);
        let t = RipEstimate::table(&[exact_rip_constant(&o, 2).unwrap()]);
        assert!(t.to_csv().starts_with("n,s,window,seed,mode,trials,delta_hat,mean_delta,std_delta\n4,2,rademacher,0,exact,120,"));
    }
}
