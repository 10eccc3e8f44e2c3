//! Delay-Doppler channel identification with a single probe.
//!
//! A channel `Γ = Σ_λ x_λ π(λ)` with few active paths maps the probe `g` to
//! `Γg = Ψ_g x`, so identifying `Γ` from one response is sparse recovery.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::analysis::partial_shuffle;
use crate::error::{Error, Result};
use crate::operator::{GaborOperator, SparseVector};
use crate::recovery::{best_s_term_error, recover, relative_error, Algorithm, RecoveryOptions, RecoveryRecord};
use crate::rng::{substream, tag};
use crate::table::{Table, Value};
use crate::tf::{norm2, Window};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CoefficientDistribution {
    /// `e^{iφ}` with `φ` uniform.
    #[default]
    UnitModulusRandomPhase,
    /// Standard circular complex normal.
    ComplexGaussian,
}

impl CoefficientDistribution {
    pub fn name(self) -> &'static str {
        match self {
            CoefficientDistribution::UnitModulusRandomPhase => "unit_phase",
            CoefficientDistribution::ComplexGaussian => "gaussian",
        }
    }

    fn draw<R: Rng>(self, rng: &mut R) -> Complex64 {
        match self {
            CoefficientDistribution::UnitModulusRandomPhase => {
                Complex64::from_polar(1.0, 2.0 * PI * rng.random::<f64>())
            }
            CoefficientDistribution::ComplexGaussian => {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex64::new(re, im) / 2f64.sqrt()
            }
        }
    }
}

impl fmt::Display for CoefficientDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CoefficientDistribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unit_phase" => Ok(CoefficientDistribution::UnitModulusRandomPhase),
            "gaussian" => Ok(CoefficientDistribution::ComplexGaussian),
            other => Err(Error::Usage(format!("unknown coefficient distribution '{other}'"))),
        }
    }
}

/// `Σ_λ x_λ π(λ) g`: the response of the channel `x` to the probe `g`.
pub fn apply_channel(x: &SparseVector, g: &Window) -> Result<Vec<Complex64>> {
    GaborOperator::new(g.clone()).synthesis_sparse(x)
}

/// A random `s`-path channel, its probe and the (noisy) response.
#[derive(Debug, Clone)]
pub struct ChannelExperiment {
    pub n: usize,
    pub s: usize,
    pub distribution: CoefficientDistribution,
    /// Exact `‖e‖₂` of the additive noise.
    pub noise_tau: f64,
    pub seed: u64,
    pub truth: SparseVector,
    pub y: Vec<Complex64>,
    op: GaborOperator,
}

impl ChannelExperiment {
    /// Draws the channel and noise from `seed`; the probe is given.
    pub fn generate(
        window: Window,
        s: usize,
        distribution: CoefficientDistribution,
        noise_tau: f64,
        seed: u64,
    ) -> Result<Self> {
        let n = window.n();
        let big_n = n * n;
        if s > big_n {
            return Err(Error::InvalidParameter(format!("s = {s} exceeds n^2 = {big_n}")));
        }
        if !(noise_tau >= 0.0) || !noise_tau.is_finite() {
            return Err(Error::InvalidParameter(format!("noise level must be finite and >= 0, got {noise_tau}")));
        }
        let op = GaborOperator::new(window);
        let mut rng = substream(seed, &[tag::TRUTH]);
        let support = partial_shuffle(&mut rng, big_n, s);
        let pairs = support.into_iter().map(|i| (i, distribution.draw(&mut rng))).collect();
        let truth = SparseVector::from_pairs(big_n, pairs)?;
        let mut y = op.synthesis_sparse(&truth)?;
        if noise_tau > 0.0 {
            let mut rng = substream(seed, &[tag::NOISE]);
            let e: Vec<Complex64> = (0..n)
                .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect();
            let scale = noise_tau / norm2(&e);
            for (yi, ei) in y.iter_mut().zip(&e) {
                *yi += ei * scale;
            }
        }
        Ok(ChannelExperiment { n, s, distribution, noise_tau, seed, truth, y, op })
    }

    pub fn operator(&self) -> &GaborOperator {
        &self.op
    }

    pub fn window(&self) -> &Window {
        self.op.window()
    }
}

/// Outcome of one identification run. Solver failures are kept in `error`
/// with NaN error figures.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRecord {
    pub recovery: RecoveryRecord,
    pub precision: f64,
    pub recall: f64,
    /// `σ_s(x)₁ / √s` of the truth, zero for `s = 0`.
    pub sigma_s_over_sqrt_s: f64,
    pub tau: f64,
    pub x_hat: Option<SparseVector>,
    /// `(code, message)` of a solver error.
    pub error: Option<(String, String)>,
}

impl ChannelRecord {
    pub fn columns() -> Vec<&'static str> {
        let mut c = RecoveryRecord::COLUMNS.to_vec();
        c.extend(["precision", "recall", "sigma_s_over_sqrt_s", "tau"]);
        c
    }

    pub fn to_row(&self) -> Vec<Value> {
        let mut row = self.recovery.to_row();
        row.extend([self.precision.into(), self.recall.into(), self.sigma_s_over_sqrt_s.into(), self.tau.into()]);
        row
    }

    pub fn table(records: &[ChannelRecord]) -> Table {
        let mut t = Table::new(Self::columns());
        for r in records {
            t.push(r.to_row()).expect("row width");
        }
        t
    }

    pub fn succeeded(&self, threshold: f64) -> bool {
        self.error.is_none() && self.recovery.rel_error < threshold
    }
}

/// `(precision, recall)` of the estimated support; an empty set scores 1.
pub fn support_precision_recall(truth: &SparseVector, estimate: &SparseVector) -> (f64, f64) {
    let t: Vec<usize> = truth.iter().filter(|(_, v)| v.norm() != 0.0).map(|(i, _)| i).collect();
    let e: Vec<usize> = estimate.iter().filter(|(_, v)| v.norm() != 0.0).map(|(i, _)| i).collect();
    let hits = e.iter().filter(|i| t.binary_search(i).is_ok()).count() as f64;
    let precision = if e.is_empty() { 1.0 } else { hits / e.len() as f64 };
    let recall = if t.is_empty() { 1.0 } else { hits / t.len() as f64 };
    (precision, recall)
}

fn base_record(exp: &ChannelExperiment, algorithm: Algorithm) -> (RecoveryRecord, f64) {
    let sigma = if exp.s == 0 { 0.0 } else { best_s_term_error(&exp.truth.to_dense(), exp.s) / (exp.s as f64).sqrt() };
    let recovery = RecoveryRecord {
        algorithm,
        n: exp.n,
        s: exp.s,
        window: exp.window().kind().name().to_string(),
        seed: exp.seed,
        noise: exp.noise_tau,
        rel_error: f64::NAN,
        residual: f64::NAN,
        iterations: 0,
        converged: false,
    };
    (recovery, sigma)
}

/// Recovers the channel with `algorithm` at sparsity `exp.s` (at least 1),
/// returning solver errors.
pub fn try_run_experiment(exp: &ChannelExperiment, algorithm: Algorithm, opts: &RecoveryOptions) -> Result<ChannelRecord> {
    let (mut recovery, sigma) = base_record(exp, algorithm);
    let r = recover(&exp.op, &exp.y, algorithm, exp.s.max(1), opts)?;
    let (precision, recall) = support_precision_recall(&exp.truth, &r.x_hat);
    recovery.rel_error = relative_error(&exp.truth, &r.x_hat);
    recovery.residual = r.residual_norm;
    recovery.iterations = r.iterations;
    recovery.converged = r.converged;
    Ok(ChannelRecord {
        recovery,
        precision,
        recall,
        sigma_s_over_sqrt_s: sigma,
        tau: exp.noise_tau,
        x_hat: Some(r.x_hat),
        error: None,
    })
}

/// [`try_run_experiment`] with solver errors captured in the record.
pub fn run_experiment(exp: &ChannelExperiment, algorithm: Algorithm, opts: &RecoveryOptions) -> ChannelRecord {
    try_run_experiment(exp, algorithm, opts).unwrap_or_else(|e| {
        let (recovery, sigma) = base_record(exp, algorithm);
        ChannelRecord {
            recovery,
            precision: 0.0,
            recall: 0.0,
            sigma_s_over_sqrt_s: sigma,
            tau: exp.noise_tau,
            x_hat: None,
            error: Some((e.code().to_string(), e.to_string())),
        }
    })
}
