//! Phase-transition sweeps: success rates of recovery over a grid of
//! `(n, s, window, algorithm)` cells.

use std::path::PathBuf;

use rayon::prelude::*;

use crate::channel::{run_experiment, ChannelExperiment, ChannelRecord, CoefficientDistribution};
use crate::error::{Error, Result};
use crate::recovery::{Algorithm, RecoveryOptions};
use crate::rng::{derive_seed, tag};
use crate::table::{OutputFormat, Table};
use crate::tf::{is_prime, Window, WindowKind};

pub const DEFAULT_SUCCESS_THRESHOLD: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub ns: Vec<usize>,
    pub ss: Vec<usize>,
    pub windows: Vec<WindowKind>,
    pub algorithms: Vec<Algorithm>,
    pub trials: usize,
    pub base_seed: u64,
    pub noise_tau: f64,
    /// A trial succeeds when its relative error is below this.
    pub threshold: f64,
    pub distribution: CoefficientDistribution,
    pub recovery: RecoveryOptions,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            ns: vec![16],
            ss: vec![1],
            windows: vec![WindowKind::Rademacher],
            algorithms: vec![Algorithm::Omp],
            trials: 10,
            base_seed: 0,
            noise_tau: 0.0,
            threshold: DEFAULT_SUCCESS_THRESHOLD,
            distribution: CoefficientDistribution::default(),
            recovery: RecoveryOptions::default(),
            output: None,
            format: OutputFormat::Csv,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        let empty = [
            ("n", self.ns.is_empty()),
            ("s", self.ss.is_empty()),
            ("window", self.windows.is_empty()),
            ("algorithm", self.algorithms.is_empty()),
        ];
        if let Some((name, _)) = empty.iter().find(|(_, e)| *e) {
            return Err(Error::InvalidParameter(format!("the {name} list is empty")));
        }
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be at least 1".into()));
        }
        if !(self.threshold > 0.0) {
            return Err(Error::InvalidParameter(format!("threshold must be positive, got {}", self.threshold)));
        }
        if !(self.noise_tau >= 0.0) {
            return Err(Error::InvalidParameter(format!("noise must be >= 0, got {}", self.noise_tau)));
        }
        for &n in &self.ns {
            if n < 2 {
                return Err(Error::InvalidParameter(format!("n must be at least 2, got {n}")));
            }
            if self.windows.contains(&WindowKind::Alltop) && (n < 5 || !is_prime(n)) {
                return Err(Error::InvalidParameter(format!("the Alltop window needs a prime n >= 5, got {n}")));
            }
            if let Some(&s) = self.ss.iter().find(|&&s| s > n * n) {
                return Err(Error::InvalidParameter(format!("s = {s} exceeds n^2 = {}", n * n)));
            }
        }
        if self.windows.contains(&WindowKind::Custom) {
            return Err(Error::InvalidParameter("sweeps draw their own windows; custom is not available".into()));
        }
        Ok(())
    }
}

/// Seed of trial `trial` for the problem `(n, s, window)`. Every algorithm
/// in a sweep sees the same window, channel and noise for a given trial.
pub fn trial_seed(base_seed: u64, n: usize, s: usize, window: WindowKind, trial: usize) -> u64 {
    derive_seed(base_seed, &[tag::SWEEP, n as u64, s as u64, window as u64, trial as u64])
}

/// One trial of one cell. Window generation and solver failures end up in
/// the record's `error`.
pub fn run_trial(config: &SweepConfig, n: usize, s: usize, window: WindowKind, algo: Algorithm, trial: usize) -> Result<ChannelRecord> {
    let seed = trial_seed(config.base_seed, n, s, window, trial);
    let g = Window::generate(window, n, seed)?;
    let exp = ChannelExperiment::generate(g, s, config.distribution, config.noise_tau, seed)?;
    Ok(run_experiment(&exp, algo, &config.recovery))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Cell {
    n: usize,
    s: usize,
    window: WindowKind,
    algo: Algorithm,
}

/// Cells in canonical order: `n`, then `s`, window, algorithm.
fn cells(config: &SweepConfig) -> Vec<Cell> {
    let mut out = Vec::new();
    for &n in &config.ns {
        for &s in &config.ss {
            for &window in &config.windows {
                for &algo in &config.algorithms {
                    out.push(Cell { n, s, window, algo });
                }
            }
        }
    }
    out
}

pub const COLUMNS: [&str; 8] = ["n", "s", "window", "algo", "trials", "success_rate", "mean_rel_error", "mean_iters"];

/// One row per cell. `mean_rel_error` averages the trials whose solver
/// returned; trials that failed count as unsuccessful.
pub fn phase_transition(config: &SweepConfig) -> Result<Table> {
    config.validate()?;
    let cells = cells(config);
    let jobs: Vec<(usize, usize)> =
        (0..cells.len()).flat_map(|c| (0..config.trials).map(move |t| (c, t))).collect();
    let records: Vec<ChannelRecord> = jobs
        .par_iter()
        .map(|&(c, t)| {
            let cell = cells[c];
            run_trial(config, cell.n, cell.s, cell.window, cell.algo, t)
        })
        .collect::<Result<_>>()?;
    let mut table = Table::new(COLUMNS);
    for (cell, chunk) in cells.iter().zip(records.chunks(config.trials)) {
        let successes = chunk.iter().filter(|r| r.succeeded(config.threshold)).count();
        let ok: Vec<&ChannelRecord> = chunk.iter().filter(|r| r.error.is_none()).collect();
        let mean_err = if ok.is_empty() {
            f64::NAN
        } else {
            ok.iter().map(|r| r.recovery.rel_error).sum::<f64>() / ok.len() as f64
        };
        let mean_iters = chunk.iter().map(|r| r.recovery.iterations as f64).sum::<f64>() / chunk.len() as f64;
        table.push(vec![
            cell.n.into(),
            cell.s.into(),
            cell.window.name().into(),
            cell.algo.name().into(),
            config.trials.into(),
            (successes as f64 / config.trials as f64).into(),
            mean_err.into(),
            mean_iters.into(),
        ])?;
    }
    Ok(table)
}
