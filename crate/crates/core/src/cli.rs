//! The `gabor-cs` command line.
//!
//! Every subcommand writes one table to `--out` (default stdout) as CSV or
//! JSON. Exit status is 0 on success, 1 on a domain error and 2 on a usage
//! error; errors are reported as `error,<code>,<message>` on stderr.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::analysis::{exact_rip_constant, monte_carlo_rip, verify_identities, welch_bound, RipEstimate};
use crate::channel::{run_experiment, try_run_experiment, ChannelExperiment, ChannelRecord, CoefficientDistribution};
use crate::error::{Error, Result};
use crate::operator::GaborOperator;
use crate::recovery::{recover, Algorithm, RecoveryOptions, RecoveryRecord};
use crate::rng::{derive_seed, tag};
use crate::svg::emit_svg_scatter;
use crate::sweep::{phase_transition, SweepConfig, DEFAULT_SUCCESS_THRESHOLD};
use crate::table::{complex_vector_table, dense_matrix_table, parse_complex_vector, OutputFormat, Table};
use crate::tf::{Window, WindowKind};

pub const JOBS_ENV: &str = "GABOR_RIP_JOBS";

#[derive(Debug, Parser)]
#[command(name = "gabor-cs", version, about = "Gabor synthesis matrices for compressive sensing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Output {
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: OutputFormat,
    /// Worker threads for parallel work.
    #[arg(long, env = JOBS_ENV)]
    jobs: Option<usize>,
}

#[derive(Debug, Args)]
struct WindowArgs {
    #[arg(long)]
    window: WindowKind,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the unit-norm window `g`.
    GenWindow {
        #[command(flatten)]
        w: WindowArgs,
        #[command(flatten)]
        o: Output,
    },
    /// `y = Ψ x` for `x` read from an `index,re,im` CSV, or the dense matrix.
    Apply {
        #[command(flatten)]
        w: WindowArgs,
        #[arg(long, required_unless_present = "dense")]
        input: Option<PathBuf>,
        /// Print `Ψ` itself as `row,col,re,im`.
        #[arg(long)]
        dense: bool,
        #[command(flatten)]
        o: Output,
    },
    /// `Ψ* y` for `y` read from an `index,re,im` CSV.
    Adjoint {
        #[command(flatten)]
        w: WindowArgs,
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        o: Output,
    },
    /// Coherence of the Gabor system and the Welch bound.
    Coherence {
        #[command(flatten)]
        w: WindowArgs,
        #[command(flatten)]
        o: Output,
    },
    /// Monte Carlo lower bounds on `δ_s`.
    RipEstimate {
        #[command(flatten)]
        w: WindowArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        s: Vec<usize>,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[command(flatten)]
        o: Output,
    },
    /// Exhaustive `δ_s` over all supports.
    RipExact {
        #[command(flatten)]
        w: WindowArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        s: Vec<usize>,
        #[command(flatten)]
        o: Output,
    },
    /// Numerical check of the block-matrix identities.
    VerifyIdentities {
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[command(flatten)]
        o: Output,
    },
    /// Recover a random sparse `x` from `Ψ x + e`, or `x` from a measured `y`.
    Recover {
        #[command(flatten)]
        w: WindowArgs,
        #[arg(long)]
        s: usize,
        #[arg(long, default_value = "htp")]
        algo: Algorithm,
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        /// Measured `y` as `index,re,im`; prints the estimate instead of a record.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        max_iters: Option<usize>,
        #[command(flatten)]
        o: Output,
    },
    /// Channel identification trials, one row per trial and algorithm.
    ChannelSim {
        #[command(flatten)]
        w: WindowArgs,
        #[arg(long)]
        s: usize,
        #[arg(long, value_delimiter = ',', default_value = "omp")]
        algo: Vec<Algorithm>,
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[arg(long, default_value = "unit_phase")]
        coefficients: CoefficientDistribution,
        #[command(flatten)]
        o: Output,
    },
    /// Success rates over a grid of `(n, s, window, algo)` cells.
    PhaseTransition {
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        s: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "rademacher")]
        window: Vec<WindowKind>,
        #[arg(long, value_delimiter = ',', default_value = "omp")]
        algo: Vec<Algorithm>,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        #[arg(long, default_value_t = DEFAULT_SUCCESS_THRESHOLD)]
        threshold: f64,
        #[command(flatten)]
        o: Output,
    },
    /// Scatter plot of two CSV columns as SVG.
    Plot {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        series: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Runs the command line with stdout and stderr.
pub fn cli_dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

/// Parses `argv` (program name first), runs it, and returns the exit status.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error,{},{}", e.code(), e);
            if matches!(e, Error::Usage(_)) {
                2
            } else {
                1
            }
        }
    }
}

fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    match jobs {
        None => f(),
        Some(0) => Err(Error::Usage("--jobs must be at least 1".into())),
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()
            .map_err(|e| Error::Resource(e.to_string()))?
            .install(f),
    }
}

fn emit(table: &Table, o: &Output, out: &mut dyn Write) -> Result<()> {
    let text = o.format.render(table);
    match &o.out {
        Some(path) => std::fs::write(path, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn operator(w: &WindowArgs) -> Result<GaborOperator> {
    Ok(GaborOperator::new(Window::generate(w.window, w.n, w.seed)?))
}

fn execute(command: Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::GenWindow { w, o } => {
            let window = Window::generate(w.window, w.n, w.seed)?;
            emit(&complex_vector_table(window.g()), &o, out)
        }
        Command::Apply { w, input, dense, o } => {
            let op = operator(&w)?;
            let table = if dense {
                dense_matrix_table(&op.build_dense()?)
            } else {
                let path = input.expect("clap enforces --input");
                let x = parse_complex_vector(&read(&path)?, op.atoms())?;
                complex_vector_table(&op.synthesis(&x)?)
            };
            emit(&table, &o, out)
        }
        Command::Adjoint { w, input, o } => {
            let op = operator(&w)?;
            let y = parse_complex_vector(&read(&input)?, op.n())?;
            emit(&complex_vector_table(&op.analysis(&y)?), &o, out)
        }
        Command::Coherence { w, o } => {
            let op = operator(&w)?;
            let mut t = Table::new(["metric", "value"]);
            t.push(vec!["mu".into(), op.coherence().into()])?;
            t.push(vec!["welch".into(), welch_bound(op.n(), op.atoms())?.into()])?;
            emit(&t, &o, out)
        }
        Command::RipEstimate { w, s, trials, o } => {
            let op = operator(&w)?;
            let rows = with_jobs(o.jobs, || s.iter().map(|&s| monte_carlo_rip(&op, s, trials, w.seed)).collect::<Result<Vec<_>>>())?;
            emit(&RipEstimate::table(&rows), &o, out)
        }
        Command::RipExact { w, s, o } => {
            let op = operator(&w)?;
            let rows = with_jobs(o.jobs, || s.iter().map(|&s| exact_rip_constant(&op, s)).collect::<Result<Vec<_>>>())?;
            emit(&RipEstimate::table(&rows), &o, out)
        }
        Command::VerifyIdentities { n, o } => {
            let reports = with_jobs(o.jobs, || n.iter().map(|&n| verify_identities(n)).collect::<Result<Vec<_>>>())?;
            let mut t = Table::new(crate::analysis::IdentityReport::COLUMNS);
            for r in &reports {
                t.extend(r.table())?;
            }
            emit(&t, &o, out)?;
            let failed: Vec<String> =
                reports.iter().flat_map(|r| r.failures().map(|c| format!("{}@n={}", c.id, c.n))).collect();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("identity checks failed: {}", failed.join(" "))))
            }
        }
        Command::Recover { w, s, algo, noise, input, max_iters, o } => {
            let opts = RecoveryOptions { max_iters, ..Default::default() };
            let window = Window::generate(w.window, w.n, w.seed)?;
            match input {
                Some(path) => {
                    let op = GaborOperator::new(window);
                    let y = parse_complex_vector(&read(&path)?, op.n())?;
                    let r = recover(&op, &y, algo, s, &opts)?;
                    emit(&complex_vector_table(&r.x_hat.to_dense()), &o, out)
                }
                None => {
                    let exp = ChannelExperiment::generate(window, s, CoefficientDistribution::default(), noise, w.seed)?;
                    let rec = try_run_experiment(&exp, algo, &opts)?;
                    let mut t = Table::new(RecoveryRecord::COLUMNS);
                    t.push(rec.recovery.to_row())?;
                    emit(&t, &o, out)
                }
            }
        }
        Command::ChannelSim { w, s, algo, noise, trials, coefficients, o } => {
            if trials == 0 {
                return Err(Error::InvalidParameter("trials must be at least 1".into()));
            }
            Window::generate(w.window, w.n, w.seed)?;
            let records = with_jobs(o.jobs, || {
                use rayon::prelude::*;
                let jobs: Vec<(u64, Algorithm)> =
                    (0..trials as u64).flat_map(|t| algo.iter().map(move |&a| (t, a))).collect();
                jobs.par_iter()
                    .map(|&(t, a)| {
                        let seed = derive_seed(w.seed, &[tag::PROBE, t]);
                        let window = Window::generate(w.window, w.n, seed)?;
                        let exp = ChannelExperiment::generate(window, s, coefficients, noise, seed)?;
                        Ok(run_experiment(&exp, a, &RecoveryOptions::default()))
                    })
                    .collect::<Result<Vec<ChannelRecord>>>()
            })?;
            emit(&ChannelRecord::table(&records), &o, out)
        }
        Command::PhaseTransition { n, s, window, algo, trials, seed, noise, threshold, o } => {
            let config = SweepConfig {
                ns: n,
                ss: s,
                windows: window,
                algorithms: algo,
                trials,
                base_seed: seed,
                noise_tau: noise,
                threshold,
                output: o.out.clone(),
                format: o.format,
                ..Default::default()
            };
            let t = with_jobs(o.jobs, || phase_transition(&config))?;
            emit(&t, &o, out)
        }
        Command::Plot { input, x, y, series, out: path } => {
            let table = Table::from_csv(&read(&input)?)?;
            emit_svg_scatter(&table, &x, &y, series.as_deref(), &path)
        }
    }
}
