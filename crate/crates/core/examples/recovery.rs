//! Recovers a sparse vector from Gabor measurements with every solver.
//!
//! cargo run --release --example recovery

use gabor_cs::recovery::{guarantee_status, recover, relative_error, Algorithm, RecoveryOptions};
use gabor_cs::{Complex64, GaborOperator, SparseVector, Window, WindowKind};

fn main() -> gabor_cs::Result<()> {
    let n = 64;
    let s = 4;
    let op = GaborOperator::new(Window::generate(WindowKind::Rademacher, n, 5)?);
    let truth = SparseVector::from_pairs(
        n * n,
        vec![
            (17, Complex64::new(1.0, 0.0)),
            (900, Complex64::new(0.0, -0.8)),
            (2048, Complex64::new(0.5, 0.5)),
            (4000, Complex64::new(-1.2, 0.1)),
        ],
    )?;
    let y = op.synthesis_sparse(&truth)?;

    for algo in Algorithm::ALL {
        let r = recover(&op, &y, algo, s, &RecoveryOptions::default())?;
        println!(
            "{:<7} rel error {:.2e}  residual {:.2e}  iters {:>5}  converged {}  {:?}",
            algo.name(),
            relative_error(&truth, &r.x_hat),
            r.residual_norm,
            r.iterations,
            r.converged,
            r.elapsed
        );
    }

    // Published RIP thresholds and what they say for a given delta.
    for algo in Algorithm::ALL {
        if let Some(t) = algo.thresholds() {
            let status = guarantee_status(algo, s, Some((t.kappa * s, 0.3)));
            println!("{:<7} needs delta_{{{}s}} < {:.4}; at 0.3: {}", algo.name(), t.kappa, t.delta_star, status.name());
        }
    }
    Ok(())
}
