//! Applies the Gabor synthesis operator and its adjoint through FFTs and
//! compares against the explicit n x n² matrix.
//!
//! cargo run --release --example fast_operator

use std::time::Instant;

use gabor_cs::{Complex64, GaborOperator, SparseVector, Window, WindowKind};

fn main() -> gabor_cs::Result<()> {
    let n = 32;
    let op = GaborOperator::new(Window::generate(WindowKind::Steinhaus, n, 1)?);
    let x: Vec<Complex64> = (0..n * n).map(|i| Complex64::new((i as f64).sin(), (i as f64 * 0.3).cos())).collect();

    let t = Instant::now();
    let y = op.synthesis(&x)?;
    let fast = t.elapsed();

    let dense = op.build_dense()?;
    let t = Instant::now();
    let y_dense = &dense * nalgebra::DVector::from_column_slice(&x);
    let slow = t.elapsed();

    let err = y.iter().zip(y_dense.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    println!("n = {n}: fast {fast:?}, dense {slow:?}, max difference {err:.2e}");

    // Ψ Ψ* y = n ‖g‖² y for every y.
    let back = op.synthesis(&op.analysis(&y)?)?;
    let frame = op.frame_bound();
    let dev = back.iter().zip(&y).map(|(a, b)| (a - frame * b).norm()).fold(0.0, f64::max);
    println!("frame bound {frame}, max |ΨΨ*y - Fy| = {dev:.2e}");

    // Sparse inputs take a direct path.
    let sparse = SparseVector::from_pairs(n * n, vec![(5, Complex64::new(1.0, 0.0)), (700, Complex64::new(0.0, -2.0))])?;
    let ys = op.synthesis_sparse(&sparse)?;
    let yd = op.synthesis(&sparse.to_dense())?;
    let dev = ys.iter().zip(&yd).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    println!("sparse vs dense synthesis: {dev:.2e}");
    Ok(())
}
