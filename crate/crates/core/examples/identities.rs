//! Numerical check of the block-matrix identities behind the chaos
//! representation, and the representation itself for one vector.
//!
//! cargo run --example identities

use gabor_cs::analysis::{chaos_rip_link, verify_identities};
use gabor_cs::{Complex64, GaborOperator, Window, WindowKind};

fn main() -> gabor_cs::Result<()> {
    let report = verify_identities(6)?;
    print!("{}", report.table().to_csv());
    assert!(report.all_passed());

    let n = 8;
    let op = GaborOperator::new(Window::generate(WindowKind::Steinhaus, n, 2)?);
    let mut x = vec![Complex64::new(0.0, 0.0); n * n];
    x[3] = Complex64::new(0.6, 0.0);
    x[20] = Complex64::new(0.0, 0.6);
    x[41] = Complex64::new(-0.3, 0.4);
    let (lhs, rhs) = chaos_rip_link(&op, &x)?;
    println!("‖Ψx‖² - ‖x‖² = {lhs:.15}");
    println!("ε*B(x)ε / n  = {rhs:.15}");
    Ok(())
}
