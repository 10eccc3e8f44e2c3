//! Restricted isometry constants: exhaustive for small n, Monte Carlo lower
//! bounds for larger n.
//!
//! cargo run --release --example rip

use gabor_cs::analysis::{coherence_rip_bound, exact_rip_constant, monte_carlo_rip, RipEstimate};
use gabor_cs::{GaborOperator, Window, WindowKind};

fn main() -> gabor_cs::Result<()> {
    let op = GaborOperator::new(Window::generate(WindowKind::Alltop, 5, 0)?);
    let mu = op.coherence();
    let mut rows = Vec::new();
    for s in 2..=3 {
        let est = exact_rip_constant(&op, s)?;
        println!("alltop n=5 s={s}: delta = {:.6} over {} supports, (s-1)mu = {:.6}", est.delta_hat, est.support_count, coherence_rip_bound(mu, s));
        rows.push(est);
    }

    for n in [16usize, 32, 64] {
        let op = GaborOperator::new(Window::generate(WindowKind::Steinhaus, n, 7)?);
        for s in [2usize, 4, 8] {
            rows.push(monte_carlo_rip(&op, s, 300, 11)?);
        }
    }
    print!("{}", RipEstimate::table(&rows).to_csv());
    Ok(())
}
