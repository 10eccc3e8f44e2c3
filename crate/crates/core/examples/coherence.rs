//! Coherence of Gabor systems against the Welch bound, and the Alltop
//! window reaching `1/sqrt(n)` for prime n.
//!
//! cargo run --release --example coherence

use gabor_cs::analysis::welch_bound;
use gabor_cs::{GaborOperator, Window, WindowKind};

fn main() -> gabor_cs::Result<()> {
    println!("{:>4} {:>10} {:>10} {:>10} {:>10} {:>10}", "n", "welch", "alltop", "steinhaus", "rademacher", "1/sqrt(n)");
    for n in [5usize, 7, 11, 13, 17, 19, 23] {
        let mu = |kind| -> gabor_cs::Result<f64> { Ok(GaborOperator::new(Window::generate(kind, n, 3)?).coherence()) };
        println!(
            "{n:>4} {:>10.6} {:>10.6} {:>10.6} {:>10.6} {:>10.6}",
            welch_bound(n, n * n)?,
            mu(WindowKind::Alltop)?,
            mu(WindowKind::Steinhaus)?,
            mu(WindowKind::Rademacher)?,
            1.0 / (n as f64).sqrt()
        );
    }

    // Random windows: coherence over seeds.
    let n = 64;
    let mus: Vec<f64> = (0..20)
        .map(|seed| Window::generate(WindowKind::Steinhaus, n, seed).map(|g| GaborOperator::new(g).coherence()))
        .collect::<gabor_cs::Result<_>>()?;
    let mean = mus.iter().sum::<f64>() / mus.len() as f64;
    println!("steinhaus n = {n}: mean coherence over 20 seeds {mean:.4}, sqrt(log n / n) = {:.4}", ((n as f64).ln() / n as f64).sqrt());
    Ok(())
}
