//! Generates one window of each kind and prints its norm and a few samples.
//!
//! cargo run --example windows

use gabor_cs::tf::norm2;
use gabor_cs::{Window, WindowKind};

fn main() -> gabor_cs::Result<()> {
    let n = 7;
    for kind in [WindowKind::Rademacher, WindowKind::Steinhaus, WindowKind::Alltop, WindowKind::Gaussian] {
        let g = Window::generate(kind, n, 42)?;
        let head: Vec<String> = g.g().iter().take(3).map(|z| format!("{:+.4}{:+.4}i", z.re, z.im)).collect();
        println!("{kind:<10} |g| = {:.12}  g[0..3] = {}", norm2(g.g()), head.join(" "));
    }

    // Same seed, same window.
    let a = Window::generate(WindowKind::Steinhaus, 16, 9)?;
    let b = Window::generate(WindowKind::Steinhaus, 16, 9)?;
    assert_eq!(a.g(), b.g());

    // Alltop needs a prime n >= 5.
    match Window::generate(WindowKind::Alltop, 8, 0) {
        Err(e) => println!("alltop n=8: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
