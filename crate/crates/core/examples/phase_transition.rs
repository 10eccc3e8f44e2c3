//! Success rate of recovery as the sparsity grows, written as CSV and as an
//! SVG scatter plot.
//!
//! cargo run --release --example phase_transition [out_dir]

use std::path::PathBuf;

use gabor_cs::recovery::Algorithm;
use gabor_cs::svg::emit_svg_scatter;
use gabor_cs::sweep::{phase_transition, SweepConfig};
use gabor_cs::WindowKind;

fn main() -> gabor_cs::Result<()> {
    let out_dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(std::env::temp_dir);
    let config = SweepConfig {
        ns: vec![16],
        ss: (1..=10).collect(),
        windows: vec![WindowKind::Steinhaus],
        algorithms: vec![Algorithm::Omp, Algorithm::Htp, Algorithm::CoSaMP, Algorithm::Iht],
        trials: 40,
        base_seed: 1,
        ..Default::default()
    };
    let table = phase_transition(&config)?;
    print!("{}", table.to_csv());

    let csv = out_dir.join("phase_transition.csv");
    let svg = out_dir.join("phase_transition.svg");
    std::fs::write(&csv, table.to_csv())?;
    emit_svg_scatter(&table, "s", "success_rate", Some("algo"), &svg)?;
    eprintln!("wrote {} and {}", csv.display(), svg.display());
    Ok(())
}
