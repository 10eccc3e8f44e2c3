//! Identifies a sparse delay-Doppler channel from one probe signal, with and
//! without noise.
//!
//! cargo run --release --example channel_identification

use gabor_cs::channel::{try_run_experiment, ChannelExperiment, ChannelRecord, CoefficientDistribution};
use gabor_cs::recovery::{Algorithm, RecoveryOptions};
use gabor_cs::{Window, WindowKind};

fn main() -> gabor_cs::Result<()> {
    let n = 32;
    let s = 3;
    let mut records = Vec::new();
    for tau in [0.0, 0.01, 0.1] {
        for seed in 0..3 {
            let probe = Window::generate(WindowKind::Steinhaus, n, seed)?;
            let exp = ChannelExperiment::generate(probe, s, CoefficientDistribution::UnitModulusRandomPhase, tau, seed)?;
            for algo in [Algorithm::Omp, Algorithm::CoSaMP] {
                records.push(try_run_experiment(&exp, algo, &RecoveryOptions::default())?);
            }
        }
    }
    print!("{}", ChannelRecord::table(&records).to_csv());
    Ok(())
}
