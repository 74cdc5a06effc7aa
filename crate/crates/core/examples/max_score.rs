//! Largest quantum score on a truncated harmonic basis and a short τ scan.

use std::sync::Arc;

use dyncert::protocol::{linear_grid, max_score, scan_tau, WindowPolicy};
use dyncert::{ModelSystem, Result, SpectrumSlice};

fn main() -> Result<()> {
    let slice = Arc::new(SpectrumSlice::lowest(ModelSystem::Harmonic, 200)?);
    let best = max_score(slice.clone(), 1.0)?;
    println!("harmonic, 201 levels, tau=1: P3 = {:.6}", best.p3_max);
    for pt in scan_tau(
        &ModelSystem::Harmonic,
        &linear_grid(0.8, 1.4, 6),
        &WindowPolicy::Fixed(slice),
    ) {
        println!(
            "  tau={:.2}  P3={:.6}",
            pt.tau,
            pt.p3_max.unwrap_or(f64::NAN)
        );
    }
    let kerr = ModelSystem::kerr(0.02)?;
    for pt in scan_tau(
        &kerr,
        &[0.8, 1.0, 1.2],
        &WindowPolicy::FromTau { max_index: None },
    ) {
        println!(
            "kerr alpha=0.02 tau={:.2}: {:?} levels, P3={:?}",
            pt.tau, pt.levels, pt.p3_max
        );
    }
    Ok(())
}
