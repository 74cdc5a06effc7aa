//! Sampled protocol runs for the six-level reference state and an eigenstate.

use std::sync::Arc;

use dyncert::protocol::{reference_state, QuantumState, ReferenceState};
use dyncert::simulate::{grid_score, run_protocol};
use dyncert::{ModelSystem, Result, SpectrumSlice};

fn main() -> Result<()> {
    let slice = Arc::new(SpectrumSlice::lowest(ModelSystem::Harmonic, 6)?);
    let psi6 = reference_state(ReferenceState::Psi6, slice.clone())?;
    let exact = grid_score(&psi6, 1.0)?;
    let est = run_protocol(&psi6, 1.0, 200_000, 42)?;
    println!(
        "psi6: exact {exact:.5}, sampled {:.5} ± {:.5}",
        est.p3_hat, est.stderr
    );

    let ground = QuantumState::eigenstate(slice, 0)?;
    let est = run_protocol(&ground, 1.0, 200_000, 42)?;
    println!(
        "ground state: sampled {:.5} ± {:.5}",
        est.p3_hat, est.stderr
    );
    Ok(())
}
