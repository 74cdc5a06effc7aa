//! Phase-space pictures: Cartesian Wigner function of the six-level state and
//! the angular quasi-distribution of a pendulum optimum.

use std::sync::Arc;

use dyncert::phasespace::{wigner_angular, wigner_cartesian};
use dyncert::protocol::{linear_grid, max_score, reference_state, ReferenceState};
use dyncert::{ModelSystem, Result, SpectrumSlice};

fn main() -> Result<()> {
    let slice = Arc::new(SpectrumSlice::lowest(ModelSystem::Harmonic, 6)?);
    let psi6 = reference_state(ReferenceState::Psi6, slice)?;
    let axis = linear_grid(-5.0, 5.0, 100);
    let w = wigner_cartesian(&psi6, &axis, &axis)?;
    println!(
        "psi6: min W = {:.4}, integral = {:.6}",
        w.min(),
        w.integral(false)
    );

    let pendulum = ModelSystem::pendulum(-0.02)?;
    let best = max_score(Arc::new(SpectrumSlice::lowest(pendulum, 6)?), 1.0)?;
    let phi = linear_grid(-std::f64::consts::PI, std::f64::consts::PI, 120);
    let w = wigner_angular(&best.state, &phi, (-20, 20))?;
    println!(
        "pendulum optimum (P3={:.4}): min W = {:.4}, total = {:.6}",
        best.p3_max,
        w.min(),
        w.integral(true)
    );
    Ok(())
}
