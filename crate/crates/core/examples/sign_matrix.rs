//! Matrix elements of sgn(q) in the energy eigenbasis, checked against quadrature.

use dyncert::spectra::{sgn_element, sgn_element_quadrature, Eigenbasis};
use dyncert::{ModelSystem, Result};

fn main() -> Result<()> {
    for model in [
        ModelSystem::Harmonic,
        ModelSystem::morse(8.0)?,
        ModelSystem::InfiniteWell,
    ] {
        let first = if matches!(model, ModelSystem::InfiniteWell) {
            1
        } else {
            0
        };
        let basis = Eigenbasis::new(model, first + 4)?;
        println!("{model}");
        for n in first..first + 3 {
            for m in first..first + 4 {
                let closed = sgn_element(&basis, n, m)?;
                let quad = sgn_element_quadrature(&basis, n, m)?;
                println!("  <{n}|sgn|{m}> = {closed:+.10}  (quadrature {quad:+.10})");
            }
        }
    }
    Ok(())
}
