//! Maximum quantum score and scores of given states.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::q3::{build_q3, Q3Operator};
use super::state::QuantumState;
use crate::classical::{EnergyWindow, ModelSystem};
use crate::error::{Error, Result};
use crate::numerics::eigen::{
    canonical_phase, hermitian_max_eigenpair, lanczos_max_eigenpair, HermitianOperator,
    LanczosOptions, DENSE_LIMIT,
};
use crate::spectra::SpectrumSlice;

#[derive(Debug, Clone)]
pub struct ScoreResult {
    pub p3_max: f64,
    pub state: QuantumState,
    pub tau: f64,
    pub window: EnergyWindow,
}

/// JSON form of a score.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreRecord {
    pub model: ModelSystem,
    pub alpha: Option<f64>,
    pub tau: f64,
    pub window: EnergyWindow,
    pub p3_max: f64,
    pub indices: Vec<usize>,
    pub amplitudes: Vec<Complex64>,
}

impl ScoreResult {
    pub fn record(&self) -> ScoreRecord {
        let slice = self.state.slice();
        ScoreRecord {
            model: *slice.model(),
            alpha: slice.model().alpha(),
            tau: self.tau,
            window: self.window,
            p3_max: self.p3_max,
            indices: slice.indices().to_vec(),
            amplitudes: self.state.amplitudes().to_vec(),
        }
    }
}

fn check_tau(tau: f64) -> Result<()> {
    if tau > 0.0 && tau.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "probing ratio must be positive, got {tau}"
        )))
    }
}

/// Largest eigenvalue of Q₃ on the slice (dense up to the dense limit,
/// matrix-free Lanczos beyond).
pub fn max_eigenvalue(slice: &SpectrumSlice, tau: f64) -> Result<(f64, Vec<Complex64>)> {
    check_tau(tau)?;
    let pair = if slice.dim() <= DENSE_LIMIT {
        hermitian_max_eigenpair(&build_q3(slice, tau))?
    } else {
        lanczos_max_eigenpair(&Q3Operator::new(slice, tau), &LanczosOptions::default())?
    };
    let mut v = pair.vector;
    canonical_phase(&mut v);
    Ok((pair.value, v))
}

pub fn max_score(slice: Arc<SpectrumSlice>, tau: f64) -> Result<ScoreResult> {
    let (value, vector) = max_eigenvalue(&slice, tau)?;
    let window = *slice.window();
    let state = QuantumState::normalized(slice, vector)?;
    Ok(ScoreResult {
        p3_max: value,
        state,
        tau,
        window,
    })
}

/// ⟨ψ|Q₃(τ)|ψ⟩.
pub fn score_state(state: &QuantumState, tau: f64) -> Result<f64> {
    check_tau(tau)?;
    let op = Q3Operator::new(state.slice(), tau);
    let x = state.amplitudes();
    let mut y = vec![Complex64::default(); op.dim()];
    op.apply(x, &mut y);
    Ok(x.iter().zip(&y).map(|(a, b)| (a.conj() * b).re).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::state::{reference_state, ReferenceState};

    fn harmonic(n: usize) -> Arc<SpectrumSlice> {
        Arc::new(SpectrumSlice::lowest(ModelSystem::Harmonic, n).unwrap())
    }

    #[test]
    fn harmonic_six_level_optimum() {
        let r = max_score(harmonic(6), 1.0).unwrap();
        assert!((r.p3_max - 0.687).abs() < 1e-3, "{}", r.p3_max);
        let psi6 = reference_state(ReferenceState::Psi6, harmonic(6)).unwrap();
        assert!(r.state.overlap(&psi6) > 0.999);
        assert!((score_state(&psi6, 1.0).unwrap() - r.p3_max).abs() < 1e-3);
    }

    #[test]
    fn no_violation_below_six() {
        assert!(max_score(harmonic(5), 1.0).unwrap().p3_max <= 2.0 / 3.0 + 1e-9);
    }

    #[test]
    fn boundary_durations_score_two_thirds() {
        for tau in [0.75, 1.5] {
            let v = max_score(harmonic(40), tau).unwrap().p3_max;
            assert!((v - 2.0 / 3.0).abs() < 1e-9, "tau={tau}: {v}");
        }
    }

    #[test]
    fn eigenstates_score_one_half() {
        let slice = harmonic(8);
        for n in 0..=8 {
            let s = QuantumState::eigenstate(slice.clone(), n).unwrap();
            assert!((score_state(&s, 1.1).unwrap() - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn energy_shift_invariance() {
        let slice = SpectrumSlice::lowest(ModelSystem::Pendulum { alpha: -0.02 }, 10).unwrap();
        let a = max_eigenvalue(&slice, 1.0).unwrap().0;
        let b = max_eigenvalue(&slice.with_energy_shift(123.456), 1.0)
            .unwrap()
            .0;
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn lanczos_path_agrees_with_dense() {
        let slice = SpectrumSlice::lowest(ModelSystem::Harmonic, 300).unwrap();
        let dense = max_eigenvalue(&slice, 1.0).unwrap().0;
        let op = Q3Operator::new(&slice, 1.0);
        let lz = lanczos_max_eigenpair(&op, &LanczosOptions::default())
            .unwrap()
            .value;
        assert!((dense - lz).abs() < 1e-9);
    }
}
