//! The protocol observable Q₃(T) = (1/3)Σₖ pos[Q(kT/3)] in the energy basis.
//!
//! With pos(Q) = (1 + sgn Q)/2 and Heisenberg phases, the matrix reads
//! Q₃[n,m] = δₙₘ/2 + (1/6) Σₖ e^{ikθₙₘ} Sₙₘ with θₙₘ = 2πτ(Eₙ − Eₘ)/3.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::numerics::eigen::{HermitianMatrix, HermitianOperator};
use crate::spectra::{SgnMatrix, SpectrumSlice};

/// Per-level phase factors dₙ = e^{i 2πτ (Eₙ − E_ref)/3}. Measuring energies
/// from the first retained level keeps the phases small and exact under
/// global energy shifts.
pub fn step_phases(energies: &[f64], tau: f64) -> Vec<Complex64> {
    let reference = energies.first().copied().unwrap_or(0.0);
    energies
        .iter()
        .map(|e| Complex64::from_polar(1.0, 2.0 * PI * tau * (e - reference) / 3.0))
        .collect()
}

/// Dense Q₃ on the slice.
pub fn build_q3(slice: &SpectrumSlice, tau: f64) -> HermitianMatrix {
    let d = step_phases(slice.energies(), tau);
    let s = slice.sgn();
    HermitianMatrix::from_upper(slice.dim(), |i, j| {
        let sij = s.get(i, j);
        let diag = if i == j { 0.5 } else { 0.0 };
        if sij == 0.0 {
            return Complex64::new(diag, 0.0);
        }
        let ph = d[i] * d[j].conj();
        let sum = Complex64::new(1.0, 0.0) + ph + ph * ph;
        Complex64::new(diag, 0.0) + sum * (sij / 6.0)
    })
}

/// Matrix-free Q₃: v/2 + (1/6) Σₖ Dᵏ S D⁻ᵏ v.
pub struct Q3Operator<'a> {
    sgn: &'a SgnMatrix,
    phases: Vec<Complex64>,
}

impl<'a> Q3Operator<'a> {
    pub fn new(slice: &'a SpectrumSlice, tau: f64) -> Self {
        Self {
            sgn: slice.sgn(),
            phases: step_phases(slice.energies(), tau),
        }
    }
}

impl HermitianOperator for Q3Operator<'_> {
    fn dim(&self) -> usize {
        self.phases.len()
    }

    fn apply(&self, x: &[Complex64], out: &mut [Complex64]) {
        let n = x.len();
        let mut w = x.to_vec();
        let mut u = vec![Complex64::default(); n];
        for (o, v) in out.iter_mut().zip(x) {
            *o = v * 0.5;
        }
        let mut power = vec![Complex64::new(1.0, 0.0); n];
        for k in 0..3 {
            if k > 0 {
                for i in 0..n {
                    power[i] *= self.phases[i];
                    w[i] = x[i] * power[i].conj();
                }
            }
            self.sgn.apply(&w, &mut u);
            for i in 0..n {
                out[i] += power[i] * u[i] / 6.0;
            }
        }
    }
}
