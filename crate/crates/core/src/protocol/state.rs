//! Pure states on a spectrum slice, including the reference states of the
//! harmonic-oscillator analysis.

use std::f64::consts::PI;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectra::levels::first_index;
use crate::spectra::SpectrumSlice;

pub const NORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct QuantumState {
    slice: Arc<SpectrumSlice>,
    amplitudes: Vec<Complex64>,
}

impl QuantumState {
    /// Amplitudes aligned with the slice indices; must have unit norm.
    pub fn new(slice: Arc<SpectrumSlice>, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != slice.dim() {
            return Err(Error::InvalidParameter(format!(
                "{} amplitudes for a slice of {} levels",
                amplitudes.len(),
                slice.dim()
            )));
        }
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidParameter(format!(
                "state norm {norm} is not 1"
            )));
        }
        Ok(Self { slice, amplitudes })
    }

    /// Rescales to unit norm first.
    pub fn normalized(slice: Arc<SpectrumSlice>, mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::InvalidParameter(
                "state has zero or non-finite norm".into(),
            ));
        }
        amplitudes.iter_mut().for_each(|z| *z /= norm);
        Self::new(slice, amplitudes)
    }

    /// State with the given amplitudes on levels n (normalized).
    pub fn from_levels(
        slice: Arc<SpectrumSlice>,
        components: &[(usize, Complex64)],
    ) -> Result<Self> {
        let mut amps = vec![Complex64::default(); slice.dim()];
        for &(n, c) in components {
            let pos = slice.position(n).ok_or(Error::InsufficientSlice(n))?;
            amps[pos] += c;
        }
        Self::normalized(slice, amps)
    }

    /// The energy eigenstate |Eₙ⟩.
    pub fn eigenstate(slice: Arc<SpectrumSlice>, n: usize) -> Result<Self> {
        Self::from_levels(slice, &[(n, Complex64::new(1.0, 0.0))])
    }

    pub fn slice(&self) -> &Arc<SpectrumSlice> {
        &self.slice
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Amplitudes after evolving for t (in units of 2π/ω₀): cₙe^{−i2πEₙt}.
    pub fn evolved_amplitudes(&self, t: f64) -> Vec<Complex64> {
        self.amplitudes
            .iter()
            .zip(self.slice.energies())
            .map(|(c, e)| c * Complex64::from_polar(1.0, -2.0 * PI * e * t))
            .collect()
    }

    /// The state after evolving for t (units of 2π/ω₀).
    pub fn evolved(&self, t: f64) -> QuantumState {
        QuantumState {
            slice: self.slice.clone(),
            amplitudes: self.evolved_amplitudes(t),
        }
    }

    /// |⟨φ|ψ⟩|² between states on the same slice.
    pub fn overlap(&self, other: &QuantumState) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            .norm_sqr()
    }

    pub fn to_file(&self) -> StateFile {
        StateFile {
            indices: Some(self.slice.indices().to_vec()),
            amplitudes: self.amplitudes.clone(),
        }
    }
}

/// On-disk state: amplitudes as [re, im] pairs on the listed levels
/// (levels 0, 1, … when `indices` is absent).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub indices: Option<Vec<usize>>,
    pub amplitudes: Vec<Complex64>,
}

impl StateFile {
    pub fn into_state(self, slice: Arc<SpectrumSlice>) -> Result<QuantumState> {
        let first = slice.indices()[0];
        let indices = self
            .indices
            .unwrap_or_else(|| (first..first + self.amplitudes.len()).collect());
        if indices.len() != self.amplitudes.len() {
            return Err(Error::InvalidParameter(
                "state file indices and amplitudes differ in length".into(),
            ));
        }
        let comps: Vec<_> = indices.into_iter().zip(self.amplitudes).collect();
        QuantumState::from_levels(slice, &comps)
    }

    /// Largest level referenced by the file.
    pub fn max_index(&self) -> usize {
        match &self.indices {
            Some(ix) => ix.iter().copied().max().unwrap_or(0),
            None => self.amplitudes.len().saturating_sub(1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReferenceState {
    /// Optimal n ≤ 6 state at τ = 1.
    Psi6,
    /// Optimal n ≤ 4 state with a tuned probing duration.
    Psi4,
}

/// Phase step of the n ≤ 4 reference state.
pub const PSI4_THETA: f64 = 0.215 * PI;
const PSI4_WEIGHTS: [f64; 5] = [0.279, 0.191, 0.121, 0.309, 0.100];

impl ReferenceState {
    /// Highest level the state occupies.
    pub fn max_level(self) -> usize {
        match self {
            ReferenceState::Psi6 => 6,
            ReferenceState::Psi4 => 4,
        }
    }

    /// Coefficients on levels 0..=max_level (before normalization).
    pub fn coefficients(self) -> Vec<Complex64> {
        match self {
            ReferenceState::Psi6 => {
                let mut c = vec![Complex64::default(); 7];
                c[0] = Complex64::new(4.0 / 42f64.sqrt(), 0.0);
                c[3] = Complex64::new(-(0.5f64).sqrt(), 0.0);
                c[6] = Complex64::new((5.0f64 / 42.0).sqrt(), 0.0);
                c
            }
            ReferenceState::Psi4 => PSI4_WEIGHTS
                .iter()
                .enumerate()
                .map(|(n, p)| Complex64::from_polar(p.sqrt(), -(n as f64) * PSI4_THETA))
                .collect(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ReferenceState::Psi6 => "psi6",
            ReferenceState::Psi4 => "psi4",
        }
    }
}

impl FromStr for ReferenceState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "psi6" => Ok(ReferenceState::Psi6),
            "psi4" => Ok(ReferenceState::Psi4),
            _ => Err(Error::InvalidParameter(format!(
                "unknown reference state {s:?}"
            ))),
        }
    }
}

/// The reference state transplanted onto the slice's lowest levels |E₀⟩, |E₁⟩, ….
pub fn reference_state(kind: ReferenceState, slice: Arc<SpectrumSlice>) -> Result<QuantumState> {
    let first = slice.indices()[0];
    let comps: Vec<_> = kind
        .coefficients()
        .into_iter()
        .enumerate()
        .map(|(k, c)| (first + k, c))
        .collect();
    let lowest = first_index(slice.model());
    if first != lowest {
        return Err(Error::InsufficientSlice(lowest));
    }
    QuantumState::from_levels(slice, &comps)
}
