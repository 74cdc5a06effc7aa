//! Phase-space quasi-probability grids: the Wigner function for Cartesian
//! coordinates and a discrete angular-momentum kernel for the pendulum.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::classical::ModelSystem;
use crate::error::{Error, Result};
use crate::numerics::mathieu::MathieuParity;
use crate::protocol::QuantumState;
use crate::simulate::density::position_grid;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WignerGrid {
    /// Positions (or angles).
    pub q_axis: Vec<f64>,
    /// Momenta (or angular momenta m).
    pub p_axis: Vec<f64>,
    /// values[i·p_axis.len() + j] = W(q_i, p_j).
    pub values: Vec<f64>,
}

impl WignerGrid {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.p_axis.len() + j]
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Σ over momenta (trapezoid in p for continuous axes, plain sum for m).
    pub fn position_marginal(&self, discrete: bool) -> Vec<f64> {
        let np = self.p_axis.len();
        (0..self.q_axis.len())
            .map(|i| {
                let row = &self.values[i * np..(i + 1) * np];
                if discrete {
                    row.iter().sum()
                } else {
                    trapezoid(&self.p_axis, row)
                }
            })
            .collect()
    }

    /// Total weight by trapezoid in q and p (sum over p when discrete).
    pub fn integral(&self, discrete: bool) -> f64 {
        trapezoid(&self.q_axis, &self.position_marginal(discrete))
    }

    /// CSV matrix: header row of momenta, then one row per position.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["q\\p".to_string()];
        header.extend(self.p_axis.iter().map(|p| p.to_string()));
        w.write_record(&header)
            .map_err(|e| Error::Io(e.to_string()))?;
        let np = self.p_axis.len();
        for (i, q) in self.q_axis.iter().enumerate() {
            let mut row = vec![q.to_string()];
            row.extend(
                self.values[i * np..(i + 1) * np]
                    .iter()
                    .map(|v| v.to_string()),
            );
            w.write_record(&row).map_err(|e| Error::Io(e.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Metadata written next to a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridMetadata {
    pub model: ModelSystem,
    pub alpha: Option<f64>,
    pub tau: Option<f64>,
    pub time: f64,
    pub kind: String,
    pub state_hash: String,
}

/// SHA-256 of the state's levels and amplitudes.
pub fn state_hash(state: &QuantumState) -> String {
    let payload = serde_json::to_string(&state.to_file()).expect("state serializes");
    hex::encode(Sha256::digest(payload.as_bytes()))
}

fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2)
        .zip(y.windows(2))
        .map(|(xs, ys)| 0.5 * (ys[0] + ys[1]) * (xs[1] - xs[0]))
        .sum()
}

fn psi(state: &QuantumState, x: f64) -> Complex64 {
    let slice = state.slice();
    let (lo, hi) = slice.model().configuration_domain();
    if x < lo || x > hi {
        return Complex64::default();
    }
    let basis = slice.basis();
    slice
        .indices()
        .iter()
        .zip(state.amplitudes())
        .map(|(&n, c)| c * basis.eval(n, x).map(|v| v.0).unwrap_or(0.0))
        .sum()
}

/// W(q, p) = (1/π) ∫ ψ*(q+y) ψ(q−y) e^{2ipy} dy (ħ = 1), by composite
/// Simpson quadrature in y over the region where both factors are supported.
pub fn wigner_cartesian(
    state: &QuantumState,
    q_axis: &[f64],
    p_axis: &[f64],
) -> Result<WignerGrid> {
    let model = *state.slice().model();
    if model.is_angular() {
        return Err(Error::Domain(format!(
            "{model} has an angular coordinate; use the angular kernel"
        )));
    }
    let support = position_grid(state, 1.0)?;
    let (left, right) = (support[0], support[support.len() - 1]);
    let p_max = p_axis.iter().fold(1.0_f64, |m, p| m.max(p.abs()));
    let step = ((right - left) / 4000.0).min(0.05 / p_max);
    let values: Vec<f64> = q_axis
        .par_iter()
        .flat_map_iter(|&q| {
            let reach = (right - q).min(q - left);
            let mut row = vec![0.0; p_axis.len()];
            if reach > 0.0 {
                let intervals = (((reach / step).ceil() as usize).max(2) + 1) & !1;
                let h = reach / intervals as f64;
                let f: Vec<(f64, Complex64)> = (0..=intervals)
                    .map(|k| {
                        let y = k as f64 * h;
                        let w = if k == 0 || k == intervals {
                            1.0
                        } else if k % 2 == 1 {
                            4.0
                        } else {
                            2.0
                        };
                        (
                            y,
                            psi(state, q + y).conj() * psi(state, q - y) * (w * h / 3.0),
                        )
                    })
                    .collect();
                for (j, &p) in p_axis.iter().enumerate() {
                    let s: f64 = f
                        .iter()
                        .map(|(y, v)| (v * Complex64::from_polar(1.0, 2.0 * p * y)).re)
                        .sum();
                    row[j] = 2.0 * s / PI;
                }
            }
            row
        })
        .collect();
    Ok(WignerGrid {
        q_axis: q_axis.to_vec(),
        p_axis: p_axis.to_vec(),
        values,
    })
}

/// Pendulum state in the angular-momentum basis e^{imφ}/√(2π):
/// coefficients for m = −m_max..=m_max.
pub fn angular_momentum_amplitudes(state: &QuantumState, m_max: usize) -> Result<Vec<Complex64>> {
    let slice = state.slice();
    if !slice.model().is_angular() {
        return Err(Error::ModelMismatch(format!(
            "{} is not an angular model",
            slice.model()
        )));
    }
    let basis = slice.basis();
    let mut out = vec![Complex64::default(); 2 * m_max + 1];
    let r2 = std::f64::consts::SQRT_2;
    for (&n, a) in slice.indices().iter().zip(state.amplitudes()) {
        let sol = basis.mathieu(n).ok_or(Error::InsufficientSlice(n))?;
        for (c, &h) in sol.coefficients.iter().zip(&sol.harmonics) {
            // Harmonic 2k in u = φ/2 is angular momentum k.
            let k = h / 2;
            if k > m_max {
                continue;
            }
            match sol.parity {
                MathieuParity::Even if k == 0 => out[m_max] += a * (r2 * c),
                MathieuParity::Even => {
                    out[m_max + k] += a * (c / r2);
                    out[m_max - k] += a * (c / r2);
                }
                MathieuParity::Odd => {
                    out[m_max + k] += a * Complex64::new(0.0, -c / r2);
                    out[m_max - k] += a * Complex64::new(0.0, c / r2);
                }
            }
        }
    }
    Ok(out)
}

/// Discrete angular kernel W(φ, m) = (1/2π) Σ_l Re[c_m* c_l e^{i(l−m)φ}],
/// whose sum over m is |ψ(φ)|² and whose φ-integral is |c_m|².
pub fn wigner_angular(
    state: &QuantumState,
    phi_axis: &[f64],
    m_range: (i64, i64),
) -> Result<WignerGrid> {
    let (m_lo, m_hi) = m_range;
    if m_lo > m_hi {
        return Err(Error::InvalidParameter(format!(
            "empty angular momentum range {m_lo}..{m_hi}"
        )));
    }
    let top = *state.slice().indices().last().expect("non-empty slice");
    let m_max = (m_lo.unsigned_abs().max(m_hi.unsigned_abs()) as usize).max(top + 64);
    let c = angular_momentum_amplitudes(state, m_max)?;
    let idx = |m: i64| (m + m_max as i64) as usize;
    let ms: Vec<i64> = (m_lo..=m_hi).collect();
    let values: Vec<f64> = phi_axis
        .par_iter()
        .flat_map_iter(|&phi| {
            // Σ_l c_l e^{ilφ}, shared by every m.
            let total: Complex64 = c
                .iter()
                .enumerate()
                .map(|(k, cl)| cl * Complex64::from_polar(1.0, (k as f64 - m_max as f64) * phi))
                .sum();
            ms.iter()
                .map(|&m| {
                    let cm = c[idx(m)];
                    (cm.conj() * Complex64::from_polar(1.0, -(m as f64) * phi) * total).re
                        / (2.0 * PI)
                })
                .collect::<Vec<_>>()
        })
        .collect();
    Ok(WignerGrid {
        q_axis: phi_axis.to_vec(),
        p_axis: ms.iter().map(|&m| m as f64).collect(),
        values,
    })
}
