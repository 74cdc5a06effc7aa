//! The five model Hamiltonians in reduced units (ħ = ω₀ = 1).
//!
//! Each model is written as h(q, p) = p²/2μ + V(q) (Kerr excepted), with the
//! reduced mass μ chosen so that small oscillations have unit frequency.
//! Energies are in ħω₀ and times in units of 2π/ω₀.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelSystem {
    /// h = (q² + p²)/2.
    Harmonic,
    /// h = H₀ + α H₀²/2 with H₀ = (q² + p²)/2.
    Kerr { alpha: f64 },
    /// h = 4|α| p² − cos(q)/(8|α|), q ∈ (−π, π]; requires α < 0.
    Pendulum { alpha: f64 },
    /// h = p²/2λ + (λ/2)(1 − e^q)², with λ = 2D_e/ħω₀ > 1/2.
    Morse { lambda: f64 },
    /// h = p²/4π², q ∈ [−1/2, 1/2] with hard walls.
    InfiniteWell,
}

impl ModelSystem {
    pub fn kerr(alpha: f64) -> Result<Self> {
        let m = ModelSystem::Kerr { alpha };
        m.validate()?;
        Ok(m)
    }

    pub fn pendulum(alpha: f64) -> Result<Self> {
        let m = ModelSystem::Pendulum { alpha };
        m.validate()?;
        Ok(m)
    }

    pub fn morse(lambda: f64) -> Result<Self> {
        let m = ModelSystem::Morse { lambda };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ModelSystem::Kerr { alpha } if !alpha.is_finite() => Err(Error::InvalidParameter(
                format!("Kerr alpha must be finite, got {alpha}"),
            )),
            ModelSystem::Pendulum { alpha } if !(alpha < 0.0 && alpha.is_finite()) => Err(
                Error::InvalidParameter(format!("pendulum alpha must be negative, got {alpha}")),
            ),
            ModelSystem::Morse { lambda } if !(lambda > 0.5 && lambda.is_finite()) => Err(
                Error::InvalidParameter(format!("Morse lambda must exceed 1/2, got {lambda}")),
            ),
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ModelSystem::Harmonic => "harmonic",
            ModelSystem::Kerr { .. } => "kerr",
            ModelSystem::Pendulum { .. } => "pendulum",
            ModelSystem::Morse { .. } => "morse",
            ModelSystem::InfiniteWell => "well",
        }
    }

    pub fn alpha(&self) -> Option<f64> {
        match *self {
            ModelSystem::Kerr { alpha } | ModelSystem::Pendulum { alpha } => Some(alpha),
            _ => None,
        }
    }

    pub fn lambda(&self) -> Option<f64> {
        match *self {
            ModelSystem::Morse { lambda } => Some(lambda),
            _ => None,
        }
    }

    /// Whether H(−q, p) = H(q, p).
    pub fn is_parity_even(&self) -> bool {
        !matches!(self, ModelSystem::Morse { .. })
    }

    /// μ in h = p²/2μ + V(q). For Kerr this is the mass of the underlying H₀.
    pub fn reduced_mass(&self) -> f64 {
        match *self {
            ModelSystem::Harmonic | ModelSystem::Kerr { .. } => 1.0,
            ModelSystem::Pendulum { alpha } => 1.0 / (8.0 * alpha.abs()),
            ModelSystem::Morse { lambda } => lambda,
            ModelSystem::InfiniteWell => 2.0 * PI * PI,
        }
    }

    /// Potential V(q); +∞ outside the configuration space. For Kerr this is
    /// the harmonic potential of H₀.
    pub fn potential(&self, q: f64) -> f64 {
        match *self {
            ModelSystem::Harmonic | ModelSystem::Kerr { .. } => 0.5 * q * q,
            ModelSystem::Pendulum { alpha } => -q.cos() / (8.0 * alpha.abs()),
            ModelSystem::Morse { lambda } => 0.5 * lambda * (1.0 - q.exp()).powi(2),
            ModelSystem::InfiniteWell => {
                if q.abs() <= 0.5 {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
        }
    }

    /// V(q + d) − V(q) without cancellation for small d.
    pub fn potential_step(&self, q: f64, d: f64) -> f64 {
        match *self {
            ModelSystem::Harmonic | ModelSystem::Kerr { .. } => d * (q + 0.5 * d),
            ModelSystem::Pendulum { alpha } => {
                2.0 * (q + 0.5 * d).sin() * (0.5 * d).sin() / (8.0 * alpha.abs())
            }
            ModelSystem::Morse { lambda } => {
                let (a, b) = (q.exp(), (q + d).exp());
                0.5 * lambda * a * d.exp_m1() * (a + b - 2.0)
            }
            ModelSystem::InfiniteWell => self.potential(q + d) - self.potential(q),
        }
    }

    /// dV/dq.
    pub fn force_gradient(&self, q: f64) -> f64 {
        match *self {
            ModelSystem::Harmonic | ModelSystem::Kerr { .. } => q,
            ModelSystem::Pendulum { alpha } => q.sin() / (8.0 * alpha.abs()),
            ModelSystem::Morse { lambda } => -lambda * (1.0 - q.exp()) * q.exp(),
            ModelSystem::InfiniteWell => 0.0,
        }
    }

    /// Classical energy of the phase-space point (q, p).
    pub fn hamiltonian(&self, q: f64, p: f64) -> f64 {
        match *self {
            ModelSystem::Kerr { alpha } => {
                let h0 = 0.5 * (q * q + p * p);
                h0 + 0.5 * alpha * h0 * h0
            }
            _ => p * p / (2.0 * self.reduced_mass()) + self.potential(q),
        }
    }

    /// Range of classical energies admitted by the model (and, for Kerr
    /// α < 0 and the pendulum, by the secondary assumptions).
    /// The upper end is exclusive for the pendulum (libration threshold).
    pub fn energy_range(&self) -> (f64, f64) {
        match *self {
            ModelSystem::Harmonic | ModelSystem::Morse { .. } | ModelSystem::InfiniteWell => {
                (0.0, f64::INFINITY)
            }
            ModelSystem::Kerr { alpha } if alpha < 0.0 => (0.0, 0.5 / alpha.abs()),
            ModelSystem::Kerr { .. } => (0.0, f64::INFINITY),
            ModelSystem::Pendulum { alpha } => {
                let s = 1.0 / (8.0 * alpha.abs());
                (-s, s)
            }
        }
    }

    /// Admissible probing ratios τ.
    pub fn tau_range(&self) -> (f64, f64) {
        match self {
            ModelSystem::Harmonic | ModelSystem::Kerr { .. } | ModelSystem::Pendulum { .. } => {
                (0.75, 1.5)
            }
            ModelSystem::Morse { .. } => (1.0, 1.0),
            ModelSystem::InfiniteWell => (0.0, f64::INFINITY),
        }
    }

    /// Configuration space [q_min, q_max].
    pub fn configuration_domain(&self) -> (f64, f64) {
        match self {
            ModelSystem::Pendulum { .. } => (-PI, PI),
            ModelSystem::InfiniteWell => (-0.5, 0.5),
            _ => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    /// Whether the coordinate is an angle (no Cartesian Wigner transform).
    pub fn is_angular(&self) -> bool {
        matches!(self, ModelSystem::Pendulum { .. })
    }
}

impl std::fmt::Display for ModelSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            ModelSystem::Kerr { alpha } | ModelSystem::Pendulum { alpha } => {
                write!(f, "{}(alpha={alpha})", self.name())
            }
            ModelSystem::Morse { lambda } => write!(f, "morse(lambda={lambda})"),
            _ => f.write_str(self.name()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn potential_step_matches_difference() {
        let models = [
            ModelSystem::Harmonic,
            ModelSystem::Pendulum { alpha: -0.05 },
            ModelSystem::Morse { lambda: 7.0 },
        ];
        for m in models {
            for (q, d) in [(0.3, 0.2), (-1.1, 0.7), (1.5, -0.4), (-2.0, -0.01)] {
                let direct = m.potential(q + d) - m.potential(q);
                assert!(
                    (m.potential_step(q, d) - direct).abs() < 1e-12,
                    "{m} q={q} d={d}"
                );
            }
        }
    }

    #[test]
    fn invariants() {
        assert!(ModelSystem::pendulum(0.1).is_err());
        assert!(ModelSystem::pendulum(0.0).is_err());
        assert!(ModelSystem::pendulum(-0.02).is_ok());
        assert!(ModelSystem::morse(0.5).is_err());
        assert!(ModelSystem::morse(10.0).is_ok());
        assert!(ModelSystem::kerr(f64::NAN).is_err());
        assert!(ModelSystem::kerr(-0.3).is_ok());
    }

    #[test]
    fn small_oscillations_have_unit_frequency() {
        // ω² = V''(0)/μ
        for m in [
            ModelSystem::Harmonic,
            ModelSystem::Pendulum { alpha: -0.07 },
            ModelSystem::Morse { lambda: 6.0 },
        ] {
            let h = 1e-4;
            let v2 = (m.potential(h) - 2.0 * m.potential(0.0) + m.potential(-h)) / (h * h);
            assert!((v2 / m.reduced_mass() - 1.0).abs() < 1e-6, "{m}");
        }
    }

    #[test]
    fn serde_round_trip() {
        let m = ModelSystem::Morse { lambda: 10.0 };
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"kind":"morse","lambda":10.0}"#);
        assert_eq!(serde_json::from_str::<ModelSystem>(&s).unwrap(), m);
    }
}
