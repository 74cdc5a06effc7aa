//! Energy windows: the energies whose trajectories respect the classical
//! bound for a given probing ratio τ, i.e. Δt₊(E) ≤ 2τ/3 and Δt₋(E) ≥ τ/3.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::model::ModelSystem;
use crate::error::{Error, Result};
use crate::numerics::elliptic::elliptic_k_inverse;

const TAU_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyWindow {
    #[serde(with = "crate::serde_ext")]
    pub e_min: f64,
    #[serde(with = "crate::serde_ext")]
    pub e_max: f64,
}

impl EnergyWindow {
    pub fn new(e_min: f64, e_max: f64) -> Result<Self> {
        if e_min.is_nan() || e_max.is_nan() || e_min > e_max {
            return Err(Error::EmptyWindow { e_min, e_max });
        }
        Ok(Self { e_min, e_max })
    }

    pub fn contains(&self, e: f64) -> bool {
        self.e_min <= e && e <= self.e_max
    }

    pub fn is_bounded(&self) -> bool {
        self.e_max.is_finite()
    }
}

fn check_tau(model: &ModelSystem, tau: f64) -> Result<()> {
    let (lo, hi) = model.tau_range();
    let ok = match model {
        ModelSystem::Morse { .. } => (tau - 1.0).abs() <= TAU_SLACK,
        ModelSystem::InfiniteWell => tau > 0.0 && tau.is_finite(),
        _ => tau >= lo - TAU_SLACK && tau <= hi + TAU_SLACK,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::UnsupportedTau {
            model: model.to_string(),
            tau,
        })
    }
}

/// The widest window satisfying the classical trapping conditions at τ.
pub fn energy_window(model: &ModelSystem, tau: f64) -> Result<EnergyWindow> {
    model.validate()?;
    check_tau(model, tau)?;
    let (floor, _) = model.energy_range();
    match *model {
        ModelSystem::Harmonic | ModelSystem::Kerr { alpha: 0.0 } => {
            EnergyWindow::new(0.0, f64::INFINITY)
        }
        ModelSystem::Kerr { alpha } => {
            let lower = (9.0 / (16.0 * tau * tau) - 1.0) / (2.0 * alpha);
            let upper = (9.0 / (4.0 * tau * tau) - 1.0) / (2.0 * alpha);
            let (e_min, e_max) = if alpha > 0.0 {
                (lower, upper)
            } else {
                (upper, lower)
            };
            EnergyWindow::new(e_min.max(floor), e_max)
        }
        ModelSystem::Pendulum { alpha } => {
            let scale = 8.0 * alpha.abs();
            let e_max = (2.0 * elliptic_k_inverse(2.0 * PI * tau / 3.0)? - 1.0) / scale;
            // Below K(0) = π/2 the lower condition holds for every energy.
            let k_lo = PI * tau / 3.0;
            let e_min = if k_lo >= PI / 2.0 {
                (2.0 * elliptic_k_inverse(k_lo)? - 1.0) / scale
            } else {
                floor
            };
            EnergyWindow::new(e_min.max(floor), e_max)
        }
        ModelSystem::Morse { lambda } => EnergyWindow::new(0.0, 0.5 * lambda),
        ModelSystem::InfiniteWell => {
            EnergyWindow::new(9.0 / (16.0 * tau * tau), 9.0 / (4.0 * tau * tau))
        }
    }
}
