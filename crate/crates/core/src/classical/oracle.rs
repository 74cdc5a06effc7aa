//! Brute-force classical score oracle: sample phase-space points uniformly
//! in canonical area inside an energy window and evaluate each trajectory's
//! three-time score exactly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dynamics::{positivity_along, turning_points, PhasePoint};
use super::model::ModelSystem;
use super::trapping::Turning;
use super::window::EnergyWindow;
use crate::error::{Error, Result};

/// Upper energy used when a window is unbounded.
pub const UNBOUNDED_ENERGY_CAP: f64 = 50.0;
/// Morse sampling stays below this fraction of D_e, where the bound region
/// of phase space is still compact.
pub const MORSE_BOUND_FRACTION: f64 = 0.999;
const MAX_REJECTIONS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub max_score: f64,
    /// Initial state attaining `max_score` (lowest sample index on ties).
    pub witness: PhasePoint,
    pub samples: usize,
    /// Number of samples scoring above 2/3.
    pub above_bound: usize,
}

struct Sampler {
    model: ModelSystem,
    e_lo: f64,
    e_hi: f64,
    q_box: (f64, f64),
    p_max: f64,
}

impl Sampler {
    fn new(model: &ModelSystem, window: &EnergyWindow) -> Result<Self> {
        let (floor, ceiling) = model.energy_range();
        let mut e_hi = window.e_max.min(ceiling);
        if !e_hi.is_finite() {
            e_hi = UNBOUNDED_ENERGY_CAP;
        }
        if let ModelSystem::Morse { lambda } = model {
            e_hi = e_hi.min(MORSE_BOUND_FRACTION * 0.5 * lambda);
        }
        if let ModelSystem::Pendulum { .. } = model {
            // libration threshold is exclusive
            e_hi = e_hi.min(ceiling * (1.0 - 1e-12));
        }
        let e_lo = window.e_min.max(floor);
        if !(e_lo <= e_hi) {
            return Err(Error::EmptyWindow {
                e_min: e_lo,
                e_max: e_hi,
            });
        }
        let (q_box, p_max) = match *model {
            ModelSystem::Kerr { alpha } => {
                let mut h0 = if alpha == 0.0 {
                    e_hi
                } else {
                    ((1.0 + 2.0 * alpha * e_hi).max(0.0).sqrt() - 1.0) / alpha
                };
                if alpha < 0.0 {
                    h0 = h0.min(1.0 / alpha.abs());
                }
                let r = (2.0 * h0).sqrt();
                ((-r, r), r)
            }
            _ => {
                let (lo, hi) = turning_points(model, e_hi)?;
                let edge = |t: Turning| match t {
                    Turning::At(q) | Turning::Wall(q) => Ok(q),
                    Turning::Never => Err(Error::Domain(format!(
                        "energy {e_hi} is not bounded in configuration space for {model}"
                    ))),
                };
                let v_min = model.potential(0.0);
                (
                    (edge(lo)?, edge(hi)?),
                    (2.0 * model.reduced_mass() * (e_hi - v_min)).sqrt(),
                )
            }
        };
        Ok(Self {
            model: *model,
            e_lo,
            e_hi,
            q_box,
            p_max,
        })
    }

    fn accepts(&self, q: f64, p: f64) -> bool {
        let e = self.model.hamiltonian(q, p);
        if let ModelSystem::Kerr { alpha } = self.model {
            if alpha < 0.0 && 0.5 * (q * q + p * p) > 1.0 / alpha.abs() {
                return false;
            }
        }
        self.e_lo <= e && e <= self.e_hi
    }

    fn draw(&self, seed: u64, index: u64) -> Result<PhasePoint> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        for _ in 0..MAX_REJECTIONS {
            let q = rng.gen_range(self.q_box.0..=self.q_box.1);
            let p = rng.gen_range(-self.p_max..=self.p_max);
            if self.accepts(q, p) {
                return Ok(PhasePoint { q, p });
            }
        }
        Err(Error::Convergence {
            what: "phase-space rejection sampling".into(),
            residual: f64::NAN,
        })
    }
}

/// Three-time score (1/3)Σₖ pos[q(kτ/3)] of the trajectory through (q, p).
pub fn trajectory_score(model: &ModelSystem, q: f64, p: f64, tau: f64) -> Result<f64> {
    let v = positivity_along(model, q, p, &[0.0, tau / 3.0, 2.0 * tau / 3.0])?;
    Ok(v.iter().sum::<f64>() / 3.0)
}

/// Samples `n_samples` initial states uniformly in phase-space area inside
/// `window` and returns the largest three-time score found. Deterministic
/// in `seed` and independent of the thread count.
pub fn classical_score_oracle(
    model: &ModelSystem,
    window: &EnergyWindow,
    tau: f64,
    n_samples: usize,
    seed: u64,
) -> Result<OracleReport> {
    model.validate()?;
    if n_samples == 0 {
        return Err(Error::InvalidParameter(
            "oracle needs at least one sample".into(),
        ));
    }
    let sampler = Sampler::new(model, window)?;
    let bound = 2.0 / 3.0 + 1e-12;
    let (best, best_idx, above) = (0..n_samples as u64)
        .into_par_iter()
        .map(|i| -> Result<(f64, u64, usize)> {
            let s = sampler.draw(seed, i)?;
            let score = trajectory_score(model, s.q, s.p, tau)?;
            Ok((score, i, usize::from(score > bound)))
        })
        .try_reduce(
            || (f64::NEG_INFINITY, u64::MAX, 0),
            |a, b| {
                let keep_a = a.0 > b.0 || (a.0 == b.0 && a.1 < b.1);
                let (s, i) = if keep_a { (a.0, a.1) } else { (b.0, b.1) };
                Ok((s, i, a.2 + b.2))
            },
        )?;
    Ok(OracleReport {
        max_score: best,
        witness: sampler.draw(seed, best_idx)?,
        samples: n_samples,
        above_bound: above,
    })
}
