//! Classical trajectories. Harmonic, Kerr and well flows are evaluated in
//! closed form; pendulum and Morse use a fourth-order symplectic integrator
//! with step doubling.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::model::ModelSystem;
use super::trapping::{transit_time, trapping_times, turning_point, Turning};
use crate::error::{Error, Result};
use crate::numerics::quadrature::{integrate, QuadOptions};

/// Boundary tolerance of the positivity indicator.
pub const POS_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub q: f64,
    pub p: f64,
}

/// pos(q): 1 for q > 0, 0 for q < 0 and 1/2 at the origin.
pub fn pos(q: f64) -> f64 {
    if q.abs() < POS_TOLERANCE {
        0.5
    } else if q > 0.0 {
        1.0
    } else {
        0.0
    }
}

fn wrap_angle(q: f64) -> f64 {
    let w = (q + PI).rem_euclid(2.0 * PI) - PI;
    if w == -PI {
        PI
    } else {
        w
    }
}

// Yoshida's triple-jump coefficients.
const W1: f64 = 1.351_207_191_959_657_6;
const W0: f64 = -1.702_414_383_919_315_3;

fn yoshida_run(model: &ModelSystem, mut q: f64, mut p: f64, t: f64, steps: usize) -> (f64, f64) {
    // In units of 2π/ω₀: q̇ = 2π p/μ, ṗ = −2π V′(q).
    let h = 2.0 * PI * t / steps as f64;
    let inv_mu = 1.0 / model.reduced_mass();
    let coeffs = [W1, W0, W1];
    for _ in 0..steps {
        for &w in &coeffs {
            let dt = w * h;
            q += 0.5 * dt * p * inv_mu;
            p -= dt * model.force_gradient(q);
            q += 0.5 * dt * p * inv_mu;
        }
    }
    (q, p)
}

/// State at time `t` (units 2π/ω₀) of the trajectory through (q0, p0).
pub fn integrate_trajectory(model: &ModelSystem, q0: f64, p0: f64, t: f64) -> Result<PhasePoint> {
    model.validate()?;
    if !(q0.is_finite() && p0.is_finite() && t.is_finite()) {
        return Err(Error::Domain("trajectory inputs must be finite".into()));
    }
    match *model {
        ModelSystem::Harmonic | ModelSystem::Kerr { .. } => {
            let rate = match *model {
                ModelSystem::Kerr { alpha } => 1.0 + 0.5 * alpha * (q0 * q0 + p0 * p0),
                _ => 1.0,
            };
            let (s, c) = (2.0 * PI * rate * t).sin_cos();
            Ok(PhasePoint {
                q: q0 * c + p0 * s,
                p: p0 * c - q0 * s,
            })
        }
        ModelSystem::InfiniteWell => {
            if q0.abs() > 0.5 {
                return Err(Error::Domain(format!(
                    "well position {q0} outside [-1/2, 1/2]"
                )));
            }
            // Unfold the reflections onto a circle of circumference 2.
            let v = 2.0 * PI * p0 / model.reduced_mass();
            let y = (q0 + 0.5 + v * t).rem_euclid(2.0);
            Ok(if y <= 1.0 {
                PhasePoint { q: y - 0.5, p: p0 }
            } else {
                PhasePoint { q: 1.5 - y, p: -p0 }
            })
        }
        ModelSystem::Pendulum { .. } | ModelSystem::Morse { .. } => {
            let scale = 1.0 + q0.abs() + p0.abs();
            let mut steps = (t.abs() * 256.0).ceil() as usize + 16;
            let mut coarse = yoshida_run(model, q0, p0, t, steps);
            for _ in 0..16 {
                steps *= 2;
                let fine = yoshida_run(model, q0, p0, t, steps);
                let diff = (fine.0 - coarse.0).abs() + (fine.1 - coarse.1).abs();
                coarse = fine;
                if diff <= 1e-12 * scale {
                    let q = if model.is_angular() {
                        wrap_angle(fine.0)
                    } else {
                        fine.0
                    };
                    return Ok(PhasePoint { q, p: fine.1 });
                }
            }
            Err(Error::Convergence {
                what: "symplectic trajectory integration".into(),
                residual: f64::NAN,
            })
        }
    }
}

/// The sign history of a bound or escaping orbit, measured from an upward
/// crossing of q = 0: positive for `t_plus`, then negative for `t_minus`.
struct Orbit {
    t_plus: f64,
    t_minus: f64,
    /// Phase of the initial state along the orbit.
    phase: f64,
}

impl Orbit {
    fn pos_at(&self, t: f64) -> f64 {
        let tol = POS_TOLERANCE;
        let period = self.t_plus + self.t_minus;
        let mut u = self.phase + t;
        if period.is_finite() {
            u = u.rem_euclid(period);
            if u < tol || (period - u) < tol {
                return 0.5;
            }
        } else if u < -tol {
            // approaching the origin from the escape side
            return 0.0;
        } else if u.abs() < tol {
            return 0.5;
        }
        if (u - self.t_plus).abs() < tol {
            0.5
        } else if u < self.t_plus {
            1.0
        } else {
            0.0
        }
    }
}

/// Time from q0 to the turning point `qt` on the same side, with
/// x = qt + (q0 − qt)s² and e − V(x) taken as V(qt) − V(x), which vanishes
/// exactly at s = 0 and carries no cancellation.
fn leg_to_turning_point(model: &ModelSystem, q0: f64, qt: f64) -> Result<f64> {
    let mu = model.reduced_mass();
    let span = q0 - qt;
    let f = |s: f64| {
        let k = -model.potential_step(qt, span * s * s);
        if k > 0.0 {
            2.0 * span.abs() * s / k.sqrt()
        } else {
            0.0
        }
    };
    let integral = integrate(f, 0.0, 1.0, QuadOptions::default())?.value;
    Ok((mu / 2.0).sqrt() * integral / (2.0 * PI))
}

fn orbit_of(model: &ModelSystem, q0: f64, p0: f64) -> Result<Option<Orbit>> {
    let e = model.hamiltonian(q0, p0);
    if q0.abs() < POS_TOLERANCE && p0 == 0.0 {
        return Ok(None);
    }
    let times = trapping_times(model, e)?;
    let (t_plus, t_minus) = (times.dt_plus.value(), times.dt_minus.value());
    let v = |q: f64| model.potential(q);
    let mu = model.reduced_mass();
    let phase = if q0.abs() < POS_TOLERANCE {
        if p0 > 0.0 {
            0.0
        } else {
            t_plus
        }
    } else {
        let side = q0.signum();
        let (lo, hi) = model.configuration_domain();
        let edge = if side > 0.0 { hi } else { lo };
        let partial = match turning_point(&v, e, side, edge)? {
            // Close to a turning point e − V(x) cancels badly; integrate the
            // remaining leg in offsets from the turning point instead.
            Turning::At(qt) if q0.abs() > 0.5 * qt.abs() => {
                let half = 0.5 * if side > 0.0 { t_plus } else { t_minus };
                half - leg_to_turning_point(model, q0, qt)?
            }
            _ => transit_time(&v, mu, e, q0)?,
        };
        match (q0 > 0.0, p0 >= 0.0) {
            (true, true) => partial,
            (true, false) => t_plus - partial,
            (false, false) => t_plus + partial,
            (false, true) => {
                if t_minus.is_finite() {
                    t_plus + t_minus - partial
                } else {
                    // incoming from the escape side: reaches the origin after `partial`
                    -partial
                }
            }
        }
    };
    Ok(Some(Orbit {
        t_plus,
        t_minus,
        phase,
    }))
}

/// pos[q(t)] for each t in `times`, evaluated exactly: closed-form flows for
/// harmonic, Kerr and well; for pendulum and Morse, the orbit's trapping times
/// plus a turning-point quadrature locating the initial phase.
pub fn positivity_along(model: &ModelSystem, q0: f64, p0: f64, times: &[f64]) -> Result<Vec<f64>> {
    match model {
        ModelSystem::Pendulum { .. } | ModelSystem::Morse { .. } => {
            let q0 = if model.is_angular() {
                wrap_angle(q0)
            } else {
                q0
            };
            match orbit_of(model, q0, p0)? {
                None => Ok(vec![0.5; times.len()]),
                Some(orbit) => Ok(times.iter().map(|&t| orbit.pos_at(t)).collect()),
            }
        }
        _ => times
            .iter()
            .map(|&t| integrate_trajectory(model, q0, p0, t).map(|s| pos(s.q)))
            .collect(),
    }
}

/// Turning points (q₋, q₊) of the energy shell `e`.
pub fn turning_points(model: &ModelSystem, e: f64) -> Result<(Turning, Turning)> {
    let v = |q: f64| model.potential(q);
    let (lo, hi) = model.configuration_domain();
    Ok((
        turning_point(&v, e, -1.0, lo)?,
        turning_point(&v, e, 1.0, hi)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn harmonic_quarter_period() {
        let s = integrate_trajectory(&ModelSystem::Harmonic, 1.0, 0.0, 0.25).unwrap();
        assert!(s.q.abs() < 1e-15 && (s.p + 1.0).abs() < 1e-15);
    }

    #[test]
    fn kerr_returns_after_one_period() {
        let m = ModelSystem::Kerr { alpha: 0.05 };
        let (q0, p0) = (1.3, -0.4);
        let e = m.hamiltonian(q0, p0);
        let period = 1.0 / (1.0 + 2.0 * 0.05 * e).sqrt();
        let s = integrate_trajectory(&m, q0, p0, period).unwrap();
        assert!((s.q - q0).abs() < 1e-7 && (s.p - p0).abs() < 1e-7);
    }

    #[test]
    fn morse_matches_closed_form_solution() {
        // Bound motion released at the steep-side turning point ln(1 + √r),
        // r = E/D_e: q(t) = ln[(1 − r)/(1 − √r cos ωt)], ω = √(1 − r).
        let lambda = 10.0;
        let m = ModelSystem::Morse { lambda };
        let r: f64 = 0.5;
        let q0 = (1.0 + r.sqrt()).ln();
        let w = (1.0 - r).sqrt();
        for &t in &[0.05, 0.2, 0.37, 0.6] {
            let s = integrate_trajectory(&m, q0, 0.0, t).unwrap();
            let tp = 2.0 * PI * t;
            let exact = ((1.0 - r) / (1.0 - r.sqrt() * (w * tp).cos())).ln();
            assert!((s.q - exact).abs() < 1e-7, "t={t}: {} vs {exact}", s.q);
        }
    }

    #[test]
    fn symplectic_energy_drift() {
        let m = ModelSystem::Pendulum { alpha: -0.05 };
        let (q0, p0) = (1.2, 0.3);
        let e0 = m.hamiltonian(q0, p0);
        let period = 2.0 * trapping_times(&m, e0).unwrap().dt_plus.value();
        let s = integrate_trajectory(&m, q0, p0, period).unwrap();
        assert!((m.hamiltonian(s.q, s.p) - e0).abs() <= 1e-9 * e0.abs());
        assert!((s.q - q0).abs() < 1e-7);
    }

    #[test]
    fn well_reflects() {
        let m = ModelSystem::InfiniteWell;
        // speed 2π p/μ = p/π; p = π gives unit speed
        let s = integrate_trajectory(&m, 0.25, PI, 1.0).unwrap();
        assert!((s.q - (-0.25)).abs() < 1e-14 && (s.p + PI).abs() < 1e-14);
        assert!(integrate_trajectory(&m, 0.7, 0.0, 1.0).is_err());
    }

    #[test]
    fn fixed_point_scores_half() {
        for m in [
            ModelSystem::Harmonic,
            ModelSystem::Pendulum { alpha: -0.02 },
            ModelSystem::Morse { lambda: 4.0 },
        ] {
            let v = positivity_along(&m, 0.0, 0.0, &[0.0, 0.3, 0.6]).unwrap();
            assert_eq!(v, vec![0.5; 3]);
        }
    }

    #[test]
    fn orbit_phase_agrees_with_integration() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for m in [
            ModelSystem::Pendulum { alpha: -0.05 },
            ModelSystem::Morse { lambda: 6.0 },
        ] {
            for _ in 0..40 {
                let q0 = rng.gen_range(-1.0..1.0);
                let p0 = rng.gen_range(-1.0..1.0) * if m.is_angular() { 0.3 } else { 3.0 };
                let e = m.hamiltonian(q0, p0);
                if let ModelSystem::Morse { lambda } = m {
                    if e >= 0.45 * lambda {
                        continue;
                    }
                }
                if let ModelSystem::Pendulum { .. } = m {
                    if e >= 0.9 * m.energy_range().1 {
                        continue;
                    }
                }
                let times = [0.0, 0.13, 0.41, 0.77, 1.9];
                let fast = positivity_along(&m, q0, p0, &times).unwrap();
                for (t, f) in times.iter().zip(&fast) {
                    let q = integrate_trajectory(&m, q0, p0, *t).unwrap().q;
                    if q.abs() > 1e-6 {
                        assert_eq!(pos(q), *f, "{m} q0={q0} p0={p0} t={t}");
                    }
                }
            }
        }
    }

    #[test]
    fn phase_near_turning_points() {
        // Small momenta put the initial point next to a turning point.
        let cases = [
            (
                ModelSystem::Pendulum { alpha: -0.05 },
                -1.6037628940326072,
                -9.474715584660842e-2,
            ),
            (
                ModelSystem::Pendulum { alpha: -0.05 },
                0.503650500931335,
                1.2536051531029102e-3,
            ),
            (
                ModelSystem::Morse { lambda: 10.0 },
                -2.2287765042961825,
                0.15888770348895775,
            ),
            (
                ModelSystem::Morse { lambda: 10.0 },
                -1.4408314362308958,
                1.3907395617007268e-2,
            ),
        ];
        for (m, q0, p0) in cases {
            let times = [0.0, 0.05, 0.21, 0.6, 1.3];
            let fast = positivity_along(&m, q0, p0, &times).unwrap();
            for (t, f) in times.iter().zip(&fast) {
                let q = integrate_trajectory(&m, q0, p0, *t).unwrap().q;
                if q.abs() > 1e-6 {
                    assert_eq!(pos(q), *f, "{m} q0={q0} p0={p0} t={t}");
                }
            }
        }
    }

    #[test]
    fn morse_escape_orbit() {
        let m = ModelSystem::Morse { lambda: 4.0 };
        // E = 3 > D_e = 2: after leaving q ≥ 0 the particle never returns.
        let p0 = (2.0 * 4.0 * 3.0f64).sqrt();
        let v = positivity_along(&m, 0.0, -p0, &[0.0, 0.1, 5.0]).unwrap();
        assert_eq!(v, vec![0.5, 0.0, 0.0]);
        let v = positivity_along(&m, 0.0, p0, &[0.05, 50.0]).unwrap();
        assert_eq!(v, vec![1.0, 0.0]);
    }
}
