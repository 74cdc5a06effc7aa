//! Trapping times Δt±(E): the longest time a trajectory of energy E spends
//! at q ≥ 0 and the shortest contiguous time it spends at q < 0.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::model::ModelSystem;
use crate::error::{Error, Result};
use crate::numerics::elliptic::elliptic_k;
use crate::numerics::quadrature::quad_inverse_sqrt;
use crate::numerics::roots::brent;

/// A nonnegative duration in units of 2π/ω₀, or an explicit infinity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrapTime {
    Finite(f64),
    Infinite,
}

impl TrapTime {
    pub fn value(self) -> f64 {
        match self {
            TrapTime::Finite(t) => t,
            TrapTime::Infinite => f64::INFINITY,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, TrapTime::Infinite)
    }

    fn from_f64(t: f64) -> Self {
        if t.is_finite() {
            TrapTime::Finite(t)
        } else {
            TrapTime::Infinite
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrappingTimes {
    pub dt_plus: TrapTime,
    pub dt_minus: TrapTime,
}

impl TrappingTimes {
    fn symmetric(t: f64) -> Self {
        Self {
            dt_plus: TrapTime::from_f64(t),
            dt_minus: TrapTime::from_f64(t),
        }
    }
}

fn check_energy(model: &ModelSystem, e: f64) -> Result<()> {
    if !e.is_finite() {
        return Err(Error::Domain(format!("energy must be finite, got {e}")));
    }
    let (lo, hi) = model.energy_range();
    if let ModelSystem::Pendulum { .. } = model {
        if e >= hi {
            return Err(Error::Libration {
                energy: e,
                threshold: hi,
            });
        }
    }
    let below = e < lo || (matches!(model, ModelSystem::InfiniteWell) && e <= 0.0);
    if below || e > hi {
        return Err(Error::Domain(format!(
            "energy {e} outside the classical range of {model}"
        )));
    }
    Ok(())
}

/// Δt±(E) from the model's closed form.
pub fn trapping_times(model: &ModelSystem, e: f64) -> Result<TrappingTimes> {
    model.validate()?;
    check_energy(model, e)?;
    Ok(match *model {
        ModelSystem::Harmonic => TrappingTimes::symmetric(0.5),
        ModelSystem::Kerr { alpha } => {
            let w2 = 1.0 + 2.0 * alpha * e;
            TrappingTimes::symmetric(if w2 > 0.0 {
                0.5 / w2.sqrt()
            } else {
                f64::INFINITY
            })
        }
        ModelSystem::Pendulum { alpha } => {
            let m = 0.5 * (8.0 * alpha.abs() * e + 1.0);
            TrappingTimes::symmetric(elliptic_k(m)? / PI)
        }
        ModelSystem::Morse { lambda } => {
            let r = 2.0 * e / lambda;
            let plus = if r < 1.0 {
                if r == 0.0 {
                    0.5
                } else {
                    r.sqrt().acos() / (PI * (1.0 - r).sqrt())
                }
            } else if r == 1.0 {
                1.0 / PI
            } else {
                r.sqrt().acosh() / (PI * (r - 1.0).sqrt())
            };
            let minus = if r < 1.0 {
                (PI - r.sqrt().acos()) / (PI * (1.0 - r).sqrt())
            } else {
                f64::INFINITY
            };
            TrappingTimes {
                dt_plus: TrapTime::Finite(plus),
                dt_minus: TrapTime::from_f64(minus),
            }
        }
        ModelSystem::InfiniteWell => TrappingTimes::symmetric(0.5 / e.sqrt()),
    })
}

/// Where a trajectory of energy `e` leaving q = 0 towards `side` (±1) turns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Turning {
    /// Smooth turning point with restoring force.
    At(f64),
    /// Hard wall at the domain edge (specular reflection).
    Wall(f64),
    /// No turning point: the motion escapes or stalls.
    Never,
}

const ESCAPE_DISTANCE: f64 = 1e6;

/// Locates the first turning point of V on one side of the origin.
pub fn turning_point<V: Fn(f64) -> f64>(v: &V, e: f64, side: f64, edge: f64) -> Result<Turning> {
    let edge = edge.abs();
    let mut inside = 0.0_f64;
    let mut step = 1e-3;
    loop {
        let x = (inside + step).min(edge);
        if v(side * x) >= e {
            let root = brent(|y| v(side * y) - e, inside, x, 1e-15 * x.max(1e-300))?;
            // restoring force at the turning point: −V′·side < 0
            let h = 1e-7 * root.max(1e-3);
            let slope = (v(side * (root + h)) - v(side * (root - h))) / (2.0 * h);
            return Ok(if slope > 0.0 {
                Turning::At(side * root)
            } else {
                Turning::Never
            });
        }
        if x >= edge {
            return Ok(if edge.is_finite() {
                Turning::Wall(side * edge)
            } else {
                Turning::Never
            });
        }
        if x > ESCAPE_DISTANCE {
            return Ok(Turning::Never);
        }
        inside = x;
        step *= 1.5;
    }
}

/// Time (units 2π/ω₀) to travel from q = 0 to `q` at energy `e` under
/// h = p²/2μ + V(q), assuming no turning point in between.
pub fn transit_time<V: Fn(f64) -> f64>(v: &V, mu: f64, e: f64, q: f64) -> Result<f64> {
    if q == 0.0 {
        return Ok(0.0);
    }
    let (a, b) = if q > 0.0 { (0.0, q) } else { (q, 0.0) };
    let integral = quad_inverse_sqrt(
        |x| {
            let k = e - v(x);
            if k > 0.0 {
                1.0 / k.sqrt()
            } else {
                0.0
            }
        },
        a,
        b,
    )?;
    Ok((mu / 2.0).sqrt() * integral / (2.0 * PI))
}

/// Δt±(E) for h = p²/2μ + V(q) by turning-point quadrature. Each side's
/// time is a round trip from the origin to the turning point and back.
pub fn generic_trapping_times<V: Fn(f64) -> f64>(
    v: V,
    mu: f64,
    e: f64,
    domain: (f64, f64),
) -> Result<TrappingTimes> {
    if !(e > v(0.0)) {
        return Err(Error::Domain(format!(
            "energy {e} does not exceed V(0) = {}; only the fixed point has this energy",
            v(0.0)
        )));
    }
    let side_time = |side: f64, edge: f64| -> Result<TrapTime> {
        match turning_point(&v, e, side, edge)? {
            Turning::At(q) | Turning::Wall(q) => {
                Ok(TrapTime::Finite(2.0 * transit_time(&v, mu, e, q)?))
            }
            Turning::Never => Ok(TrapTime::Infinite),
        }
    };
    Ok(TrappingTimes {
        dt_plus: side_time(1.0, domain.1)?,
        dt_minus: side_time(-1.0, domain.0)?,
    })
}

/// Δt±(E) by direct quadrature of the equations of motion, independent of
/// the closed forms. Kerr is reduced to its harmonic H₀ shell and rescaled by
/// the shell's angular velocity dh/dH₀.
pub fn trapping_times_quadrature(model: &ModelSystem, e: f64) -> Result<TrappingTimes> {
    model.validate()?;
    check_energy(model, e)?;
    match *model {
        ModelSystem::Kerr { alpha } => {
            let h0 = if alpha == 0.0 {
                e
            } else {
                ((1.0 + 2.0 * alpha * e).max(0.0).sqrt() - 1.0) / alpha
            };
            let rate = 1.0 + alpha * h0;
            if rate <= 0.0 {
                return Ok(TrappingTimes::symmetric(f64::INFINITY));
            }
            let base =
                generic_trapping_times(|q| 0.5 * q * q, 1.0, h0, model.configuration_domain())?;
            Ok(TrappingTimes::symmetric(base.dt_plus.value() / rate))
        }
        _ => generic_trapping_times(
            |q| model.potential(q),
            model.reduced_mass(),
            e,
            model.configuration_domain(),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_half_periods() {
        for e in [0.1, 1.0, 17.0] {
            let t = trapping_times(&ModelSystem::Harmonic, e).unwrap();
            assert_eq!(t.dt_plus, TrapTime::Finite(0.5));
            let g = trapping_times_quadrature(&ModelSystem::Harmonic, e).unwrap();
            assert!((g.dt_plus.value() - 0.5).abs() < 1e-9);
            assert!((g.dt_minus.value() - 0.5).abs() < 1e-9);
        }
    }

    #[test]
    fn kerr_energy_dependent_period() {
        let t = trapping_times(&ModelSystem::Kerr { alpha: 0.1 }, 1.0).unwrap();
        assert!((t.dt_plus.value() - 1.0 / (2.0 * 1.2f64.sqrt())).abs() < 1e-15);
        let g = trapping_times_quadrature(&ModelSystem::Kerr { alpha: 0.1 }, 1.0).unwrap();
        assert!((g.dt_minus.value() - t.dt_minus.value()).abs() < 1e-9);
    }

    #[test]
    fn morse_escape_and_asymmetry() {
        let m = ModelSystem::Morse { lambda: 10.0 };
        let t = trapping_times(&m, 5.0).unwrap();
        assert!(t.dt_minus.is_infinite());
        assert!(trapping_times(&m, 7.0).unwrap().dt_minus.is_infinite());
        let t = trapping_times(&m, 2.5).unwrap();
        assert!(t.dt_plus.value() < 0.5 && t.dt_minus.value() > 0.5);
        // Δt₊ at E/D_e = 1/2 equals 2 arccos√½ / √½ in units 1/ω₀
        let expected = 2.0 * 0.5f64.sqrt().acos() / 0.5f64.sqrt() / (2.0 * PI);
        assert!((t.dt_plus.value() - expected).abs() < 1e-14);
        let g = trapping_times_quadrature(&m, 2.5).unwrap();
        assert!((g.dt_plus.value() - expected).abs() < 1e-9);
        assert!(trapping_times_quadrature(&m, 6.0)
            .unwrap()
            .dt_minus
            .is_infinite());
    }

    #[test]
    fn pendulum_libration_rejected() {
        let m = ModelSystem::Pendulum { alpha: -0.02 };
        assert!(matches!(
            trapping_times(&m, 6.25),
            Err(Error::Libration { .. })
        ));
        assert!(matches!(
            trapping_times(&m, 7.0),
            Err(Error::Libration { .. })
        ));
        assert!(trapping_times(&m, -7.0).is_err());
        let t = trapping_times(&m, -6.25).unwrap();
        assert!((t.dt_plus.value() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn well_closed_form() {
        let t = trapping_times(&ModelSystem::InfiniteWell, 0.25).unwrap();
        assert_eq!(t.dt_plus, TrapTime::Finite(1.0));
        assert!(trapping_times(&ModelSystem::InfiniteWell, 0.0).is_err());
        let g = trapping_times_quadrature(&ModelSystem::InfiniteWell, 0.25).unwrap();
        assert!((g.dt_plus.value() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn serialization_uses_sentinel() {
        let t = TrappingTimes {
            dt_plus: TrapTime::Finite(0.25),
            dt_minus: TrapTime::Infinite,
        };
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(s, r#"{"dt_plus":{"finite":0.25},"dt_minus":"infinite"}"#);
    }
}
