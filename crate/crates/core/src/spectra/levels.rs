//! Energy levels per model and their truncation by an energy window.

use serde::{Deserialize, Serialize};

use crate::classical::{EnergyWindow, ModelSystem};
use crate::error::{Error, Result};
use crate::numerics::mathieu::{mathieu_eigensystem, MathieuSolution};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Levels {
    pub indices: Vec<usize>,
    pub energies: Vec<f64>,
}

impl Levels {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// Mathieu parameter of the pendulum, q = −1/(4α)².
pub fn pendulum_mathieu_parameter(alpha: f64) -> f64 {
    -1.0 / (4.0 * alpha).powi(2)
}

/// Pendulum eigenfunctions for levels 0..=n_max (ceₙ for even n, seₙ₊₁ for
/// odd n, at u = φ/2). Level energies are |α| times the characteristic values.
pub fn pendulum_solutions(alpha: f64, n_max: usize) -> Result<Vec<MathieuSolution>> {
    mathieu_eigensystem(pendulum_mathieu_parameter(alpha), n_max)
}

/// Lowest valid level index (the well starts at n = 1).
pub fn first_index(model: &ModelSystem) -> usize {
    match model {
        ModelSystem::InfiniteWell => 1,
        _ => 0,
    }
}

/// Largest bound level index, if the spectrum is finite.
pub fn last_index(model: &ModelSystem) -> Option<usize> {
    match *model {
        // Level n is normalizable only while n + 1/2 < λ.
        ModelSystem::Morse { lambda } => Some((lambda - 0.5).ceil() as usize - 1),
        // Secondary assumption H₀ ≤ 1/|α| for α < 0.
        ModelSystem::Kerr { alpha } if alpha < 0.0 => {
            Some((1.0 / alpha.abs() - 0.5).floor() as usize)
        }
        _ => None,
    }
}

/// Energy of level n in ħω₀ for models with closed-form spectra.
pub fn closed_form_energy(model: &ModelSystem, n: usize) -> Result<f64> {
    let x = n as f64 + 0.5;
    match *model {
        ModelSystem::Harmonic => Ok(x),
        ModelSystem::Kerr { alpha } => Ok(x * (1.0 + 0.5 * alpha * x) + 0.375 * alpha),
        ModelSystem::Morse { lambda } => Ok(x * (1.0 - x / (2.0 * lambda))),
        ModelSystem::InfiniteWell if n >= 1 => Ok((n * n) as f64 / 4.0),
        ModelSystem::InfiniteWell => Err(Error::Domain("well levels start at n = 1".into())),
        ModelSystem::Pendulum { .. } => Err(Error::ModelMismatch(
            "pendulum energies come from the Mathieu eigensystem".into(),
        )),
    }
}

/// The first `count` energies of the model.
pub fn lowest_energies(model: &ModelSystem, count: usize) -> Result<Vec<f64>> {
    model.validate()?;
    if let Some(last) = last_index(model) {
        if first_index(model) + count > last + 1 {
            return Err(Error::InsufficientSlice(last + 1 - first_index(model)));
        }
    }
    match *model {
        ModelSystem::Pendulum { alpha } if count > 0 => Ok(pendulum_solutions(alpha, count - 1)?
            .iter()
            .map(|s| alpha.abs() * s.characteristic)
            .collect()),
        ModelSystem::Pendulum { .. } => Ok(Vec::new()),
        _ => (first_index(model)..first_index(model) + count)
            .map(|n| closed_form_energy(model, n))
            .collect(),
    }
}

/// Levels with e_min ≤ Eₙ ≤ e_max. The infinite well uses strict
/// inequalities (3/2τ < n < 3/τ). `max_index` caps unbounded spectra.
pub fn levels_capped(
    model: &ModelSystem,
    window: &EnergyWindow,
    max_index: Option<usize>,
) -> Result<Levels> {
    model.validate()?;
    let strict = matches!(model, ModelSystem::InfiniteWell);
    let keep = |e: f64| {
        if strict {
            // Levels landing on an edge up to rounding are excluded.
            let slack = 1e-12 * e.abs().max(1.0);
            window.e_min + slack < e && e < window.e_max - slack
        } else {
            window.contains(e)
        }
    };
    let mut indices = Vec::new();
    let mut energies = Vec::new();
    let hard_last = match (last_index(model), max_index) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };

    if let ModelSystem::Pendulum { alpha } = *model {
        let threshold = model.energy_range().1;
        let top = window.e_max.min(threshold);
        let mut n_max = 16;
        loop {
            let sols = pendulum_solutions(alpha, n_max)?;
            let last_e = alpha.abs() * sols.last().expect("non-empty").characteristic;
            if last_e > top || hard_last.is_some_and(|h| h <= n_max) {
                for (n, s) in sols.iter().enumerate() {
                    let e = alpha.abs() * s.characteristic;
                    if hard_last.is_some_and(|h| n > h) || e >= threshold {
                        break;
                    }
                    if keep(e) {
                        indices.push(n);
                        energies.push(e);
                    }
                }
                break;
            }
            n_max *= 2;
        }
    } else {
        if !window.is_bounded() && hard_last.is_none() {
            return Err(Error::InvalidParameter(format!(
                "window [{}, inf) on {model} needs a maximum level index",
                window.e_min
            )));
        }
        let mut n = first_index(model);
        loop {
            if hard_last.is_some_and(|h| n > h) {
                break;
            }
            let e = closed_form_energy(model, n)?;
            if e > window.e_max {
                break;
            }
            if keep(e) {
                indices.push(n);
                energies.push(e);
            }
            n += 1;
        }
    }
    if indices.is_empty() {
        return Err(Error::EmptySlice {
            e_min: window.e_min,
            e_max: window.e_max,
        });
    }
    Ok(Levels { indices, energies })
}

pub fn levels(model: &ModelSystem, window: &EnergyWindow) -> Result<Levels> {
    levels_capped(model, window, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::energy_window;

    #[test]
    fn harmonic_limit_window() {
        let w = EnergyWindow::new(0.0, 7.0).unwrap();
        let l = levels(&ModelSystem::Kerr { alpha: 0.0 }, &w).unwrap();
        assert_eq!(l.indices, (0..7).collect::<Vec<_>>());
        assert_eq!(l.energies[3], 3.5);
    }

    #[test]
    fn morse_bound_spectrum() {
        let m = ModelSystem::Morse { lambda: 10.0 };
        let l = levels(&m, &energy_window(&m, 1.0).unwrap()).unwrap();
        assert_eq!(l.indices, (0..10).collect::<Vec<_>>());
        for (&n, &e) in l.indices.iter().zip(&l.energies) {
            let x = n as f64 + 0.5;
            assert_eq!(e, x * (1.0 - x / 20.0));
        }
        // n + 1/2 = λ is the non-normalizable threshold state
        assert_eq!(last_index(&ModelSystem::Morse { lambda: 10.5 }), Some(9));
    }

    #[test]
    fn well_strict_truncation() {
        let w = energy_window(&ModelSystem::InfiniteWell, 1.0).unwrap();
        assert_eq!(
            levels(&ModelSystem::InfiniteWell, &w).unwrap().indices,
            vec![2]
        );
        let w = energy_window(&ModelSystem::InfiniteWell, 0.1).unwrap();
        assert_eq!(
            levels(&ModelSystem::InfiniteWell, &w).unwrap().indices,
            (16..30).collect::<Vec<_>>()
        );
    }

    #[test]
    fn kerr_truncation_formula() {
        // Closed-form index bounds of the Kerr window.
        for &(alpha, tau) in &[(0.02, 1.0), (0.05, 0.9), (-0.02, 1.0), (-0.01, 1.3)] {
            let m = ModelSystem::Kerr { alpha };
            let l = levels(&m, &energy_window(&m, tau).unwrap()).unwrap();
            let root = |c: f64| ((c / (alpha * tau)).powi(2) - 0.75).sqrt();
            let (lo, hi) = if alpha >= 0.0 {
                (
                    root(0.75) - 1.0 / alpha - 0.5,
                    root(1.5) - 1.0 / alpha - 0.5,
                )
            } else {
                (
                    -root(1.5) - 1.0 / alpha - 0.5,
                    -root(0.75) - 1.0 / alpha - 0.5,
                )
            };
            let expected: Vec<usize> = (0..1000)
                .filter(|&n| n as f64 >= lo - 1e-9 && n as f64 <= hi + 1e-9)
                .filter(|&n| alpha >= 0.0 || (n as f64 + 0.5) * alpha.abs() <= 1.0)
                .collect();
            assert_eq!(l.indices, expected, "alpha={alpha} tau={tau}");
        }
    }

    #[test]
    fn pendulum_levels_below_window_top() {
        let m = ModelSystem::Pendulum { alpha: -0.02 };
        let w = energy_window(&m, 1.0).unwrap();
        let l = levels(&m, &w).unwrap();
        assert_eq!(l.indices[0], 0);
        assert!(l.energies.windows(2).all(|p| p[1] > p[0]));
        assert!(*l.energies.last().unwrap() <= w.e_max);
        // ground state near the harmonic estimate −1/(8|α|) + 1/2
        assert!((l.energies[0] - (-6.25 + 0.5)).abs() < 0.02);
    }

    #[test]
    fn empty_and_unbounded() {
        let w = EnergyWindow::new(0.6, 0.7).unwrap();
        assert!(matches!(
            levels(&ModelSystem::Harmonic, &w),
            Err(Error::EmptySlice { .. })
        ));
        let w = EnergyWindow::new(0.0, f64::INFINITY).unwrap();
        assert!(levels(&ModelSystem::Harmonic, &w).is_err());
        assert_eq!(
            levels_capped(&ModelSystem::Harmonic, &w, Some(6))
                .unwrap()
                .len(),
            7
        );
    }
}
