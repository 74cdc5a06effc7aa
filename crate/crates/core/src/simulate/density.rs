//! Position densities |⟨q|ψ(t)⟩|² of states at the probing times.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::classical::ModelSystem;
use crate::error::{Error, Result};
use crate::numerics::grid::RealGrid;
use crate::protocol::QuantumState;

/// Probability mass a position grid must capture.
pub const MASS_TARGET: f64 = 1.0 - 1e-8;
const MAX_WIDENINGS: usize = 12;

/// Time of probe k (0, 1, 2) in units of 2π/ω₀.
pub fn probe_time(k: usize, tau: f64) -> f64 {
    k as f64 * tau / 3.0
}

/// ψ(q) for the given amplitudes over the state's slice.
pub fn wavefunction(state: &QuantumState, amplitudes: &[Complex64], q: f64) -> Result<Complex64> {
    let slice = state.slice();
    let basis = slice.basis();
    let mut acc = Complex64::default();
    for (&n, c) in slice.indices().iter().zip(amplitudes) {
        if c.norm_sqr() == 0.0 {
            continue;
        }
        acc += c * basis.eval(n, q)?.0;
    }
    Ok(acc)
}

/// |ψ(q, t)|² on the given positions, t = kτ/3.
pub fn marginal_density(
    state: &QuantumState,
    k: usize,
    tau: f64,
    positions: &[f64],
) -> Result<RealGrid> {
    if k > 2 {
        return Err(Error::InvalidParameter(format!(
            "probe index {k} is not 0, 1 or 2"
        )));
    }
    let amps = state.evolved_amplitudes(probe_time(k, tau));
    let values = positions
        .par_iter()
        .map(|&q| wavefunction(state, &amps, q).map(|z| z.norm_sqr()))
        .collect::<Result<Vec<_>>>()?;
    RealGrid::new(positions.to_vec(), values)
}

fn uniform(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Grid resolution: enough points per node of the highest retained level.
fn resolution(state: &QuantumState) -> usize {
    let top = *state.slice().indices().last().expect("slice is non-empty");
    16001 + 64 * top
}

/// Initial half-range around the classical region of the top level.
fn initial_range(state: &QuantumState) -> (f64, f64) {
    let slice = state.slice();
    let e_top = *slice.energies().last().expect("slice is non-empty");
    match *slice.model() {
        ModelSystem::Harmonic | ModelSystem::Kerr { .. } => {
            let h0 = slice.indices().last().copied().unwrap_or(0) as f64 + 0.5;
            let turn = (2.0 * h0).sqrt();
            // Airy decay length of the top level is (2 h₀)^{-1/6}.
            let r = turn + 5.0 * (2.0 * h0).powf(-1.0 / 6.0) + 4.0;
            (-r, r)
        }
        ModelSystem::Morse { lambda } => {
            let r = (2.0 * e_top / lambda).sqrt().min(0.999_999);
            let (left, right) = ((1.0 - r).ln(), (1.0 + r).ln());
            // Decay rate of the left tail is s = λ − n − 1/2.
            let s = lambda - slice.indices().last().copied().unwrap_or(0) as f64 - 0.5;
            (left - 5.0 / s - 4.0, right + 3.0)
        }
        _ => slice.model().configuration_domain(),
    }
}

/// A position grid holding at least `MASS_TARGET` of the probability at all
/// three probing times. Unbounded coordinates are widened until covered.
pub fn position_grid(state: &QuantumState, tau: f64) -> Result<Vec<f64>> {
    let model = *state.slice().model();
    let n = resolution(state);
    let (lo0, hi0) = initial_range(state);
    let bounded = lo0.is_finite() && hi0.is_finite() && (lo0, hi0) == model.configuration_domain();
    if bounded {
        return Ok(uniform(lo0, hi0, n));
    }
    let (mut lo, mut hi) = (lo0, hi0);
    let mut mass = 0.0;
    for _ in 0..MAX_WIDENINGS {
        let grid = uniform(lo, hi, n);
        mass = (0..3)
            .map(|k| marginal_density(state, k, tau, &grid).map(|d| d.trapezoid()))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if mass >= MASS_TARGET {
            return Ok(grid);
        }
        let mid = 0.5 * (lo + hi);
        let half = 0.75 * (hi - lo);
        lo = mid - half;
        hi = mid + half;
    }
    Err(Error::GridCoverage { mass })
}

/// Probability that q > 0 from a density grid (linear interpolation,
/// with the cell containing 0 split exactly).
pub fn positive_mass(density: &RealGrid) -> f64 {
    let (x, y) = (density.points(), density.values());
    let mut total = 0.0;
    let mut positive = 0.0;
    for i in 0..x.len().saturating_sub(1) {
        let (a, b) = (x[i], x[i + 1]);
        let cell = 0.5 * (y[i] + y[i + 1]) * (b - a);
        total += cell;
        if a >= 0.0 {
            positive += cell;
        } else if b > 0.0 {
            let y0 = y[i] + (y[i + 1] - y[i]) * (0.0 - a) / (b - a);
            positive += 0.5 * (y0 + y[i + 1]) * b;
        }
    }
    positive / total
}

/// (1/3) Σₖ Pr[q > 0 at t = kτ/3] by deterministic grid integration.
pub fn grid_score(state: &QuantumState, tau: f64) -> Result<f64> {
    let grid = position_grid(state, tau)?;
    let mut sum = 0.0;
    for k in 0..3 {
        sum += positive_mass(&marginal_density(state, k, tau, &grid)?);
    }
    Ok(sum / 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::{reference_state, score_state, ReferenceState};
    use crate::spectra::SpectrumSlice;
    use std::sync::Arc;

    fn psi6() -> QuantumState {
        let slice = Arc::new(SpectrumSlice::lowest(ModelSystem::Harmonic, 6).unwrap());
        reference_state(ReferenceState::Psi6, slice).unwrap()
    }

    #[test]
    fn densities_normalized() {
        let s = psi6();
        let grid = position_grid(&s, 1.0).unwrap();
        for k in 0..3 {
            let m = marginal_density(&s, k, 1.0, &grid).unwrap().trapezoid();
            assert!((m - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn psi6_density_repeats_at_each_probe() {
        let s = psi6();
        let grid = uniform(-6.0, 6.0, 401);
        let d0 = marginal_density(&s, 0, 1.0, &grid).unwrap();
        let d1 = marginal_density(&s, 1, 1.0, &grid).unwrap();
        for (a, b) in d0.values().iter().zip(d1.values()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn ground_state_is_stationary() {
        let slice = Arc::new(SpectrumSlice::lowest(ModelSystem::Morse { lambda: 6.0 }, 3).unwrap());
        let s = QuantumState::eigenstate(slice, 0).unwrap();
        let grid = uniform(-3.0, 2.0, 101);
        let d0 = marginal_density(&s, 0, 1.0, &grid).unwrap();
        let d2 = marginal_density(&s, 2, 1.0, &grid).unwrap();
        for (a, b) in d0.values().iter().zip(d2.values()) {
            assert!((a - b).abs() <= 1e-12 * a.abs());
        }
    }

    #[test]
    fn grid_score_matches_exact_score() {
        let models = [
            (ModelSystem::Harmonic, 6, 1.0),
            (ModelSystem::Kerr { alpha: 0.02 }, 6, 1.05),
            (ModelSystem::Pendulum { alpha: -0.02 }, 6, 1.0),
            (ModelSystem::Morse { lambda: 10.0 }, 6, 1.0),
            (ModelSystem::InfiniteWell, 7, 0.15),
        ];
        for (model, n, tau) in models {
            let slice = Arc::new(SpectrumSlice::lowest(model, n).unwrap());
            let (_, v) = crate::protocol::max_eigenvalue(&slice, tau).unwrap();
            let s = QuantumState::normalized(slice, v).unwrap();
            let exact = score_state(&s, tau).unwrap();
            let grid = grid_score(&s, tau).unwrap();
            assert!((exact - grid).abs() < 1e-6, "{model}: {exact} vs {grid}");
        }
    }
}
