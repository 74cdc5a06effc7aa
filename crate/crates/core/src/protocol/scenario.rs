//! Comparison of optimized scores with harmonic-approximation choices
//! for weakly anharmonic systems.

use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use super::score::{max_eigenvalue, score_state};
use super::state::{reference_state, ReferenceState};
use crate::classical::ModelSystem;
use crate::error::{Error, Result};
use crate::numerics::roots::golden_max;
use crate::spectra::SpectrumSlice;

/// Anharmonicities beyond this are outside the weak regime.
pub const WEAK_ANHARMONICITY: f64 = 0.02;
pub const TAU_RESOLUTION: f64 = 1e-6;
pub const MULTI_STARTS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    /// Optimal state and optimal τ.
    Optimal,
    /// Reference state with optimal τ.
    ReferenceOptimalTau,
    /// Reference state at the harmonic-limit τ.
    ReferenceHarmonicTau,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioRecord {
    pub scenario: Scenario,
    pub score: f64,
    pub tau: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioComparison {
    pub model: ModelSystem,
    pub n_hat: usize,
    pub reference: ReferenceState,
    /// Set when |α| exceeds the weak-anharmonicity regime.
    pub warning: Option<String>,
    pub records: Vec<ScenarioRecord>,
}

/// Maximizes f over [lo, hi]: golden-section search on each of
/// `MULTI_STARTS` equal subintervals, plus the endpoints. Ties go to the
/// smallest τ.
pub fn maximize_over_tau<F: Fn(f64) -> Result<f64>>(f: F, lo: f64, hi: f64) -> Result<(f64, f64)> {
    let mut failure = None;
    let mut eval = |t: f64| match f(t) {
        Ok(v) => v,
        Err(e) => {
            failure.get_or_insert(e);
            f64::NEG_INFINITY
        }
    };
    let mut best = (lo, eval(lo));
    let width = (hi - lo) / MULTI_STARTS as f64;
    for k in 0..MULTI_STARTS {
        let a = lo + width * k as f64;
        let cand = golden_max(&mut eval, a, a + width, TAU_RESOLUTION);
        if cand.1 > best.1 {
            best = cand;
        }
    }
    let end = (hi, eval(hi));
    if end.1 > best.1 {
        best = end;
    }
    match failure {
        Some(e) => Err(e),
        None => Ok(best),
    }
}

fn reference_for(n_hat: usize) -> Result<ReferenceState> {
    match n_hat {
        6 => Ok(ReferenceState::Psi6),
        4 => Ok(ReferenceState::Psi4),
        _ => Err(Error::InvalidParameter(format!(
            "scenario truncation must be 4 or 6, got {n_hat}"
        ))),
    }
}

/// τ at which the reference state scores best on the harmonic oscillator
/// (exactly 1 for the n ≤ 6 state by symmetry).
pub fn harmonic_reference_tau(kind: ReferenceState) -> Result<f64> {
    static PSI4_TAU: OnceLock<f64> = OnceLock::new();
    match kind {
        ReferenceState::Psi6 => Ok(1.0),
        ReferenceState::Psi4 => {
            if let Some(t) = PSI4_TAU.get() {
                return Ok(*t);
            }
            let slice = Arc::new(SpectrumSlice::lowest(ModelSystem::Harmonic, 4)?);
            let state = reference_state(kind, slice)?;
            let (tau, _) = maximize_over_tau(|t| score_state(&state, t), 0.75, 1.5)?;
            Ok(*PSI4_TAU.get_or_init(|| tau))
        }
    }
}

/// Three scores on levels 0..=n̂: (i) optimal state and τ, (ii) reference
/// state with optimal τ, (iii) reference state at its harmonic-limit τ.
pub fn scenario_compare(model: &ModelSystem, n_hat: usize) -> Result<ScenarioComparison> {
    let reference = reference_for(n_hat)?;
    let (lo, hi) = model.tau_range();
    if !(hi > lo) || !hi.is_finite() {
        return Err(Error::ModelMismatch(format!(
            "{model} has no range of probing ratios to optimize"
        )));
    }
    let warning = model
        .alpha()
        .filter(|a| a.abs() > WEAK_ANHARMONICITY)
        .map(|a| {
            format!(
                "|alpha| = {} exceeds the weak-anharmonicity regime {WEAK_ANHARMONICITY}",
                a.abs()
            )
        });
    let slice = Arc::new(SpectrumSlice::lowest(*model, n_hat)?);
    let state = reference_state(reference, slice.clone())?;
    let optimal = |t: f64| max_eigenvalue(&slice, t).map(|r| r.0);
    let fixed = |t: f64| score_state(&state, t);

    let tau_iii = harmonic_reference_tau(reference)?;
    let iii = (tau_iii, fixed(tau_iii)?);
    let mut ii = maximize_over_tau(fixed, lo, hi)?;
    if iii.1 > ii.1 {
        ii = iii;
    }
    // Every candidate τ of the narrower scenarios is also a candidate here.
    let mut i = maximize_over_tau(optimal, lo, hi)?;
    for t in [ii.0, iii.0] {
        let v = optimal(t)?;
        if v > i.1 {
            i = (t, v);
        }
    }
    let rec = |scenario, (tau, score): (f64, f64)| ScenarioRecord {
        scenario,
        score,
        tau,
    };
    Ok(ScenarioComparison {
        model: *model,
        n_hat,
        reference,
        warning,
        records: vec![
            rec(Scenario::Optimal, i),
            rec(Scenario::ReferenceOptimalTau, ii),
            rec(Scenario::ReferenceHarmonicTau, iii),
        ],
    })
}
