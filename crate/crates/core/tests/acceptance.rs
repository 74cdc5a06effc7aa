//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dyncert::classical::{classical_score_oracle, energy_window, trapping_times};
use dyncert::protocol::{
    linear_grid, max_eigenvalue, max_score, maximize_over_tau, reference_state, scan_tau,
    scenario_compare, ReferenceState, WindowPolicy,
};
use dyncert::simulate::{run_protocol_with, McOptions};
use dyncert::spectra::levels::last_index;
use dyncert::spectra::morse::{morse_diag_closed_form, morse_diag_quadrature};
use dyncert::spectra::{sgn_element, sgn_element_quadrature, Eigenbasis};
use dyncert::{EnergyWindow, ModelSystem, Result, SpectrumSlice};

const BOUND: f64 = 2.0 / 3.0;

type Check = fn() -> Result<Outcome>;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { pass, detail })
}

fn harmonic(n_max: usize) -> Result<Arc<SpectrumSlice>> {
    Ok(Arc::new(SpectrumSlice::lowest(
        ModelSystem::Harmonic,
        n_max,
    )?))
}

fn six_level_optimum() -> Result<Outcome> {
    let start = Instant::now();
    let slice = harmonic(6)?;
    let best = max_score(slice.clone(), 1.0)?;
    let elapsed = start.elapsed().as_secs_f64();
    let overlap = best
        .state
        .overlap(&reference_state(ReferenceState::Psi6, slice)?);
    outcome(
        (best.p3_max - 0.687).abs() <= 1e-3 && overlap >= 0.999 && elapsed < 1.0,
        format!(
            "P3 = {:.6}, overlap with psi6 = {overlap:.9}, {elapsed:.3} s",
            best.p3_max
        ),
    )
}

fn five_levels_no_violation() -> Result<Outcome> {
    let (p, _) = max_eigenvalue(&*harmonic(5)?, 1.0)?;
    outcome(p <= BOUND + 1e-9, format!("P3 = {p:.12}"))
}

fn four_level_tau_optimum() -> Result<Outcome> {
    let slice = harmonic(4)?;
    let (tau, p) = maximize_over_tau(|t| Ok(max_eigenvalue(&slice, t)?.0), 0.75, 1.5)?;
    outcome(
        (p - 0.669).abs() <= 1e-3 && (tau - 1.1774).abs() <= 0.01,
        format!("optimum P3 = {p:.6} at tau = {tau:.6}"),
    )
}

fn harmonic_boundaries() -> Result<Outcome> {
    let slice = harmonic(200)?;
    let lo = max_eigenvalue(&slice, 0.75)?.0;
    let hi = max_eigenvalue(&slice, 1.5)?.0;
    outcome(
        (lo - BOUND).abs() <= 1e-9 && (hi - BOUND).abs() <= 1e-9,
        format!("P3(3/4) = {lo:.12}, P3(3/2) = {hi:.12}"),
    )
}

fn large_truncation() -> Result<Outcome> {
    let small = max_eigenvalue(&*harmonic(600)?, 1.0)?.0;
    let start = Instant::now();
    let large = max_eigenvalue(&*harmonic(6000)?, 1.0)?.0;
    let elapsed = start.elapsed().as_secs_f64();
    outcome(
        large >= small && elapsed < 300.0,
        format!("n<=6000: {large:.9} ({elapsed:.1} s), n<=600: {small:.9}"),
    )
}

fn kerr_continuity_and_scenarios() -> Result<Outcome> {
    let p0 = max_eigenvalue(&SpectrumSlice::lowest(ModelSystem::kerr(0.0)?, 200)?, 1.0)?.0;
    let p1 = max_eigenvalue(&SpectrumSlice::lowest(ModelSystem::kerr(1e-8)?, 200)?, 1.0)?.0;
    let mut ordered = true;
    for n_hat in [6, 4] {
        for alpha in [-0.02, -0.01, 0.0, 0.01, 0.02] {
            let s: Vec<f64> = scenario_compare(&ModelSystem::kerr(alpha)?, n_hat)?
                .records
                .iter()
                .map(|r| r.score)
                .collect();
            ordered &= s[0] >= s[1] && s[1] >= s[2];
        }
    }
    outcome(
        (p1 - p0).abs() <= 1e-6 && ordered,
        format!(
            "|dP3| = {:.2e}, scenario ordering holds: {ordered}",
            (p1 - p0).abs()
        ),
    )
}

fn pendulum_regimes() -> Result<Outcome> {
    let strong = ModelSystem::pendulum(-0.09)?;
    let pts = scan_tau(
        &strong,
        &linear_grid(0.75, 1.5, 30),
        &WindowPolicy::FromTau { max_index: None },
    );
    let mut worst = f64::NEG_INFINITY;
    let mut empty = 0;
    let mut failed = Vec::new();
    for pt in &pts {
        match (&pt.p3_max, &pt.error) {
            (Some(p), _) => worst = worst.max(*p),
            (None, Some(e)) if e.kind == "empty_slice" => empty += 1,
            _ => failed.push(pt.tau),
        }
    }
    let weak = max_score(
        Arc::new(SpectrumSlice::build(
            ModelSystem::pendulum(-0.01)?,
            energy_window(&ModelSystem::pendulum(-0.01)?, 1.0)?,
        )?),
        1.0,
    )?
    .p3_max;
    outcome(
        failed.is_empty() && worst <= BOUND + 1e-9 && weak > BOUND,
        format!("alpha=-0.09: max P3 = {worst:.6} over 31 points ({empty} with no admissible level); alpha=-0.01: {weak:.6}"),
    )
}

fn morse_checks() -> Result<Outcome> {
    let mut dt_plus = f64::NEG_INFINITY;
    let mut dt_minus = f64::INFINITY;
    let mut diag_err: f64 = 0.0;
    for lambda in [5.0, 10.0, 20.0] {
        let m = ModelSystem::morse(lambda)?;
        for e in linear_grid(0.0, 0.999 * lambda / 2.0, 400) {
            let t = trapping_times(&m, e)?;
            dt_plus = dt_plus.max(t.dt_plus.value());
            dt_minus = dt_minus.min(t.dt_minus.value());
        }
        let top = last_index(&m).expect("bounded spectrum").min(7);
        for n in 0..=top {
            diag_err = diag_err.max(
                (morse_diag_closed_form(n, lambda)? - morse_diag_quadrature(n, lambda)?).abs(),
            );
        }
    }
    outcome(
        (dt_plus - 0.5).abs() <= 1e-9 && (dt_minus - 0.5).abs() <= 1e-9 && diag_err <= 1e-8,
        format!("max dt+ = {dt_plus:.12}, min dt- = {dt_minus:.12}, diagonal error {diag_err:.2e}"),
    )
}

fn well_regimes() -> Result<Outcome> {
    let policy = WindowPolicy::FromTau { max_index: None };
    let quiet = scan_tau(&ModelSystem::InfiniteWell, &[0.35, 0.4, 0.5, 1.0], &policy);
    let loud = scan_tau(
        &ModelSystem::InfiniteWell,
        &[0.05, 0.1, 0.15, 3.0 / 16.0 - 0.001],
        &policy,
    );
    let q: Vec<f64> = quiet.iter().map(|p| p.p3_max.unwrap_or(f64::NAN)).collect();
    let l: Vec<f64> = loud.iter().map(|p| p.p3_max.unwrap_or(f64::NAN)).collect();
    outcome(
        q.iter().all(|&p| p <= BOUND + 1e-9) && l.iter().all(|&p| p > BOUND),
        format!("no-violation {q:.5?}, violation {l:.5?}"),
    )
}

fn wronskian_vs_quadrature() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let cases = [
        (ModelSystem::Harmonic, 0, 40),
        (ModelSystem::kerr(0.01)?, 0, 40),
        (ModelSystem::pendulum(-0.05)?, 0, 20),
        (ModelSystem::morse(10.0)?, 0, 9),
        (ModelSystem::InfiniteWell, 1, 40),
    ];
    let mut worst: f64 = 0.0;
    for (model, lo, hi) in cases {
        let basis = Eigenbasis::new(model, hi)?;
        for _ in 0..20 {
            let (n, m) = (rng.gen_range(lo..=hi), rng.gen_range(lo..=hi));
            worst = worst
                .max((sgn_element(&basis, n, m)? - sgn_element_quadrature(&basis, n, m)?).abs());
        }
    }
    outcome(
        worst <= 1e-8,
        format!("largest deviation {worst:.2e} over 100 pairs"),
    )
}

fn classical_oracle() -> Result<Outcome> {
    let models = [
        ModelSystem::Harmonic,
        ModelSystem::kerr(0.02)?,
        ModelSystem::kerr(-0.02)?,
        ModelSystem::pendulum(-0.05)?,
        ModelSystem::morse(10.0)?,
        ModelSystem::InfiniteWell,
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for m in models {
        let start = Instant::now();
        let r = classical_score_oracle(&m, &energy_window(&m, 1.0)?, 1.0, 1_000_000, 11)?;
        let elapsed = start.elapsed().as_secs_f64();
        pass &= r.above_bound == 0 && r.max_score <= BOUND + 1e-12 && elapsed < 120.0;
        parts.push(format!("{m} {:.6} ({elapsed:.0} s)", r.max_score));
    }
    let diag = classical_score_oracle(
        &ModelSystem::Harmonic,
        &EnergyWindow::new(0.0, 50.0)?,
        3.0,
        10_000,
        11,
    )?;
    pass &= (diag.max_score - 1.0).abs() < 1e-12;
    parts.push(format!("harmonic tau=3 {:.6}", diag.max_score));
    outcome(pass, parts.join(", "))
}

fn monte_carlo() -> Result<Outcome> {
    let psi6 = reference_state(ReferenceState::Psi6, harmonic(6)?)?;
    let one = run_protocol_with(&psi6, 1.0, 1_000_000, 2024, McOptions { workers: Some(1) })?;
    let eight = run_protocol_with(&psi6, 1.0, 1_000_000, 2024, McOptions { workers: Some(8) })?;
    let same = one.p3_hat == eight.p3_hat && one.stderr == eight.stderr;
    outcome(
        (one.p3_hat - 0.687).abs() <= 4.0 * one.stderr && same,
        format!(
            "p3 = {:.5} ± {:.5}, identical across 1 and 8 workers: {same}",
            one.p3_hat, one.stderr
        ),
    )
}

fn main() {
    let criteria: [(&str, Check); 12] = [
        ("harmonic six-level optimum", six_level_optimum),
        (
            "harmonic five levels stay classical",
            five_levels_no_violation,
        ),
        ("harmonic four-level tau optimum", four_level_tau_optimum),
        ("harmonic boundary ratios", harmonic_boundaries),
        ("large truncation", large_truncation),
        (
            "kerr continuity and scenario ordering",
            kerr_continuity_and_scenarios,
        ),
        ("pendulum regimes", pendulum_regimes),
        ("morse trapping times and diagonal", morse_checks),
        ("infinite well regimes", well_regimes),
        ("wronskian against quadrature", wronskian_vs_quadrature),
        ("classical oracle", classical_oracle),
        ("monte carlo", monte_carlo),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (pass, detail) = match check() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        failures += usize::from(!pass);
        println!(
            "criterion {:>2} {}: {name}: {detail}",
            i + 1,
            if pass { "PASS" } else { "FAIL" }
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
