use std::sync::Arc;

use dyncert::protocol::{max_score, reference_state, score_state, ReferenceState, StateFile};
use dyncert::simulate::{grid_score, run_protocol};
use dyncert::spectra::SliceCache;
use dyncert::{EnergyWindow, ModelSystem, SpectrumSlice};

#[test]
fn optimum_survives_record_round_trip() {
    let model = ModelSystem::Morse { lambda: 12.0 };
    let slice = Arc::new(SpectrumSlice::lowest(model, 8).unwrap());
    let best = max_score(slice.clone(), 1.0).unwrap();
    let text = serde_json::to_string(&best.record()).unwrap();
    let file: StateFile = serde_json::from_str(&text).unwrap();
    let state = file.into_state(slice).unwrap();
    assert!((score_state(&state, 1.0).unwrap() - best.p3_max).abs() < 1e-12);
}

#[test]
fn eigen_score_agrees_with_position_density() {
    for model in [
        ModelSystem::Harmonic,
        ModelSystem::Kerr { alpha: 0.01 },
        ModelSystem::Morse { lambda: 8.0 },
    ] {
        let slice = Arc::new(SpectrumSlice::lowest(model, 6).unwrap());
        let best = max_score(slice, 1.0).unwrap();
        let grid = grid_score(&best.state, 1.0).unwrap();
        assert!(
            (grid - best.p3_max).abs() < 1e-6,
            "{model}: {grid} vs {}",
            best.p3_max
        );
    }
}

#[test]
fn sampled_score_tracks_exact_score() {
    let slice = Arc::new(SpectrumSlice::lowest(ModelSystem::Harmonic, 4).unwrap());
    let psi4 = reference_state(ReferenceState::Psi4, slice).unwrap();
    let exact = score_state(&psi4, 1.1774).unwrap();
    let est = run_protocol(&psi4, 1.1774, 200_000, 5).unwrap();
    assert!(
        (est.p3_hat - exact).abs() < 4.0 * est.stderr,
        "{} vs {exact}",
        est.p3_hat
    );
}

#[test]
fn cached_slice_matches_fresh_build() {
    let dir = tempfile::tempdir().unwrap();
    let cache = SliceCache::new(dir.path().to_path_buf());
    let model = ModelSystem::Pendulum { alpha: -0.03 };
    let window = EnergyWindow::new(f64::NEG_INFINITY, f64::INFINITY).unwrap();
    let fresh = SpectrumSlice::build_capped(model, window, Some(12)).unwrap();
    let first = cache.get_or_build(model, window, Some(12)).unwrap();
    let again = cache.get_or_build(model, window, Some(12)).unwrap();
    assert_eq!(fresh.to_record(), first.to_record());
    assert_eq!(first.to_record(), again.to_record());
}
