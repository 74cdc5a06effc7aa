//! Energy windows, trapping times and the sampled classical score for each model.

use dyncert::classical::{classical_score_oracle, energy_window, trapping_times};
use dyncert::{ModelSystem, Result};

fn main() -> Result<()> {
    let models = [
        ModelSystem::Harmonic,
        ModelSystem::kerr(0.02)?,
        ModelSystem::pendulum(-0.05)?,
        ModelSystem::morse(10.0)?,
        ModelSystem::InfiniteWell,
    ];
    let tau = 1.0;
    for model in models {
        let window = energy_window(&model, tau)?;
        let probe = if window.is_bounded() {
            0.5 * (window.e_min + window.e_max)
        } else {
            window.e_min + 2.0
        };
        let t = trapping_times(&model, probe)?;
        let oracle = classical_score_oracle(&model, &window, tau, 20_000, 7)?;
        println!(
            "{model}: window [{:.4}, {:.4}], at E={probe:.3} dt+={:.4} dt-={:.4}, best classical score {:.6}",
            window.e_min,
            window.e_max,
            t.dt_plus.value(),
            t.dt_minus.value(),
            oracle.max_score
        );
    }
    Ok(())
}
