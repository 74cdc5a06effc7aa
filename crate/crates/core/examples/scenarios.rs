//! Optimal states versus fixed reference states for the Kerr oscillator.

use dyncert::protocol::scenario_compare;
use dyncert::{ModelSystem, Result};

fn main() -> Result<()> {
    for n_hat in [6, 4] {
        for alpha in [-0.01, 0.0, 0.01] {
            let c = scenario_compare(&ModelSystem::kerr(alpha)?, n_hat)?;
            let scores: Vec<String> = c
                .records
                .iter()
                .map(|r| format!("{:.5}@{:.4}", r.score, r.tau))
                .collect();
            println!("n<={n_hat} alpha={alpha:+.3}: {}", scores.join("  "));
        }
    }
    Ok(())
}
