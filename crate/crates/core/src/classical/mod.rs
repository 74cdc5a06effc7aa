//! Classical side of the protocol: trapping times, energy windows,
//! trajectories and the sampled classical score bound.

pub mod dynamics;
pub mod model;
pub mod oracle;
pub mod trapping;
pub mod window;

pub use dynamics::{integrate_trajectory, pos, positivity_along, PhasePoint};
pub use model::ModelSystem;
pub use oracle::{classical_score_oracle, trajectory_score, OracleReport};
pub use trapping::{
    generic_trapping_times, trapping_times, trapping_times_quadrature, TrapTime, TrappingTimes,
};
pub use window::{energy_window, EnergyWindow};
