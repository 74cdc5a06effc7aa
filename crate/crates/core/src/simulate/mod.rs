//! Statistical simulation of the measurement protocol.

pub mod density;
pub mod montecarlo;

pub use density::{
    grid_score, marginal_density, position_grid, positive_mass, probe_time, wavefunction,
};
pub use montecarlo::{
    run_protocol, run_protocol_with, write_rounds_csv, DensitySampler, McEstimate, McOptions,
    ProtocolSampler, Round,
};
