//! The three-time positivity protocol: Q₃, scores, τ scans and scenarios.

pub mod q3;
pub mod scan;
pub mod scenario;
pub mod score;
pub mod state;

pub use q3::{build_q3, Q3Operator};
pub use scan::{linear_grid, scan_tau, scan_tau_cached, write_scan_csv, ScanPoint, WindowPolicy};
pub use scenario::{
    harmonic_reference_tau, maximize_over_tau, scenario_compare, Scenario, ScenarioComparison,
};
pub use score::{max_eigenvalue, max_score, score_state, ScoreRecord, ScoreResult};
pub use state::{reference_state, QuantumState, ReferenceState, StateFile};
