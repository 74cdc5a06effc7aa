use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("convergence failure in {what}: residual {residual:e}")]
    Convergence { what: String, residual: f64 },

    #[error("empty energy window: e_min = {e_min} > e_max = {e_max}")]
    EmptyWindow { e_min: f64, e_max: f64 },

    #[error("unsupported probing ratio tau = {tau} for {model}")]
    UnsupportedTau { model: String, tau: f64 },

    #[error("energy {energy} reaches the libration threshold {threshold}")]
    Libration { energy: f64, threshold: f64 },

    #[error("no energy level falls inside [{e_min}, {e_max}]")]
    EmptySlice { e_min: f64, e_max: f64 },

    #[error(
        "numerical instability in {what}: closed form {closed_form} vs quadrature {quadrature}"
    )]
    NumericalInstability {
        what: String,
        closed_form: f64,
        quadrature: f64,
    },

    #[error("slice does not contain level {0}")]
    InsufficientSlice(usize),

    #[error("unsupported order {0}")]
    UnsupportedOrder(usize),

    #[error("grid captured only {mass} of the probability")]
    GridCoverage { mass: f64 },

    #[error("model mismatch: {0}")]
    ModelMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("io: {0}")]
    Io(String),
}

impl Error {
    /// Short machine-readable tag used in JSON error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Convergence { .. } => "convergence",
            Error::EmptyWindow { .. } => "empty_window",
            Error::UnsupportedTau { .. } => "unsupported_tau",
            Error::Libration { .. } => "libration",
            Error::EmptySlice { .. } => "empty_slice",
            Error::NumericalInstability { .. } => "numerical_instability",
            Error::InsufficientSlice(_) => "insufficient_slice",
            Error::UnsupportedOrder(_) => "unsupported_order",
            Error::GridCoverage { .. } => "grid_coverage",
            Error::ModelMismatch(_) => "model_mismatch",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
