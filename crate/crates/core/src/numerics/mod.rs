//! Special functions, quadrature and eigensolvers.

pub mod dd;
pub mod eigen;
pub mod elliptic;
pub mod gamma;
pub mod grid;
pub mod laguerre;
pub mod mathieu;
pub mod quadrature;
pub mod roots;
pub mod tridiag;

pub use eigen::{
    hermitian_eigenvalues, hermitian_max_eigenpair, lanczos_max_eigenpair, Eigenpair,
    HermitianMatrix, HermitianOperator, LanczosOptions,
};
pub use elliptic::{elliptic_k, elliptic_k_inverse};
pub use gamma::{ln_gamma, regularized_gamma_p, regularized_gamma_q};
pub use grid::RealGrid;
pub use laguerre::laguerre;
pub use mathieu::{mathieu_eigensystem, MathieuParity, MathieuSolution};
pub use quadrature::{integrate, quad_inverse_sqrt, QuadOptions};
