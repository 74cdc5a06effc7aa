//! Energy levels, eigenfunctions and the sign matrix of each model.

pub mod eigenfunction;
pub mod levels;
pub mod morse;
pub mod sgn;
pub mod slice;

pub use eigenfunction::{eigenfunction, level_is_even, Eigenbasis, EigenfunctionSample};
pub use levels::{levels, levels_capped, lowest_energies, Levels};
pub use morse::morse_diag_polynomial;
pub use sgn::{sgn_element, sgn_element_quadrature, sgn_matrix, SgnMatrix};
pub use slice::{SliceCache, SpectrumSlice};
