//! Diagonal elements ⟨n|sgn(x)|n⟩ of the Morse oscillator.

use crate::error::{Error, Result};
use crate::numerics::gamma::{ln_gamma, regularized_gamma_q};
use crate::numerics::quadrature::{integrate, QuadOptions};

use super::eigenfunction::morse_function;

/// Highest order with a tabulated polynomial.
pub const MAX_POLYNOMIAL_ORDER: usize = 7;

/// Agreement required between the polynomial route and quadrature.
pub const CROSS_CHECK_TOL: f64 = 1e-6;

// Coefficients (numerator, denominator) of λ⁰, λ¹, … for orders 0..=7.
const COEFFS: [&[(i64, i64)]; 8] = [
    &[(0, 1)],
    &[(1, 1)],
    &[(6, 1), (2, 1)],
    &[(180, 1), (-42, 1), (32, 3)],
    &[(6440, 1), (-5828, 3), (190, 1), (58, 3)],
    &[(347760, 1), (-140604, 1), (102376, 5), (-4912, 5), (212, 3)],
    &[
        (23617440, 1),
        (-10818312, 1),
        (8950344, 5),
        (-1726232, 15),
        (125644, 45),
        (380, 3),
    ],
    &[
        (1979385408, 1),
        (-4965563888, 5),
        (6608820632, 35),
        (-5199530008, 315),
        (73504376, 105),
        (-553792, 45),
        (1192, 3),
    ],
];

/// Pⁿ(λ), the polynomial part of the closed-form diagonal element.
pub fn morse_diag_polynomial(n: usize, lambda: f64) -> Result<f64> {
    let coeffs = COEFFS.get(n).ok_or(Error::UnsupportedOrder(n))?;
    Ok(coeffs.iter().rev().fold(0.0, |acc, &(num, den)| {
        acc * lambda + num as f64 / den as f64
    }))
}

/// Closed form 4(2λ)^a e^{−2λ} Pⁿ(λ) a/Γ(2λ−n) + 2Q(a, 2λ) − 1, a = 2λ−2n−1.
pub fn morse_diag_closed_form(n: usize, lambda: f64) -> Result<f64> {
    let p = morse_diag_polynomial(n, lambda)?;
    let nf = n as f64;
    let a = 2.0 * lambda - 2.0 * nf - 1.0;
    if a <= 0.0 {
        return Err(Error::Domain(format!(
            "Morse lambda={lambda} has no bound level {n}"
        )));
    }
    let ln_mag =
        4f64.ln() + a * (2.0 * lambda).ln() - 2.0 * lambda + a.ln() - ln_gamma(2.0 * lambda - nf);
    let boundary = if p == 0.0 {
        0.0
    } else {
        p.signum() * (ln_mag + p.abs().ln()).exp()
    };
    Ok(boundary + 2.0 * regularized_gamma_q(a, 2.0 * lambda)? - 1.0)
}

/// 2∫_{x>0} ψₙ² dx − 1 by adaptive quadrature.
pub fn morse_diag_quadrature(n: usize, lambda: f64) -> Result<f64> {
    // ψ² ∝ z^{2λ−1} e^{−z} up to the polynomial; the tail past this is negligible.
    let z_max = 2.0 * lambda + 80.0 + 16.0 * (2.0 * lambda).sqrt() + 4.0 * n as f64;
    let x_max = (z_max / (2.0 * lambda)).ln();
    let opts = QuadOptions {
        rel_tol: 1e-13,
        abs_tol: 1e-15,
        ..QuadOptions::default().with_panels(32).with_budget(20_000)
    };
    let right = integrate(|x| morse_function(lambda, n, x).0.powi(2), 0.0, x_max, opts)?.value;
    Ok(2.0 * right - 1.0)
}

/// Diagonal element: the polynomial closed form for n ≤ 7 (checked against
/// quadrature), quadrature beyond.
pub fn morse_diag(n: usize, lambda: f64) -> Result<f64> {
    let quad = morse_diag_quadrature(n, lambda)?;
    if n > MAX_POLYNOMIAL_ORDER {
        return Ok(quad);
    }
    let closed = morse_diag_closed_form(n, lambda)?;
    if (closed - quad).abs() > CROSS_CHECK_TOL {
        return Err(Error::NumericalInstability {
            what: format!("Morse diagonal n={n} lambda={lambda}"),
            closed_form: closed,
            quadrature: quad,
        });
    }
    Ok(closed)
}
