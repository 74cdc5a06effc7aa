//! Periodic Mathieu functions ce_r(u, q), se_r(u, q) from the Fourier
//! recurrence, solved as a symmetric tridiagonal eigenproblem.
//!
//! Equation: y'' + (a − 2q cos 2u) y = 0. Normalization ∫₀^{2π} y² du = π.

use serde::{Deserialize, Serialize};

use super::dd::DoubleDouble;
use super::tridiag::tridiagonal_eigen;
use crate::error::{Error, Result};

const TAIL_TOL: f64 = 1e-14;
const MAX_TERMS: usize = 20_000;
const COMPENSATED_ABOVE: f64 = 1e4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MathieuParity {
    /// ce_r: cosine series.
    Even,
    /// se_r: sine series.
    Odd,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MathieuSolution {
    pub order: usize,
    pub parity: MathieuParity,
    pub q: f64,
    pub characteristic: f64,
    /// Coefficient of cos(m u) or sin(m u) for m = harmonics[k].
    pub coefficients: Vec<f64>,
    pub harmonics: Vec<usize>,
}

// The four independent families, indexed by (parity, order mod 2).
#[derive(Clone, Copy)]
enum Family {
    CosEven,
    CosOdd,
    SinOdd,
    SinEven,
}

impl Family {
    fn of(parity: MathieuParity, order: usize) -> Result<(Self, usize)> {
        match (parity, order % 2) {
            (MathieuParity::Even, 0) => Ok((Family::CosEven, order / 2)),
            (MathieuParity::Even, _) => Ok((Family::CosOdd, order / 2)),
            (MathieuParity::Odd, 1) => Ok((Family::SinOdd, order / 2)),
            (MathieuParity::Odd, _) => {
                if order == 0 {
                    Err(Error::UnsupportedOrder(0))
                } else {
                    Ok((Family::SinEven, order / 2 - 1))
                }
            }
        }
    }

    fn harmonic(self, k: usize) -> usize {
        match self {
            Family::CosEven => 2 * k,
            Family::CosOdd | Family::SinOdd => 2 * k + 1,
            Family::SinEven => 2 * k + 2,
        }
    }

    fn order(self, index: usize) -> usize {
        self.harmonic(index)
    }

    fn parity(self) -> MathieuParity {
        match self {
            Family::CosEven | Family::CosOdd => MathieuParity::Even,
            _ => MathieuParity::Odd,
        }
    }

    /// Symmetric tridiagonal matrix of the recurrence with `n` terms.
    fn matrix(self, q: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
        let mut diag: Vec<f64> = (0..n).map(|k| (self.harmonic(k) as f64).powi(2)).collect();
        let mut off = vec![q; n.saturating_sub(1)];
        match self {
            // A₀ enters with weight 2 in the normalization; rescaling it by
            // √2 symmetrizes the first row.
            Family::CosEven if n > 1 => off[0] = std::f64::consts::SQRT_2 * q,
            Family::CosOdd => diag[0] += q,
            Family::SinOdd => diag[0] -= q,
            _ => {}
        }
        (diag, off)
    }
}

/// Solves one family for indices 0..count, growing the truncation until the
/// trailing coefficient of every requested vector is negligible.
fn solve_family(family: Family, q: f64, count: usize) -> Result<Vec<MathieuSolution>> {
    if !q.is_finite() {
        return Err(Error::Domain(format!(
            "Mathieu parameter must be finite, got {q}"
        )));
    }
    if count == 0 {
        return Ok(Vec::new());
    }
    let mut n = count + 16 + (4.0 * q.abs().sqrt()) as usize;
    loop {
        let n_eff = n.min(MAX_TERMS);
        let (diag, off) = family.matrix(q, n_eff);
        let (vals, vecs) = tridiagonal_eigen(&diag, &off)?;
        let mut worst = 0.0_f64;
        for j in 0..count {
            let col: Vec<f64> = (0..n_eff).map(|k| vecs[k * n_eff + j]).collect();
            let max = col.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
            let tail = col[n_eff - 2..].iter().fold(0.0_f64, |m, c| m.max(c.abs()));
            worst = worst.max(tail / max);
        }
        if worst < TAIL_TOL || n_eff >= MAX_TERMS {
            if worst >= TAIL_TOL {
                return Err(Error::Convergence {
                    what: "Mathieu Fourier truncation".into(),
                    residual: worst,
                });
            }
            return Ok((0..count)
                .map(|j| {
                    build(
                        family,
                        q,
                        vals[j],
                        (0..n_eff).map(|k| vecs[k * n_eff + j]),
                        j,
                    )
                })
                .collect());
        }
        n *= 2;
    }
}

fn build(
    family: Family,
    q: f64,
    a: f64,
    col: impl Iterator<Item = f64>,
    index: usize,
) -> MathieuSolution {
    let mut coefficients: Vec<f64> = col.collect();
    if let Family::CosEven = family {
        coefficients[0] /= std::f64::consts::SQRT_2;
    }
    // Drop trailing coefficients below the noise floor.
    let max = coefficients.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
    let keep = coefficients
        .iter()
        .rposition(|c| c.abs() > 1e-18 * max)
        .map_or(1, |p| p + 1);
    coefficients.truncate(keep);
    let harmonics = (0..keep).map(|k| family.harmonic(k)).collect();
    let mut sol = MathieuSolution {
        order: family.order(index),
        parity: family.parity(),
        q,
        characteristic: a,
        coefficients,
        harmonics,
    };
    sol.fix_sign();
    sol
}

impl MathieuSolution {
    /// ce_order(·, q).
    pub fn even(order: usize, q: f64) -> Result<Self> {
        Self::solve(MathieuParity::Even, order, q)
    }

    /// se_order(·, q), order ≥ 1.
    pub fn odd(order: usize, q: f64) -> Result<Self> {
        Self::solve(MathieuParity::Odd, order, q)
    }

    fn solve(parity: MathieuParity, order: usize, q: f64) -> Result<Self> {
        let (family, index) = Family::of(parity, order)?;
        Ok(solve_family(family, q, index + 1)?
            .pop()
            .expect("non-empty"))
    }

    // Even solutions: y(0) > 0 (or y(π/2) > 0 when y(0) is negligible).
    // Odd solutions: y'(0) > 0 (or y'(π/2) > 0 likewise).
    fn fix_sign(&mut self) {
        let (at0, at_half) = match self.parity {
            MathieuParity::Even => (self.value(0.0), self.value(std::f64::consts::FRAC_PI_2)),
            MathieuParity::Odd => (
                self.derivative(0.0),
                self.derivative(std::f64::consts::FRAC_PI_2),
            ),
        };
        let scale: f64 = self.coefficients.iter().map(|c| c.abs()).sum();
        let reference = if at0.abs() > 1e-12 * scale {
            at0
        } else {
            at_half
        };
        if reference < 0.0 {
            self.coefficients.iter_mut().for_each(|c| *c = -*c);
        }
    }

    fn compensated(&self) -> bool {
        self.q.abs() > COMPENSATED_ABOVE
    }

    /// (y(u), y'(u)).
    pub fn value_and_derivative(&self, u: f64) -> (f64, f64) {
        let odd = self.parity == MathieuParity::Odd;
        if self.compensated() {
            let (mut v, mut d) = (DoubleDouble::default(), DoubleDouble::default());
            for (c, &m) in self.coefficients.iter().zip(&self.harmonics) {
                let mf = m as f64;
                let (s, co) = (mf * u).sin_cos();
                if odd {
                    v = v.add_product(*c, s);
                    d = d.add_product(*c * mf, co);
                } else {
                    v = v.add_product(*c, co);
                    d = d.add_product(-*c * mf, s);
                }
            }
            (v.value(), d.value())
        } else {
            let (mut v, mut d) = (0.0, 0.0);
            for (c, &m) in self.coefficients.iter().zip(&self.harmonics) {
                let mf = m as f64;
                let (s, co) = (mf * u).sin_cos();
                if odd {
                    v += c * s;
                    d += c * mf * co;
                } else {
                    v += c * co;
                    d -= c * mf * s;
                }
            }
            (v, d)
        }
    }

    pub fn value(&self, u: f64) -> f64 {
        self.value_and_derivative(u).0
    }

    pub fn derivative(&self, u: f64) -> f64 {
        self.value_and_derivative(u).1
    }
}

/// Mathieu solutions ordered as the bound states of the plane pendulum:
/// entry n is ce_n for even n and se_{n+1} for odd n, n = 0..=n_max.
/// Their characteristic values are ascending.
pub fn mathieu_eigensystem(q: f64, n_max: usize) -> Result<Vec<MathieuSolution>> {
    let n_even = n_max / 2 + 1;
    let n_odd = n_max.div_ceil(2);
    let mut evens = solve_family(Family::CosEven, q, n_even)?.into_iter();
    let mut odds = solve_family(Family::SinEven, q, n_odd)?.into_iter();
    let mut out = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let next = if n % 2 == 0 {
            evens.next()
        } else {
            odds.next()
        };
        out.push(next.expect("family sizes match"));
    }
    Ok(out)
}
