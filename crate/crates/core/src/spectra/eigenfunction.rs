//! Real-gauge energy eigenfunctions ψₙ(q) and their derivatives.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::levels::{closed_form_energy, first_index, last_index, pendulum_solutions};
use crate::classical::ModelSystem;
use crate::error::{Error, Result};
use crate::numerics::gamma::ln_gamma;
use crate::numerics::laguerre::laguerre;
use crate::numerics::mathieu::MathieuSolution;

const DOMAIN_SLACK: f64 = 1e-12;

/// Values of one eigenfunction at a set of positions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenfunctionSample {
    pub n: usize,
    /// (q, ψₙ(q), ψₙ′(q)).
    pub points: Vec<(f64, f64, f64)>,
}

/// Eigenfunctions of one model up to a maximum level. For the pendulum
/// this holds the Mathieu solutions; every other model is closed form.
#[derive(Debug, Clone)]
pub struct Eigenbasis {
    model: ModelSystem,
    mathieu: Vec<MathieuSolution>,
}

impl Eigenbasis {
    pub fn new(model: ModelSystem, max_index: usize) -> Result<Self> {
        model.validate()?;
        if let Some(last) = last_index(&model) {
            if matches!(model, ModelSystem::Morse { .. }) && max_index > last {
                return Err(Error::Domain(format!(
                    "{model} has no bound level {max_index}"
                )));
            }
        }
        let mathieu = match model {
            ModelSystem::Pendulum { alpha } => pendulum_solutions(alpha, max_index)?,
            _ => Vec::new(),
        };
        Ok(Self { model, mathieu })
    }

    pub fn model(&self) -> &ModelSystem {
        &self.model
    }

    fn check_index(&self, n: usize) -> Result<()> {
        if n < first_index(&self.model) {
            return Err(Error::Domain(format!("{} has no level {n}", self.model)));
        }
        if self.model.is_angular() && n >= self.mathieu.len() {
            return Err(Error::InsufficientSlice(n));
        }
        if matches!(self.model, ModelSystem::Morse { .. })
            && last_index(&self.model).is_some_and(|l| n > l)
        {
            return Err(Error::Domain(format!(
                "{} has no bound level {n}",
                self.model
            )));
        }
        Ok(())
    }

    pub fn energy(&self, n: usize) -> Result<f64> {
        self.check_index(n)?;
        match self.model {
            ModelSystem::Pendulum { alpha } => Ok(alpha.abs() * self.mathieu[n].characteristic),
            _ => closed_form_energy(&self.model, n),
        }
    }

    /// Mathieu solution of pendulum level n (in u = φ/2).
    pub fn mathieu(&self, n: usize) -> Option<&MathieuSolution> {
        self.mathieu.get(n)
    }

    /// (ψₙ(q), dψₙ/dq).
    pub fn eval(&self, n: usize, q: f64) -> Result<(f64, f64)> {
        self.check_index(n)?;
        let (lo, hi) = self.model.configuration_domain();
        if !(q >= lo - DOMAIN_SLACK && q <= hi + DOMAIN_SLACK) {
            return Err(Error::Domain(format!(
                "q = {q} outside [{lo}, {hi}] for {}",
                self.model
            )));
        }
        Ok(match self.model {
            ModelSystem::Harmonic | ModelSystem::Kerr { .. } => hermite_function(n, q),
            ModelSystem::Morse { lambda } => morse_function(lambda, n, q),
            ModelSystem::InfiniteWell => well_function(n, q),
            ModelSystem::Pendulum { .. } => {
                let (y, dy) = self.mathieu[n].value_and_derivative(0.5 * q);
                let norm = PI.sqrt();
                (y / norm, 0.5 * dy / norm)
            }
        })
    }

    pub fn sample(&self, n: usize, positions: &[f64]) -> Result<EigenfunctionSample> {
        let points = positions
            .iter()
            .map(|&q| self.eval(n, q).map(|(v, d)| (q, v, d)))
            .collect::<Result<_>>()?;
        Ok(EigenfunctionSample { n, points })
    }
}

/// (ψₙ(q), ψₙ′(q)) for a single level.
pub fn eigenfunction(model: &ModelSystem, n: usize, q: f64) -> Result<(f64, f64)> {
    Eigenbasis::new(*model, n)?.eval(n, q)
}

/// Hermite functions by the normalized three-term recurrence, with the
/// Gaussian factor carried as a separate logarithm so that large n and
/// large |q| neither overflow nor underflow.
pub fn hermite_function(n: usize, q: f64) -> (f64, f64) {
    let mut log_scale = -0.25 * PI.ln() - 0.5 * q * q;
    let (mut prev, mut cur) = (0.0_f64, 1.0_f64);
    for k in 0..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * q * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        let m = cur.abs();
        if m > 1e150 {
            prev /= m;
            cur /= m;
            log_scale += m.ln();
        }
    }
    let scale = log_scale.exp();
    let value = cur * scale;
    let derivative = ((2.0 * n as f64).sqrt() * prev - q * cur) * scale;
    (value, derivative)
}

/// Morse bound state n in x = ln of the stretched coordinate, with
/// z = 2λeˣ, a = 2λ − 2n − 1:
/// ψ = N z^{a/2} e^{−z/2} Lₙ^{(a)}(z), N² = n!·a/Γ(2λ − n).
pub fn morse_function(lambda: f64, n: usize, x: f64) -> (f64, f64) {
    let nf = n as f64;
    let a = 2.0 * lambda - 2.0 * nf - 1.0;
    let s = 0.5 * a;
    let z = 2.0 * lambda * x.exp();
    let ln_norm = 0.5 * (ln_gamma(nf + 1.0) + a.ln() - ln_gamma(2.0 * lambda - nf));
    let ln_pre = ln_norm + s * ((2.0 * lambda).ln() + x) - 0.5 * z;
    if ln_pre < -745.0 {
        return (0.0, 0.0);
    }
    let pre = ln_pre.exp();
    let l_n = laguerre(n, a, z);
    let value = pre * l_n;
    let lower = if n == 0 { 0.0 } else { laguerre(n - 1, a, z) };
    let derivative = (s - 0.5 * z + nf) * value - pre * (nf + a) * lower;
    (value, derivative)
}

/// Infinite well of unit width centred at the origin.
pub fn well_function(n: usize, x: f64) -> (f64, f64) {
    let k = n as f64 * PI;
    let (s, c) = (k * x).sin_cos();
    let r = std::f64::consts::SQRT_2;
    if n % 2 == 1 {
        (r * c, -r * k * s)
    } else {
        (r * s, r * k * c)
    }
}

/// Whether level n is an even function of q (None for Morse).
pub fn level_is_even(model: &ModelSystem, n: usize) -> Option<bool> {
    match model {
        ModelSystem::Morse { .. } => None,
        ModelSystem::InfiniteWell => Some(n % 2 == 1),
        _ => Some(n.is_multiple_of(2)),
    }
}
