//! The matrix ⟨Eₙ|sgn(Q)|Eₙ′⟩ on a set of retained levels.
//!
//! Off-diagonal elements follow from the Wronskian W = ψₙψₘ′ − ψₙ′ψₘ:
//! ∫ₐᵇ ψₙψₘ = [W(b) − W(a)] / 2μ(Eₙ − Eₘ), so the sign-weighted overlap only
//! needs wavefunction data at the origin and at the domain edges.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::eigenfunction::{level_is_even, Eigenbasis};
use super::morse::morse_diag;
use crate::classical::ModelSystem;
use crate::error::{Error, Result};
use crate::numerics::mathieu::MathieuSolution;
use crate::numerics::quadrature::{integrate, QuadOptions};

/// Real symmetric sign matrix. Parity-even models only couple levels of
/// opposite parity, so only the even × odd block is stored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SgnMatrix {
    Dense {
        dim: usize,
        entries: Vec<f64>,
    },
    Bipartite {
        dim: usize,
        /// Slice positions of the even (resp. odd) levels.
        even: Vec<usize>,
        odd: Vec<usize>,
        /// block[i·odd.len() + j] = S[even[i], odd[j]].
        block: Vec<f64>,
    },
}

impl SgnMatrix {
    pub fn zeros(dim: usize) -> Self {
        SgnMatrix::Dense {
            dim,
            entries: vec![0.0; dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            SgnMatrix::Dense { dim, .. } | SgnMatrix::Bipartite { dim, .. } => *dim,
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        match self {
            SgnMatrix::Dense { dim, entries } => entries[i * dim + j],
            SgnMatrix::Bipartite {
                even, odd, block, ..
            } => {
                let find = |v: &[usize], x: usize| v.binary_search(&x).ok();
                match (find(even, i), find(odd, j), find(odd, i), find(even, j)) {
                    (Some(a), Some(b), _, _) | (_, _, Some(b), Some(a)) => block[a * odd.len() + b],
                    _ => 0.0,
                }
            }
        }
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<f64> {
        match self {
            SgnMatrix::Dense { entries, .. } => entries.clone(),
            SgnMatrix::Bipartite {
                dim,
                even,
                odd,
                block,
            } => {
                let mut out = vec![0.0; dim * dim];
                for (a, &i) in even.iter().enumerate() {
                    for (b, &j) in odd.iter().enumerate() {
                        let v = block[a * odd.len() + b];
                        out[i * dim + j] = v;
                        out[j * dim + i] = v;
                    }
                }
                out
            }
        }
    }

    /// out = S·x.
    pub fn apply(&self, x: &[Complex64], out: &mut [Complex64]) {
        match self {
            SgnMatrix::Dense { dim, entries } => {
                out.par_iter_mut().enumerate().for_each(|(i, o)| {
                    let row = &entries[i * dim..(i + 1) * dim];
                    *o = row.iter().zip(x).map(|(s, v)| v * *s).sum();
                });
            }
            SgnMatrix::Bipartite {
                even, odd, block, ..
            } => {
                let no = odd.len();
                let xo: Vec<Complex64> = odd.iter().map(|&j| x[j]).collect();
                let xe: Vec<Complex64> = even.iter().map(|&i| x[i]).collect();
                let from_odd: Vec<Complex64> = (0..even.len())
                    .into_par_iter()
                    .map(|a| {
                        let row = &block[a * no..(a + 1) * no];
                        row.iter().zip(&xo).map(|(s, v)| v * *s).sum()
                    })
                    .collect();
                // Transposed product: column chunks keep row reads contiguous.
                const CHUNK: usize = 64;
                let mut from_even = vec![Complex64::default(); no];
                from_even
                    .par_chunks_mut(CHUNK)
                    .enumerate()
                    .for_each(|(c, acc)| {
                        let start = c * CHUNK;
                        for (a, v) in xe.iter().enumerate() {
                            let row = &block[a * no + start..a * no + start + acc.len()];
                            for (o, s) in acc.iter_mut().zip(row) {
                                *o += v * *s;
                            }
                        }
                    });
                out.iter_mut().for_each(|o| *o = Complex64::default());
                for (a, &i) in even.iter().enumerate() {
                    out[i] = from_odd[a];
                }
                for (b, &j) in odd.iter().enumerate() {
                    out[j] = from_even[b];
                }
            }
        }
    }

    /// max |Sᵢⱼ − Sⱼᵢ|.
    pub fn asymmetry(&self) -> f64 {
        match self {
            SgnMatrix::Dense { dim, entries } => (0..*dim)
                .flat_map(|i| (0..*dim).map(move |j| (i, j)))
                .map(|(i, j)| (entries[i * dim + j] - entries[j * dim + i]).abs())
                .fold(0.0, f64::max),
            SgnMatrix::Bipartite { .. } => 0.0,
        }
    }
}

/// Magnitude table for ⟨a|sgn(q)|b⟩ of the harmonic oscillator.
struct HarmonicTable {
    // √c_k with c_0 = 1, c_k = c_{k−2}(k−1)/k (central binomial / 2^k).
    root_c: Vec<f64>,
}

impl HarmonicTable {
    fn new(max: usize) -> Self {
        let mut c = vec![1.0; max + 1];
        for k in (2..=max).step_by(2) {
            c[k] = c[k - 2] * (k as f64 - 1.0) / k as f64;
        }
        Self {
            root_c: c.iter().map(|v| v.sqrt()).collect(),
        }
    }

    /// a even, b odd.
    fn element(&self, a: usize, b: usize) -> f64 {
        let sign = if a < b {
            if ((b - a - 1) / 2).is_multiple_of(2) {
                1.0
            } else {
                -1.0
            }
        } else if (a - b).div_ceil(2).is_multiple_of(2) {
            -1.0
        } else {
            1.0
        };
        let diff = b as f64 - a as f64;
        sign * (2.0 * b as f64 / PI).sqrt() * self.root_c[a] * self.root_c[b - 1] / diff.abs()
    }
}

/// Below this relative level spacing the pendulum Wronskian loses digits to
/// cancellation and the Fourier-series form is used instead.
pub const PENDULUM_GAP_FRACTION: f64 = 1e-4;

/// Closed-form sign element of the infinite well (n odd/even mixed).
fn well_element(n: usize, m: usize) -> f64 {
    if (n + m).is_multiple_of(2) {
        return 0.0;
    }
    let (nf, mf) = (n as f64, m as f64);
    let sgn = if n % 2 == 1 { -1.0 } else { 1.0 };
    (2.0 / PI) * (1.0 / (nf + mf) + sgn / (nf - mf))
}

/// Wavefunction data needed by the Wronskian formula.
struct EdgeData {
    energy: f64,
    origin: (f64, f64),
    edge: (f64, f64),
}

fn wronskian(u: (f64, f64), v: (f64, f64)) -> f64 {
    u.0 * v.1 - u.1 * v.0
}

/// Pendulum element from the Fourier series of the two Mathieu functions.
/// `even` carries cos(jφ) terms and `odd` sin(lφ) terms, φ = 2u.
pub fn pendulum_fourier_element(even: &MathieuSolution, odd: &MathieuSolution) -> f64 {
    let mut sum = 0.0;
    for (a, &hj) in even.coefficients.iter().zip(&even.harmonics) {
        let j = (hj / 2) as f64;
        for (b, &hl) in odd.coefficients.iter().zip(&odd.harmonics) {
            // ∫₀^π cos(jφ) sin(lφ) dφ vanishes unless l + j is odd.
            if (hj / 2 + hl / 2) % 2 == 1 {
                let l = (hl / 2) as f64;
                sum += a * b * 2.0 * l / (l * l - j * j);
            }
        }
    }
    2.0 * sum / PI
}

fn pendulum_element(
    basis: &Eigenbasis,
    data: (&EdgeData, &EdgeData),
    n: usize,
    m: usize,
) -> Result<f64> {
    let (dn, dm) = data;
    let scale = dn
        .energy
        .abs()
        .max(dm.energy.abs())
        .max(basis.model().reduced_mass().recip());
    if (dn.energy - dm.energy).abs() > PENDULUM_GAP_FRACTION * scale {
        return Ok(wronskian_element(basis.model(), dn, dm));
    }
    let (e, o) = if n.is_multiple_of(2) { (n, m) } else { (m, n) };
    let get = |k: usize| {
        basis
            .mathieu(k)
            .ok_or_else(|| Error::InvalidParameter(format!("level {k} outside the pendulum basis")))
    };
    Ok(pendulum_fourier_element(get(e)?, get(o)?))
}

/// Closed-form element ⟨n|sgn(Q)|m⟩ for a model.
pub fn sgn_element(basis: &Eigenbasis, n: usize, m: usize) -> Result<f64> {
    let model = *basis.model();
    if let (Some(a), Some(b)) = (level_is_even(&model, n), level_is_even(&model, m)) {
        if a == b {
            return Ok(0.0);
        }
    }
    match model {
        ModelSystem::Harmonic | ModelSystem::Kerr { .. } => {
            let (a, b) = if n.is_multiple_of(2) { (n, m) } else { (m, n) };
            Ok(HarmonicTable::new(a.max(b)).element(a, b))
        }
        ModelSystem::InfiniteWell => Ok(well_element(n, m)),
        ModelSystem::Morse { lambda } if n == m => morse_diag(n, lambda),
        ModelSystem::Pendulum { .. } => {
            let dn = edge_data(basis, n)?;
            let dm = edge_data(basis, m)?;
            pendulum_element(basis, (&dn, &dm), n, m)
        }
        _ => {
            let dn = edge_data(basis, n)?;
            let dm = edge_data(basis, m)?;
            Ok(wronskian_element(&model, &dn, &dm))
        }
    }
}

fn edge_data(basis: &Eigenbasis, n: usize) -> Result<EdgeData> {
    let edge = match basis.model() {
        ModelSystem::Pendulum { .. } => basis.eval(n, PI)?,
        _ => (0.0, 0.0),
    };
    Ok(EdgeData {
        energy: basis.energy(n)?,
        origin: basis.eval(n, 0.0)?,
        edge,
    })
}

// Pendulum: W(π) = W(−π) by periodicity; Morse: W vanishes at both ends.
fn wronskian_element(model: &ModelSystem, dn: &EdgeData, dm: &EdgeData) -> f64 {
    let two_mu_de = 2.0 * model.reduced_mass() * (dn.energy - dm.energy);
    let w0 = wronskian(dn.origin, dm.origin);
    let w_edge = wronskian(dn.edge, dm.edge);
    (2.0 * w_edge - 2.0 * w0) / two_mu_de
}

/// S on the levels `indices` (ascending) of the basis.
pub fn sgn_matrix(basis: &Eigenbasis, indices: &[usize]) -> Result<SgnMatrix> {
    let model = *basis.model();
    let dim = indices.len();
    if !indices.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidParameter(
            "level indices must be strictly increasing".into(),
        ));
    }
    if model.is_parity_even() {
        let (even, odd): (Vec<usize>, Vec<usize>) =
            (0..dim).partition(|&i| level_is_even(&model, indices[i]).unwrap_or(false));
        let no = odd.len();
        let mut block = vec![0.0; even.len() * no];
        match model {
            ModelSystem::Harmonic | ModelSystem::Kerr { .. } => {
                let table = HarmonicTable::new(indices.last().copied().unwrap_or(0));
                fill_block(&mut block, no, |a, b| {
                    Ok(table.element(indices[even[a]], indices[odd[b]]))
                })?;
            }
            ModelSystem::InfiniteWell => {
                fill_block(&mut block, no, |a, b| {
                    Ok(well_element(indices[even[a]], indices[odd[b]]))
                })?;
            }
            _ => {
                let data = indices
                    .iter()
                    .map(|&n| edge_data(basis, n))
                    .collect::<Result<Vec<_>>>()?;
                fill_block(&mut block, no, |a, b| {
                    let (i, j) = (even[a], odd[b]);
                    pendulum_element(basis, (&data[i], &data[j]), indices[i], indices[j])
                })?;
            }
        }
        return Ok(SgnMatrix::Bipartite {
            dim,
            even,
            odd,
            block,
        });
    }
    // Morse: no parity selection rule.
    let lambda = model.lambda().expect("Morse is the only parity-odd model");
    let data = indices
        .iter()
        .map(|&n| edge_data(basis, n))
        .collect::<Result<Vec<_>>>()?;
    let diag = indices
        .par_iter()
        .map(|&n| morse_diag(n, lambda))
        .collect::<Result<Vec<_>>>()?;
    let mut entries = vec![0.0; dim * dim];
    entries
        .par_chunks_mut(dim.max(1))
        .enumerate()
        .for_each(|(i, row)| {
            for (j, e) in row.iter_mut().enumerate() {
                *e = if i == j {
                    diag[i]
                } else {
                    wronskian_element(&model, &data[i], &data[j])
                };
            }
        });
    // Enforce exact symmetry from the upper triangle.
    for i in 0..dim {
        for j in 0..i {
            entries[i * dim + j] = entries[j * dim + i];
        }
    }
    Ok(SgnMatrix::Dense { dim, entries })
}

fn fill_block<F>(block: &mut [f64], cols: usize, f: F) -> Result<()>
where
    F: Fn(usize, usize) -> Result<f64> + Sync,
{
    if cols == 0 {
        return Ok(());
    }
    block
        .par_chunks_mut(cols)
        .enumerate()
        .try_for_each(|(a, row)| {
            for (b, e) in row.iter_mut().enumerate() {
                *e = f(a, b)?;
            }
            Ok(())
        })
}

/// Direct quadrature ∫ sgn(q) ψₙ ψₘ dq (independent of the closed forms).
pub fn sgn_element_quadrature(basis: &Eigenbasis, n: usize, m: usize) -> Result<f64> {
    let model = *basis.model();
    let top = n.max(m) as f64;
    let (lo, hi) = match model {
        ModelSystem::Harmonic | ModelSystem::Kerr { .. } => {
            let r = (2.0 * top + 1.0).sqrt() + 14.0;
            (-r, r)
        }
        ModelSystem::Morse { lambda } => {
            // Left tail decays as e^{s x} with s = λ − n − 1/2.
            let s = lambda - top - 0.5;
            let z_max = 2.0 * lambda + 80.0 + 16.0 * (2.0 * lambda).sqrt() + 4.0 * top;
            (
                (-40.0 / s).max(-2000.0) - (2.0 * lambda).ln(),
                (z_max / (2.0 * lambda)).ln(),
            )
        }
        _ => model.configuration_domain(),
    };
    let opts = QuadOptions {
        rel_tol: 1e-13,
        abs_tol: 1e-15,
        ..QuadOptions::default()
            .with_panels(16 + 2 * top as usize)
            .with_budget(200_000)
    };
    let f = |q: f64| {
        basis.eval(n, q).map(|v| v.0).unwrap_or(0.0) * basis.eval(m, q).map(|v| v.0).unwrap_or(0.0)
    };
    let left = integrate(f, lo, 0.0, opts)?.value;
    let right = integrate(f, 0.0, hi, opts)?.value;
    Ok(right - left)
}
