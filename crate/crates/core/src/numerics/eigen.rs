//! Hermitian matrices and largest-eigenpair solvers.
//!
//! Dimensions up to [`DENSE_LIMIT`] use a full dense decomposition; larger
//! problems (and matrix-free operators) use Lanczos with full
//! reorthogonalization and explicit restarts.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::tridiag::tridiagonal_eigen;
use crate::error::{Error, Result};

pub const DENSE_LIMIT: usize = 256;
const HERMITIAN_TOL: f64 = 1e-12;
const RESIDUAL_TOL: f64 = 1e-10;

/// A dense Hermitian matrix, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HermitianMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl HermitianMatrix {
    /// Validates the Hermitian invariants, then stores the exactly
    /// Hermitian part (A + A†)/2.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter(
                "matrix dimension must be positive".into(),
            ));
        }
        if entries.len() != dim * dim {
            return Err(Error::InvalidParameter(format!(
                "expected {} entries for dimension {dim}, got {}",
                dim * dim,
                entries.len()
            )));
        }
        let mut m = Self { dim, entries };
        for i in 0..dim {
            if !m.entries[i * dim + i].re.is_finite()
                || m.entries[i * dim + i].im.abs() >= HERMITIAN_TOL
            {
                return Err(Error::InvalidParameter(format!(
                    "diagonal entry {i} is not real"
                )));
            }
            m.entries[i * dim + i].im = 0.0;
            for j in 0..i {
                let a = m.entries[i * dim + j];
                let b = m.entries[j * dim + i].conj();
                if !(a.re.is_finite() && a.im.is_finite()) || (a - b).norm() > HERMITIAN_TOL {
                    return Err(Error::InvalidParameter(format!(
                        "entries ({i},{j}) and ({j},{i}) are not conjugate"
                    )));
                }
                let avg = 0.5 * (a + b);
                m.entries[i * dim + j] = avg;
                m.entries[j * dim + i] = avg.conj();
            }
        }
        Ok(m)
    }

    /// Builds from the upper triangle `f(i, j)`, j ≥ i; the diagonal's
    /// imaginary part is discarded.
    pub fn from_upper<F: FnMut(usize, usize) -> Complex64>(dim: usize, mut f: F) -> Self {
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Complex64::new(f(i, i).re, 0.0);
            for j in i + 1..dim {
                let v = f(i, j);
                entries[i * dim + j] = v;
                entries[j * dim + i] = v.conj();
            }
        }
        Self { dim, entries }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        Self::from_upper(diag.len(), |i, j| {
            Complex64::new(if i == j { diag[i] } else { 0.0 }, 0.0)
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z * s).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// ⟨v|M|v⟩ (real for Hermitian M).
    pub fn expectation(&self, v: &[Complex64]) -> f64 {
        let mut mv = vec![Complex64::new(0.0, 0.0); self.dim];
        self.apply(v, &mut mv);
        v.iter().zip(&mv).map(|(a, b)| (a.conj() * b).re).sum()
    }
}

/// A Hermitian linear map known only through its action.
pub trait HermitianOperator: Sync {
    fn dim(&self) -> usize;
    /// out ← M·x.
    fn apply(&self, x: &[Complex64], out: &mut [Complex64]);
}

impl HermitianOperator for HermitianMatrix {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, x: &[Complex64], out: &mut [Complex64]) {
        for (row, o) in self.entries.chunks_exact(self.dim).zip(out.iter_mut()) {
            *o = row.iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Eigenpair {
    pub value: f64,
    pub vector: Vec<Complex64>,
    /// ‖Mv − λv‖ achieved.
    pub residual: f64,
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn residual_of<O: HermitianOperator + ?Sized>(op: &O, v: &[Complex64], value: f64) -> f64 {
    let mut mv = vec![Complex64::new(0.0, 0.0); v.len()];
    op.apply(v, &mut mv);
    mv.iter()
        .zip(v)
        .map(|(a, b)| (a - b * value).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Fixes the global phase so the largest-magnitude component is real positive.
pub fn canonical_phase(v: &mut [Complex64]) {
    let Some(big) = v
        .iter()
        .copied()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
    else {
        return;
    };
    if big.norm() == 0.0 {
        return;
    }
    let phase = big.conj() / big.norm();
    v.iter_mut().for_each(|z| *z *= phase);
}

/// Largest eigenvalue and a unit eigenvector, with ‖Mv − λv‖ ≤ 1e-10‖M‖.
pub fn hermitian_max_eigenpair(m: &HermitianMatrix) -> Result<Eigenpair> {
    if m.dim <= DENSE_LIMIT {
        dense_max_eigenpair(m)
    } else {
        lanczos_max_eigenpair(m, &LanczosOptions::default())
    }
}

/// All eigenvalues, ascending, by dense decomposition.
pub fn hermitian_eigenvalues(m: &HermitianMatrix) -> Vec<f64> {
    let a = DMatrix::from_row_slice(m.dim, m.dim, &m.entries);
    let mut vals: Vec<f64> = a.symmetric_eigenvalues().iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    vals
}

fn dense_max_eigenpair(m: &HermitianMatrix) -> Result<Eigenpair> {
    let a = DMatrix::from_row_slice(m.dim, m.dim, &m.entries);
    let eig = a.symmetric_eigen();
    let (k, &value) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("dimension is positive");
    let mut vector: Vec<Complex64> = eig.eigenvectors.column(k).iter().copied().collect();
    let nv = norm(&vector);
    vector.iter_mut().for_each(|z| *z /= nv);
    canonical_phase(&mut vector);
    let scale = eig.eigenvalues.iter().fold(0.0_f64, |s, v| s.max(v.abs()));
    let residual = residual_of(m, &vector, value);
    if residual > RESIDUAL_TOL * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::Convergence {
            what: "dense Hermitian eigensolver".into(),
            residual,
        });
    }
    Ok(Eigenpair {
        value,
        vector,
        residual,
    })
}

#[derive(Debug, Clone)]
pub struct LanczosOptions {
    /// Krylov dimension per restart cycle.
    pub krylov_dim: usize,
    pub max_restarts: usize,
    /// Relative residual target, ‖Mv − λv‖ ≤ tol·‖M‖.
    pub tol: f64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self {
            krylov_dim: 160,
            max_restarts: 60,
            tol: RESIDUAL_TOL,
        }
    }
}

// Deterministic start vector with no special symmetry.
fn start_vector(n: usize) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = (0..n)
        .map(|i| {
            let x = i as f64;
            Complex64::new(
                1.0 + 0.5 * (1.7 * x + 0.3).sin(),
                0.3 * (2.3 * x + 1.1).cos(),
            )
        })
        .collect();
    let nv = norm(&v);
    v.iter_mut().for_each(|z| *z /= nv);
    v
}

/// Largest eigenpair of a Hermitian operator by restarted Lanczos with full
/// reorthogonalization. The operator norm used in the stopping rule is
/// estimated from the extreme Ritz values.
pub fn lanczos_max_eigenpair<O: HermitianOperator + ?Sized>(
    op: &O,
    opts: &LanczosOptions,
) -> Result<Eigenpair> {
    let n = op.dim();
    if n == 0 {
        return Err(Error::InvalidParameter(
            "operator dimension must be positive".into(),
        ));
    }
    let k_max = opts.krylov_dim.min(n).max(1);
    let mut start = start_vector(n);
    let mut norm_est = 0.0_f64;
    let mut last_residual = f64::INFINITY;
    let zero = Complex64::new(0.0, 0.0);

    for _ in 0..opts.max_restarts.max(1) {
        let mut basis: Vec<Vec<Complex64>> = vec![start.clone()];
        let mut alphas = Vec::with_capacity(k_max);
        let mut betas: Vec<f64> = Vec::with_capacity(k_max);
        let mut w = vec![zero; n];
        for j in 0..k_max {
            op.apply(&basis[j], &mut w);
            let a = dot(&basis[j], &w).re;
            alphas.push(a);
            // two passes of classical Gram–Schmidt against the whole basis
            for _ in 0..2 {
                for b in &basis {
                    let c = dot(b, &w);
                    w.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
                }
            }
            let beta = norm(&w);
            if j + 1 == k_max || beta <= 1e-14 * norm_est.max(a.abs()).max(f64::MIN_POSITIVE) {
                break;
            }
            betas.push(beta);
            basis.push(w.iter().map(|z| z / beta).collect());
        }
        let k = alphas.len();
        let (vals, vecs) = tridiagonal_eigen(&alphas, &betas[..k - 1])?;
        norm_est = norm_est.max(vals[0].abs()).max(vals[k - 1].abs());
        let value = vals[k - 1];
        let mut ritz = vec![zero; n];
        for (i, b) in basis.iter().enumerate() {
            let s = vecs[i * k + (k - 1)];
            ritz.iter_mut().zip(b).for_each(|(r, x)| *r += x * s);
        }
        let nr = norm(&ritz);
        ritz.iter_mut().for_each(|z| *z /= nr);
        let residual = residual_of(op, &ritz, value);
        last_residual = residual;
        if residual <= opts.tol * norm_est.max(f64::MIN_POSITIVE) {
            canonical_phase(&mut ritz);
            return Ok(Eigenpair {
                value,
                vector: ritz,
                residual,
            });
        }
        start = ritz;
    }
    Err(Error::Convergence {
        what: "Lanczos largest eigenpair".into(),
        residual: last_residual,
    })
}
