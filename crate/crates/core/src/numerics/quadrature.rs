//! Globally adaptive Gauss–Kronrod (7/15) quadrature, plus the
//! sin² substitution for integrands with inverse-square-root endpoint
//! singularities (turning-point integrals).

use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_panels: usize,
    /// Number of equal panels the interval is split into before adapting.
    pub initial_panels: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            abs_tol: 1e-15,
            max_panels: 4000,
            initial_panels: 1,
        }
    }
}

impl QuadOptions {
    pub fn with_panels(mut self, n: usize) -> Self {
        self.initial_panels = n.max(1);
        self
    }

    pub fn with_budget(mut self, n: usize) -> Self {
        self.max_panels = n;
        self
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub panels: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    Panel {
        a,
        b,
        value: k * h,
        error: ((k - g) * h).abs(),
    }
}

/// ∫ₐᵇ f by globally adaptive G7/K15 bisection.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, opts: QuadOptions) -> Result<QuadResult> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain(format!(
            "integration bounds must be finite: [{a}, {b}]"
        )));
    }
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            error: 0.0,
            panels: 0,
        });
    }
    let n0 = opts.initial_panels.max(1);
    let mut heap = BinaryHeap::with_capacity(opts.max_panels.max(n0) + 2);
    let width = (b - a) / n0 as f64;
    for i in 0..n0 {
        let lo = a + width * i as f64;
        let hi = if i + 1 == n0 {
            b
        } else {
            a + width * (i + 1) as f64
        };
        heap.push(kronrod15(&f, lo, hi));
    }
    loop {
        let (value, error) = heap
            .iter()
            .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error));
        if !value.is_finite() {
            return Err(Error::Domain(
                "integrand produced a non-finite value".into(),
            ));
        }
        if error <= opts.abs_tol.max(opts.rel_tol * value.abs()) {
            return Ok(QuadResult {
                value,
                error,
                panels: heap.len(),
            });
        }
        if heap.len() >= opts.max_panels {
            return Err(Error::Convergence {
                what: "adaptive quadrature".into(),
                residual: error,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Panel cannot be split further in f64.
            return Err(Error::Convergence {
                what: "adaptive quadrature (panel underflow)".into(),
                residual: error,
            });
        }
        heap.push(kronrod15(&f, worst.a, mid));
        heap.push(kronrod15(&f, mid, worst.b));
    }
}

/// ∫ₐᵇ f for integrands behaving like C/√(x−a) and/or C/√(b−x) at the
/// endpoints. The substitution x = a + (b−a) sin²θ turns both singularities
/// into smooth factors, leaving a regular integral over θ ∈ [0, π/2].
pub fn quad_inverse_sqrt<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> Result<f64> {
    quad_inverse_sqrt_with(
        f,
        a,
        b,
        QuadOptions {
            rel_tol: 1e-11,
            ..Default::default()
        },
    )
}

pub fn quad_inverse_sqrt_with<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    opts: QuadOptions,
) -> Result<f64> {
    if !(a < b) {
        return Err(Error::Domain(format!(
            "quad_inverse_sqrt requires a < b, got [{a}, {b}]"
        )));
    }
    let span = b - a;
    let g = |theta: f64| {
        let (s, c) = theta.sin_cos();
        if s == 0.0 || c == 0.0 {
            // Endpoint nodes are never sampled by K15, but guard anyway.
            return 0.0;
        }
        let x = a + span * s * s;
        f(x) * 2.0 * span * s * c
    };
    Ok(integrate(g, 0.0, std::f64::consts::FRAC_PI_2, opts)?.value)
}

/// n-point Gauss–Legendre nodes and weights on [−1, 1] (Newton on P_n).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 {
                1.0
            } else if n == 1 {
                z
            } else {
                p1
            };
            let pnm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * pn - pnm1) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn inverse_sqrt_unit() {
        let v = quad_inverse_sqrt(|x| 1.0 / x.sqrt(), 0.0, 1.0).unwrap();
        assert!((v - 2.0).abs() < 2e-9);
    }

    #[test]
    fn harmonic_half_period() {
        // √(m/2) ∫ dq / √(E − m ω² q²/2) over (−q₊, q₊) = π/ω (half period)
        let (m, w, e) = (1.3_f64, 2.1_f64, 0.7_f64);
        let qp = (2.0 * e / (m * w * w)).sqrt();
        let v = quad_inverse_sqrt(
            |q| (m / 2.0).sqrt() / (e - 0.5 * m * w * w * q * q).sqrt(),
            -qp,
            qp,
        )
        .unwrap();
        assert!((v - PI / w).abs() / (PI / w) < 1e-9);
    }

    #[test]
    fn one_sided_singularity() {
        // ∫₀¹ 1/√(1−x) dx = 2
        let v = quad_inverse_sqrt(|x| 1.0 / (1.0 - x).sqrt(), 0.0, 1.0).unwrap();
        assert!((v - 2.0).abs() < 2e-9);
    }

    #[test]
    fn doubling_budget_is_invariant() {
        let f = |x: f64| (1.0 + x).ln() / (x * (2.0 - x)).sqrt();
        let small = quad_inverse_sqrt_with(
            f,
            0.0,
            2.0,
            QuadOptions {
                max_panels: 200,
                ..Default::default()
            },
        )
        .unwrap();
        let large = quad_inverse_sqrt_with(
            f,
            0.0,
            2.0,
            QuadOptions {
                max_panels: 400,
                ..Default::default()
            },
        )
        .unwrap();
        assert!((small - large).abs() <= 1e-9 * large.abs());
    }

    #[test]
    fn nonconvergence_is_reported() {
        let r = integrate(
            |x: f64| (1.0 / x).sin() / x,
            1e-6,
            1.0,
            QuadOptions::default().with_budget(10),
        );
        assert!(matches!(r, Err(Error::Convergence { .. })));
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(12);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(22)).sum();
        assert!((s - 2.0 / 23.0).abs() < 1e-14);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn smooth_integral() {
        let r = integrate(|x: f64| x.cos(), 0.0, PI / 2.0, QuadOptions::default()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-14);
    }
}
