//! Complete elliptic integral of the first kind and its inverse.
//!
//! K(m) = ∫₀^{π/2} du / √(1 − m sin²u), parameter convention m = k².

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

const AGM_MAX_ITER: usize = 64;

/// K(m) for m < 1 via the arithmetic-geometric mean, K(m) = π / (2 AGM(1, √(1−m))).
pub fn elliptic_k(m: f64) -> Result<f64> {
    if !m.is_finite() || m >= 1.0 {
        return Err(Error::Domain(format!("elliptic_K requires m < 1, got {m}")));
    }
    if m == 0.0 {
        return Ok(FRAC_PI_2);
    }
    let mut a = 1.0_f64;
    let mut b = (1.0 - m).sqrt();
    for _ in 0..AGM_MAX_ITER {
        let a_next = 0.5 * (a + b);
        let b_next = (a * b).sqrt();
        if (a_next - b_next).abs() <= 4.0 * f64::EPSILON * a_next {
            return Ok(std::f64::consts::PI / (2.0 * a_next));
        }
        a = a_next;
        b = b_next;
    }
    Ok(std::f64::consts::PI / (a + b))
}

/// Inverse of K on [0, 1): the m with K(m) = k, for k ≥ π/2.
///
/// K is strictly increasing on [0, 1), so plain bisection on a bracket is
/// enough; it terminates once the bracket can no longer be split in f64.
pub fn elliptic_k_inverse(k: f64) -> Result<f64> {
    if !k.is_finite() || k < FRAC_PI_2 {
        return Err(Error::Domain(format!(
            "elliptic_K_inverse requires k >= pi/2, got {k}"
        )));
    }
    if k == FRAC_PI_2 {
        return Ok(0.0);
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if elliptic_k(mid)? < k {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // hi may equal 1.0, which is outside the domain.
    let m = if hi < 1.0 { hi } else { lo };
    let residual = (elliptic_k(m)? - k).abs();
    let alt = (elliptic_k(lo)? - k).abs();
    let (m, residual) = if alt < residual {
        (lo, alt)
    } else {
        (m, residual)
    };
    if residual > 1e-10 {
        return Err(Error::Convergence {
            what: "elliptic_K_inverse".into(),
            residual,
        });
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: composite Simpson on the defining integral.
    fn k_simpson(m: f64) -> f64 {
        let n = 20_000;
        let h = FRAC_PI_2 / n as f64;
        let f = |u: f64| 1.0 / (1.0 - m * u.sin().powi(2)).sqrt();
        let mut s = f(0.0) + f(FRAC_PI_2);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(i as f64 * h);
        }
        s * h / 3.0
    }

    #[test]
    fn k_at_zero_is_half_pi() {
        assert_eq!(elliptic_k(0.0).unwrap(), FRAC_PI_2);
    }

    #[test]
    fn k_half_matches_quadrature() {
        // Frozen from the Simpson oracle below (agrees with the AGM closed form
        // Γ(1/4)²/(4√π) = 1.854074677301372).
        let expected = 1.854_074_677_301_372;
        assert!((k_simpson(0.5) - expected).abs() < 1e-12);
        let k = elliptic_k(0.5).unwrap();
        assert!((k - expected).abs() / expected < 1e-12);
    }

    #[test]
    fn k_domain_error_at_one() {
        assert!(matches!(elliptic_k(1.0), Err(Error::Domain(_))));
        assert!(elliptic_k(1.5).is_err());
    }

    #[test]
    fn negative_parameter_is_allowed() {
        let k = elliptic_k(-0.7).unwrap();
        assert!((k - k_simpson(-0.7)).abs() < 1e-12);
    }

    #[test]
    fn inverse_endpoints_and_errors() {
        assert_eq!(elliptic_k_inverse(FRAC_PI_2).unwrap(), 0.0);
        assert!(matches!(elliptic_k_inverse(1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn inverse_of_two() {
        let m = elliptic_k_inverse(2.0).unwrap();
        assert!((elliptic_k(m).unwrap() - 2.0).abs() <= 1e-10);
        // independent bisection against the quadrature oracle
        let (mut lo, mut hi) = (0.0, 0.99);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if k_simpson(mid) < 2.0 {
                lo = mid
            } else {
                hi = mid
            }
        }
        assert!((m - 0.5 * (lo + hi)).abs() < 1e-9);
    }

    proptest::proptest! {
        #[test]
        fn k_strictly_increasing(m1 in 0.0f64..0.999, dm in 1e-6f64..0.5) {
            let m2 = (m1 + dm).min(0.999_999);
            proptest::prop_assume!(m2 > m1);
            proptest::prop_assert!(elliptic_k(m1).unwrap() < elliptic_k(m2).unwrap());
        }

        #[test]
        fn inverse_round_trip(m in 0.0f64..0.999) {
            let back = elliptic_k_inverse(elliptic_k(m).unwrap()).unwrap();
            proptest::prop_assert!((back - m).abs() < 1e-9);
        }
    }
}
