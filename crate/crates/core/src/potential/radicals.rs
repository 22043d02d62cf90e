//! Radical solutions of the master equation for `m = 2` and `m = 3`.
//!
//! All functions take `f = (m+1)(Cρ + C0)`:
//!
//! * `m = 2`: `V³ + (3/2)σ₁V² + 3σ₂V − f = 0`
//! * `m = 3`: `V⁴ + (4/3)σ₁V³ + 2σ₂V² + 4σ₃V − f = 0`

use nalgebra::Complex;

use crate::error::{Error, Result};

fn cbrt_two() -> f64 {
    2f64.cbrt()
}

/// Cardano's formula for the `CP¹ × CP¹` cubic with eigenvalues `b1, b2`.
pub fn cardano_v(b1: f64, b2: f64, f: f64) -> Result<f64> {
    cardano_sigma(b1 + b2, b1 * b2, f)
}

/// Cardano's formula in terms of `σ₁, σ₂`.
///
/// With `Δ₀ = (9/4)σ₁² − 9σ₂`, `Δ₁ = (27/4)σ₁³ − (81/2)σ₁σ₂ − 27f` and
/// `S = −Δ₁ + √(Δ₁² − 4Δ₀³)`,
///
/// ```text
/// V = −σ₁/2 + S^{1/3} / (3·2^{1/3}) + 2^{1/3} Δ₀ S^{−1/3} / 3.
/// ```
///
/// When the discriminant is negative (three real roots, possible for small
/// `f` if one eigenvalue is more than three times the other) the same
/// expression is evaluated with complex cube roots and the largest real root
/// is returned.
pub fn cardano_sigma(s1: f64, s2: f64, f: f64) -> Result<f64> {
    let delta0 = 2.25 * s1 * s1 - 9.0 * s2;
    let delta1 = 6.75 * s1 * s1 * s1 - 40.5 * s1 * s2 - 27.0 * f;
    let disc = delta1 * delta1 - 4.0 * delta0 * delta0 * delta0;
    let k = cbrt_two();
    let v = if disc >= 0.0 {
        let root = disc.sqrt();
        let mut s = -delta1 + root;
        if s == 0.0 {
            s = -delta1 - root;
        }
        if s == 0.0 {
            // Δ₀ = Δ₁ = 0: triple root.
            -0.5 * s1
        } else {
            let cs = s.cbrt();
            let mut v = -0.5 * s1 + cs / (3.0 * k);
            if delta0 != 0.0 {
                v += k * delta0 / (3.0 * cs);
            }
            v
        }
    } else {
        let s = Complex::new(-delta1, (-disc).sqrt());
        let cs = s.powf(1.0 / 3.0);
        (0..3)
            .map(|j| {
                let rot = Complex::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / 3.0);
                let c = cs * rot;
                (c / (3.0 * k) + c.inv() * (k * delta0 / 3.0)).re - 0.5 * s1
            })
            .fold(f64::NEG_INFINITY, f64::max)
    };
    if !(v > 0.0) {
        return Err(Error::InsufficientC0(v));
    }
    Ok(v)
}

/// Real roots of `a x³ + b x² + c x + d`, ascending, each polished by two
/// Newton steps.
pub fn real_cubic_roots(a: f64, b: f64, c: f64, d: f64) -> Vec<f64> {
    assert!(a != 0.0, "leading coefficient must be nonzero");
    let delta0 = b * b - 3.0 * a * c;
    let delta1 = 2.0 * b * b * b - 9.0 * a * b * c + 27.0 * a * a * d;
    let disc = delta1 * delta1 - 4.0 * delta0 * delta0 * delta0;
    let mut roots = if delta0 == 0.0 && delta1 == 0.0 {
        vec![-b / (3.0 * a)]
    } else if disc > 0.0 {
        let root = disc.sqrt();
        // Pick the sign that avoids cancellation.
        let s = if delta1 >= 0.0 {
            delta1 + root
        } else {
            delta1 - root
        };
        let cc = (0.5 * s).cbrt();
        vec![-(b + cc + delta0 / cc) / (3.0 * a)]
    } else if disc == 0.0 {
        vec![
            (9.0 * a * d - b * c) / (2.0 * delta0),
            (4.0 * a * b * c - 9.0 * a * a * d - b * b * b) / (a * delta0),
        ]
    } else {
        let cs = (Complex::new(delta1, (-disc).sqrt()) * 0.5).powf(1.0 / 3.0);
        (0..3)
            .map(|j| {
                let rot = Complex::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / 3.0);
                let cc = cs * rot;
                (-(cc + cc.inv() * delta0 + b) / (3.0 * a)).re
            })
            .collect()
    };
    for x in roots.iter_mut() {
        for _ in 0..2 {
            let p = ((a * *x + b) * *x + c) * *x + d;
            let dp = (3.0 * a * *x + 2.0 * b) * *x + c;
            if dp != 0.0 {
                let next = *x - p / dp;
                if next.is_finite() {
                    *x = next;
                }
            }
        }
    }
    roots.sort_by(f64::total_cmp);
    roots
}

/// Coefficients of the depressed quartic `x⁴ + p x² + q x + r` obtained
/// from the `m = 3` master quartic by `V = x − σ₁/3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DepressedQuartic {
    pub p: f64,
    pub q: f64,
    pub r: f64,
}

pub fn depressed_quartic(s1: f64, s2: f64, s3: f64, f: f64) -> DepressedQuartic {
    let s1_2 = s1 * s1;
    DepressedQuartic {
        p: 2.0 * s2 - 2.0 / 3.0 * s1_2,
        q: 8.0 / 27.0 * s1_2 * s1 - 4.0 / 3.0 * s1 * s2 + 4.0 * s3,
        r: -s1_2 * s1_2 / 27.0 - f - 4.0 / 3.0 * s1 * s3 + 2.0 / 9.0 * s1_2 * s2,
    }
}

/// `V⁴ + (4/3)σ₁V³ + 2σ₂V² + 4σ₃V − f`.
pub fn quartic_residual(s1: f64, s2: f64, s3: f64, f: f64, v: f64) -> f64 {
    (((v + 4.0 / 3.0 * s1) * v + 2.0 * s2) * v + 4.0 * s3) * v - f
}

/// Largest real root of the `m = 3` quartic, by Ferrari's method.
///
/// The resolvent cubic `R(y) = 8y³ + 8py² + (2p² − 8r)y − q²` has a positive
/// root `y₀` whenever `q ≠ 0` (`R(0) = −q² < 0`). With it the depressed
/// quartic splits into
///
/// ```text
/// x = ±√(y₀/2) ... ± ½√(−2y₀ − 2p ∓ q/√(y₀/2)).
/// ```
///
/// For `q > 0` the largest root comes from the `−√(y₀/2)` factor and for
/// `q < 0` from the `+√(y₀/2)` factor; both factors are evaluated and the
/// largest real root kept. `q = 0` is biquadratic and handled directly.
pub fn quartic_v(s1: f64, s2: f64, s3: f64, f: f64) -> Result<f64> {
    let DepressedQuartic { p, q, r } = depressed_quartic(s1, s2, s3, f);
    let q_scale = s1 * s1 * s1 + s1 * s2 + s3;
    let x = if q.abs() <= 64.0 * f64::EPSILON * q_scale {
        biquadratic_root(p, r).ok_or(Error::ResolventFailure(f))?
    } else {
        let mut best = f64::NEG_INFINITY;
        for y0 in real_cubic_roots(8.0, 8.0 * p, 2.0 * p * p - 8.0 * r, -q * q) {
            if !(y0 > 0.0) {
                continue;
            }
            let h = (0.5 * y0).sqrt();
            let base = -2.0 * y0 - 2.0 * p;
            for (shift, disc) in [(h, base - q / h), (-h, base + q / h)] {
                if disc >= 0.0 {
                    best = best.max(shift + 0.5 * disc.sqrt());
                }
            }
        }
        if best == f64::NEG_INFINITY {
            return Err(Error::ResolventFailure(f));
        }
        best
    };
    let v = x - s1 / 3.0;
    if !(v > 0.0) {
        return Err(Error::InsufficientC0(v));
    }
    Ok(v)
}

/// Largest root of `x⁴ + p x² + r`.
fn biquadratic_root(p: f64, r: f64) -> Option<f64> {
    let disc = p * p - 4.0 * r;
    if disc < 0.0 {
        return None;
    }
    let x2 = -0.5 * p + 0.5 * disc.sqrt();
    (x2 >= 0.0).then(|| x2.sqrt())
}

/// The `F₁,₂` potential.
///
/// The eigenvalues `b1, b2, (b1+b2)/2` make `q` vanish identically, so the
/// quartic is biquadratic in `x = V + (b1+b2)/2`:
///
/// ```text
/// V = −(b1+b2)/2 + √( (b1−b2)²/4 + √(b1²b2² + f) ).
/// ```
pub fn f12_v(b1: f64, b2: f64, f: f64) -> Result<f64> {
    f12_inner(b1, b2, f, 1.0)
}

/// The variant with an extra factor 2 in front of the inner radical,
/// `√((b1−b2)²/4 + 2√(b1²b2² + f))`. It does not satisfy the quartic; kept
/// only so the discrepancy can be measured.
pub fn f12_v_printed(b1: f64, b2: f64, f: f64) -> Result<f64> {
    f12_inner(b1, b2, f, 2.0)
}

fn f12_inner(b1: f64, b2: f64, f: f64, factor: f64) -> Result<f64> {
    if b1 < 0.0 || b2 < 0.0 {
        return Err(Error::Domain(format!(
            "negative class parameters ({b1}, {b2})"
        )));
    }
    let inner = b1 * b1 * b2 * b2 + f;
    if inner < 0.0 {
        return Err(Error::Domain(format!(
            "negative inner discriminant {inner}"
        )));
    }
    let d = b1 - b2;
    let outer = 0.25 * d * d + factor * inner.sqrt();
    let v = -0.5 * (b1 + b2) + outer.sqrt();
    if !(v > 0.0) {
        return Err(Error::InsufficientC0(v));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cardano_perfect_cubes() {
        assert!((cardano_v(1.0, 1.0, 63.0).unwrap() - 3.0).abs() < 1e-13);
        assert!((cardano_v(1.0, 1.0, 7.0).unwrap() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn cardano_zero_class_is_cube_root() {
        let v = cardano_v(0.0, 0.0, 27.0).unwrap();
        assert!((v - 3.0).abs() < 1e-15);
    }

    #[test]
    fn cardano_casus_irreducibilis() {
        // b = (0.1, 2): the cubic has three real roots for small f.
        let (b1, b2) = (0.1, 2.0);
        let f = 1.2;
        let v = cardano_v(b1, b2, f).unwrap();
        let (s1, s2) = (b1 + b2, b1 * b2);
        let resid = ((v + 1.5 * s1) * v + 3.0 * s2) * v - f;
        assert!(resid.abs() < 1e-12, "{resid}");
        // the largest root
        let roots = real_cubic_roots(1.0, 1.5 * s1, 3.0 * s2, -f);
        assert_eq!(roots.len(), 3);
        assert!((roots[2] - v).abs() < 1e-12);
    }

    #[test]
    fn cardano_rejects_nonpositive() {
        assert!(matches!(
            cardano_v(1.0, 1.0, 0.0),
            Err(Error::InsufficientC0(_))
        ));
    }

    #[test]
    fn real_cubic_roots_cases() {
        // (x-1)(x-2)(x-3)
        let r = real_cubic_roots(1.0, -6.0, 11.0, -6.0);
        assert_eq!(r.len(), 3);
        for (got, want) in r.iter().zip([1.0, 2.0, 3.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        // x^3 + x + 1 has one real root
        let r = real_cubic_roots(1.0, 0.0, 1.0, 1.0);
        assert_eq!(r.len(), 1);
        assert!((r[0].powi(3) + r[0] + 1.0).abs() < 1e-14);
        // (x-2)^3
        let r = real_cubic_roots(1.0, -6.0, 12.0, -8.0);
        assert!((r[0] - 2.0).abs() < 1e-6);
        // (x-1)^2 (x+2) = x^3 - 3x + 2
        let r = real_cubic_roots(1.0, 0.0, -3.0, 2.0);
        assert!(r.iter().any(|x| (x - 1.0).abs() < 1e-8));
        assert!(r.iter().any(|x| (x + 2.0).abs() < 1e-12));
    }

    #[test]
    fn quartic_perfect_powers() {
        assert!((quartic_v(3.0, 3.0, 1.0, 15.0).unwrap() - 1.0).abs() < 1e-13);
        assert!((quartic_v(3.0, 3.0, 1.0, 80.0).unwrap() - 2.0).abs() < 1e-13);
    }

    #[test]
    fn quartic_generic_residual() {
        let (s1, s2, s3) = (6.0, 11.0, 6.0);
        for f in [50.0, 123.4, 500.0] {
            let v = quartic_v(s1, s2, s3, f).unwrap();
            let scale = f.max(1.0);
            assert!(quartic_residual(s1, s2, s3, f, v).abs() < 1e-11 * scale);
        }
    }

    #[test]
    fn f12_examples() {
        assert!((f12_v(1.0, 1.0, 15.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((f12_v(1.0, 1.0, 80.0).unwrap() - 2.0).abs() < 1e-15);
        let printed = f12_v_printed(1.0, 1.0, 15.0).unwrap();
        assert!((printed - (2.0 * 2f64.sqrt() - 1.0)).abs() < 1e-15);
        assert!(matches!(f12_v(-1.0, 1.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(f12_v(1.0, 1.0, -5.0), Err(Error::Domain(_))));
    }

    #[test]
    fn f12_has_vanishing_q() {
        let (b1, b2) = (0.3, 1.7);
        let s1 = 1.5 * (b1 + b2);
        let s2 = 2.0 * b1 * b2 + 0.5 * (b1 * b1 + b2 * b2);
        let s3 = 0.5 * (b1 * b1 * b2 + b1 * b2 * b2);
        let dq = depressed_quartic(s1, s2, s3, 10.0);
        assert!(dq.q.abs() < 1e-14);
        assert!((dq.p + 0.5 * (b1 - b2).powi(2)).abs() < 1e-14);
        let d = b1 - b2;
        assert!((dq.r - (d.powi(4) / 16.0 - b1 * b1 * b2 * b2 - 10.0)).abs() < 1e-12);
    }
}
