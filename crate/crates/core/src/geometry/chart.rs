//! The dense chart `U × C ⊂ K_Z` of each family and its radial function
//!
//! ```text
//! ρ = |w|² h(z),
//! ```
//!
//! where `h` is the pointwise norm factor of the invariant metric on the
//! anticanonical bundle. `ω = ½ i∂∂̄ log ρ = ½ i∂∂̄ log h` on the base.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::form::C64;
use crate::error::{Error, Result};
use crate::family::FlagFamily;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartPoint {
    pub family: FlagFamily,
    /// Base coordinates `z_1..z_m` as `[re, im]` pairs.
    pub z: Vec<[f64; 2]>,
    /// Fiber coordinate.
    pub w: [f64; 2],
}

impl ChartPoint {
    pub fn new(family: FlagFamily, z: &[C64], w: C64) -> Result<Self> {
        if z.len() != family.dim() {
            return Err(Error::Arity {
                expected: family.dim(),
                got: z.len(),
            });
        }
        let finite = z
            .iter()
            .chain(std::iter::once(&w))
            .all(|c| c.re.is_finite() && c.im.is_finite());
        if !finite {
            return Err(Error::Domain("chart coordinates must be finite".into()));
        }
        Ok(ChartPoint {
            family,
            z: z.iter().map(|c| [c.re, c.im]).collect(),
            w: [w.re, w.im],
        })
    }

    /// Chart point from real coordinates `[Re z_1, Im z_1, ..., Re w, Im w]`.
    pub fn from_real(family: FlagFamily, x: &[f64]) -> Result<Self> {
        if x.len() != 2 * (family.dim() + 1) {
            return Err(Error::Arity {
                expected: 2 * (family.dim() + 1),
                got: x.len(),
            });
        }
        let (z, w) = split(x);
        Self::new(family, &z, w)
    }

    pub fn origin(family: FlagFamily, w: C64) -> Self {
        Self::new(family, &vec![C64::new(0.0, 0.0); family.dim()], w).expect("valid arity")
    }

    pub fn z(&self) -> Vec<C64> {
        self.z.iter().map(|p| C64::new(p[0], p[1])).collect()
    }

    pub fn w(&self) -> C64 {
        C64::new(self.w[0], self.w[1])
    }

    pub fn to_real(&self) -> Vec<f64> {
        self.z
            .iter()
            .chain(std::iter::once(&self.w))
            .flat_map(|p| p.iter().copied())
            .collect()
    }

    /// Real coordinates of the base point only.
    pub fn base_real(&self) -> Vec<f64> {
        self.z.iter().flat_map(|p| p.iter().copied()).collect()
    }

    /// The same point with `w` rotated by `e^{iθ}`.
    pub fn rotate_fiber(&self, theta: f64) -> Self {
        let w = self.w() * C64::from_polar(1.0, theta);
        ChartPoint {
            w: [w.re, w.im],
            ..self.clone()
        }
    }

    pub fn with_w(&self, w: C64) -> Self {
        ChartPoint {
            w: [w.re, w.im],
            ..self.clone()
        }
    }
}

/// Complex coordinates from pairs; the last pair is the fiber.
pub fn split(x: &[f64]) -> (Vec<C64>, C64) {
    let mut c: Vec<C64> = x.chunks(2).map(|p| C64::new(p[0], p[1])).collect();
    let w = c.pop().expect("at least the fiber coordinate");
    (c, w)
}

/// Base coordinates from pairs.
pub fn to_complex(x: &[f64]) -> Vec<C64> {
    x.chunks(2).map(|p| C64::new(p[0], p[1])).collect()
}

fn f12_factors(z: &[C64]) -> (f64, f64) {
    let a = 1.0 + z[0].norm_sqr() + z[2].norm_sqr();
    let b = 1.0 + z[1].norm_sqr() + (z[0] * z[1] - z[2]).norm_sqr();
    (a, b)
}

/// `h(z)`, so that `ρ = |w|² h(z)`.
pub fn base_factor(family: FlagFamily, z: &[C64]) -> f64 {
    match family {
        FlagFamily::F12 => {
            let (a, b) = f12_factors(z);
            a * a * b * b
        }
        _ => z.iter().map(|zi| (1.0 + zi.norm_sqr()).powi(2)).product(),
    }
}

/// The per-simple-root potentials `φ_i`; `Θ = Σ b_i i∂∂̄φ_i` and
/// `ω = i∂∂̄ Σ φ_i`.
pub fn potentials(family: FlagFamily, z: &[C64]) -> Vec<f64> {
    match family {
        FlagFamily::F12 => {
            let (a, b) = f12_factors(z);
            vec![a.ln(), b.ln()]
        }
        _ => z.iter().map(|zi| (1.0 + zi.norm_sqr()).ln()).collect(),
    }
}

/// A factor `Q` with `φ = log Q`, and its derivatives `∂_j Q`, `∂_j∂_{k̄} Q`.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialJet {
    pub value: f64,
    pub grad: Vec<C64>,
    pub hess: DMatrix<C64>,
}

impl PotentialJet {
    /// `∂_j∂_{k̄} log Q = Q_{jk̄}/Q − Q_j Q_{k̄}/Q²`.
    pub fn log_hessian(&self) -> DMatrix<C64> {
        let n = self.grad.len();
        let q = self.value;
        DMatrix::from_fn(n, n, |j, k| {
            self.hess[(j, k)] / q - self.grad[j] * self.grad[k].conj() / (q * q)
        })
    }
}

/// Jets of the factors behind [`potentials`]; `h = Π Q_i²` in every family.
pub fn potential_jets(family: FlagFamily, z: &[C64]) -> Vec<PotentialJet> {
    let n = z.len();
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    match family {
        FlagFamily::F12 => {
            let (a, b) = f12_factors(z);
            let a_grad = vec![z[0].conj(), zero, z[2].conj()];
            let a_hess = DMatrix::from_fn(3, 3, |j, k| if j == k && j != 1 { one } else { zero });
            // B = 1 + |z2|² + |u|², u = z1 z2 − z3
            let u = z[0] * z[1] - z[2];
            let du = [z[1], z[0], -one];
            let b_grad = (0..3)
                .map(|j| u.conj() * du[j] + if j == 1 { z[1].conj() } else { zero })
                .collect();
            let b_hess = DMatrix::from_fn(3, 3, |j, k| {
                du[j] * du[k].conj() + if j == 1 && k == 1 { one } else { zero }
            });
            vec![
                PotentialJet {
                    value: a,
                    grad: a_grad,
                    hess: a_hess,
                },
                PotentialJet {
                    value: b,
                    grad: b_grad,
                    hess: b_hess,
                },
            ]
        }
        _ => (0..n)
            .map(|i| PotentialJet {
                value: 1.0 + z[i].norm_sqr(),
                grad: (0..n)
                    .map(|j| if j == i { z[i].conj() } else { zero })
                    .collect(),
                hess: DMatrix::from_fn(n, n, |j, k| if j == i && k == i { one } else { zero }),
            })
            .collect(),
    }
}

/// `∂_j h` for `h = Π Q_i²`.
pub fn base_factor_gradient(family: FlagFamily, z: &[C64]) -> Vec<C64> {
    let jets = potential_jets(family, z);
    let h: f64 = jets.iter().map(|j| j.value * j.value).product();
    (0..z.len())
        .map(|j| jets.iter().map(|q| q.grad[j] * (2.0 * h / q.value)).sum())
        .collect()
}

/// `ρ = |w|² h(z)`.
pub fn radial_rho(point: &ChartPoint) -> f64 {
    point.w().norm_sqr() * base_factor(point.family, &point.z())
}

/// `ρ` as a function of real coordinates.
pub fn rho_real(family: FlagFamily, x: &[f64]) -> f64 {
    let (z, w) = split(x);
    w.norm_sqr() * base_factor(family, &z)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn rho_examples() {
        let p = ChartPoint::new(
            FlagFamily::Cp1xcp1,
            &[c(0.0, 0.0), c(0.0, 0.0)],
            c(2.0, 0.0),
        )
        .unwrap();
        assert_eq!(radial_rho(&p), 4.0);
        let p = ChartPoint::new(
            FlagFamily::Cp1xcp1,
            &[c(1.0, 0.0), c(1.0, 0.0)],
            c(2.0, 0.0),
        )
        .unwrap();
        assert_eq!(radial_rho(&p), 64.0);
        let p = ChartPoint::new(
            FlagFamily::F12,
            &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
            c(1.0, 0.0),
        )
        .unwrap();
        assert_eq!(radial_rho(&p), 36.0);
    }

    #[test]
    fn arity_checked() {
        assert!(matches!(
            ChartPoint::new(FlagFamily::F12, &[c(0.0, 0.0)], c(1.0, 0.0)),
            Err(Error::Arity {
                expected: 3,
                got: 1
            })
        ));
    }

    #[test]
    fn real_roundtrip() {
        let p = ChartPoint::new(
            FlagFamily::Cp1xcp1,
            &[c(0.1, 0.2), c(0.3, 0.4)],
            c(0.5, 0.6),
        )
        .unwrap();
        let x = p.to_real();
        assert_eq!(x, vec![0.1, 0.2, 0.3, 0.4, 0.5, 0.6]);
        assert_eq!(ChartPoint::from_real(FlagFamily::Cp1xcp1, &x).unwrap(), p);
        assert_eq!(rho_real(p.family, &x), radial_rho(&p));
    }
}
