//! Expansion of `V(ρ)` at infinity in powers of `s = ρ^{-1/(m+1)}`:
//!
//! ```text
//! V(ρ) = Σ_{k ≥ -1} c_k ρ^{-k/(m+1)} = c_{-1}/s + c_0 + c_1 s + ...
//! ```
//!
//! Writing `W = sV`, the master equation times `s^{m+1}` becomes the
//! polynomial relation
//!
//! ```text
//! Q(W, s) = Σ_k σ_{m-k} W^{k+1} s^{m-k} / (k+1) − C − C0 s^{m+1} = 0,
//! ```
//!
//! which is solved order by order for the power series `W(s)`; the
//! coefficient of `s^n` is linear in `w_n` with slope `w_0^m ≠ 0`.

use serde::{Deserialize, Serialize};

use super::PotentialSpec;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PuiseuxExpansion {
    pub m: usize,
    /// `coeffs[k + 1] = c_k` for `k = -1..=K`.
    pub coeffs: Vec<f64>,
    sigma: Vec<f64>,
    c: f64,
    c0: f64,
}

/// Polynomial product truncated at degree `max_deg`.
fn mul_trunc(a: &[f64], b: &[f64], max_deg: usize) -> Vec<f64> {
    let len = (a.len() + b.len() - 1).min(max_deg + 1);
    let mut out = vec![0.0; len];
    for (i, &x) in a.iter().enumerate() {
        if x == 0.0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if i + j >= len {
                break;
            }
            out[i + j] += x * y;
        }
    }
    out
}

/// Coefficients of `Q(W(s), s)` as a polynomial in `s`, up to `max_deg`.
fn q_series(sigma: &[f64], c: f64, c0: f64, w: &[f64], max_deg: usize) -> Vec<f64> {
    q_series_impl(sigma, c, c0, w, max_deg, false)
}

/// Same expansion with every term replaced by its absolute value; bounds
/// the rounding error of each coefficient.
fn q_magnitudes(sigma: &[f64], c: f64, c0: f64, w: &[f64], max_deg: usize) -> Vec<f64> {
    let w_abs: Vec<f64> = w.iter().map(|x| x.abs()).collect();
    q_series_impl(sigma, c, c0, &w_abs, max_deg, true)
}

fn q_series_impl(
    sigma: &[f64],
    c: f64,
    c0: f64,
    w: &[f64],
    max_deg: usize,
    magnitude: bool,
) -> Vec<f64> {
    let m = sigma.len() - 1;
    let mut out = vec![0.0; max_deg + 1];
    let mut w_pow = vec![1.0];
    for k in 0..=m {
        w_pow = mul_trunc(&w_pow, w, max_deg);
        let shift = m - k;
        let coef = sigma[m - k] / (k as f64 + 1.0);
        let coef = if magnitude { coef.abs() } else { coef };
        if coef == 0.0 {
            continue;
        }
        for (i, &x) in w_pow.iter().enumerate() {
            if i + shift <= max_deg {
                out[i + shift] += coef * x;
            }
        }
    }
    let (c, c0) = if magnitude {
        (-c.abs(), -c0.abs())
    } else {
        (c, c0)
    };
    out[0] -= c;
    if m < max_deg {
        out[m + 1] -= c0;
    }
    out
}

/// The first `K + 2` coefficients `c_{-1}, ..., c_K`.
pub fn puiseux_expand(spec: &PotentialSpec, k_max: usize) -> PuiseuxExpansion {
    let m = spec.m;
    let w0 = spec.leading_coefficient();
    let slope = w0.powi(m as i32);
    let mut w = vec![w0];
    for n in 1..=k_max + 1 {
        w.push(0.0);
        let q = q_series(&spec.sigma, spec.c, spec.c0, &w, n);
        w[n] = -q[n] / slope;
    }
    PuiseuxExpansion {
        m,
        coeffs: w,
        sigma: spec.sigma.clone(),
        c: spec.c,
        c0: spec.c0,
    }
}

impl PuiseuxExpansion {
    /// Largest `K` stored.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 2
    }

    /// `c_k` for `k ≥ -1`.
    pub fn coefficient(&self, k: i64) -> f64 {
        self.coeffs[(k + 1) as usize]
    }

    fn s_of(&self, rho: f64) -> f64 {
        rho.powf(-1.0 / (self.m as f64 + 1.0))
    }

    /// `Σ_{k=-1}^{K} c_k ρ^{-k/(m+1)}`.
    pub fn partial_sum(&self, rho: f64) -> f64 {
        let s = self.s_of(rho);
        let tail = self.coeffs[1..]
            .iter()
            .rev()
            .fold(0.0, |acc, &c| acc * s + c);
        self.coeffs[0] / s + tail
    }

    /// `V(ρ) − partial_sum(ρ)`, resolved below the rounding level of `V`.
    ///
    /// `Q(W_K(s), s)` is expanded exactly as a polynomial in `s`. Its
    /// coefficients through `s^{K+1}` vanish by construction and are dropped
    /// after checking they are rounding-sized; the remaining tail is the
    /// residual of the truncated series, and a few Newton steps on
    /// `Q(W_K + e, s) = 0` give the correction `e = s (V − S_K)`.
    pub fn remainder(&self, rho: f64) -> Result<f64> {
        if !(rho > 0.0) {
            return Err(Error::Domain(format!("rho must be positive, got {rho}")));
        }
        let m = self.m;
        let k1 = self.coeffs.len() - 1;
        let full_deg = k1 * (m + 1) + m + 1;
        let q = q_series(&self.sigma, self.c, self.c0, &self.coeffs, full_deg);
        let mag = q_magnitudes(&self.sigma, self.c, self.c0, &self.coeffs, k1);
        for (n, (&qn, &bound)) in q.iter().zip(&mag).enumerate() {
            if qn.abs() > 64.0 * f64::EPSILON * bound {
                return Err(Error::Series(format!(
                    "order {n} residual {qn:e} exceeds rounding level"
                )));
            }
        }
        let s = self.s_of(rho);
        let residual =
            q[k1 + 1..].iter().rev().fold(0.0, |acc, &c| acc * s + c) * s.powi(k1 as i32 + 1);
        let w_k = self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * s + c);

        // Taylor coefficients of Q(w_k + e, s) in e.
        let taylor: Vec<f64> = (1..=m + 1)
            .map(|j| {
                (0..=m)
                    .filter(|&k| k + 1 >= j)
                    .map(|k| {
                        self.sigma[m - k] / (k as f64 + 1.0)
                            * binomial(k + 1, j)
                            * w_k.powi((k + 1 - j) as i32)
                            * s.powi((m - k) as i32)
                    })
                    .sum()
            })
            .collect();
        let mut e = -residual / taylor[0];
        for _ in 0..8 {
            let (mut g, mut dg) = (residual, 0.0);
            let mut e_pow = 1.0;
            for (j, &t) in taylor.iter().enumerate() {
                dg += (j as f64 + 1.0) * t * e_pow;
                e_pow *= e;
                g += t * e_pow;
            }
            let step = g / dg;
            e -= step;
            if step.abs() <= f64::EPSILON * e.abs() {
                break;
            }
        }
        Ok(e / s)
    }

    /// Index of the first omitted coefficient that is not identically zero,
    /// searched up to `search` extra orders.
    pub fn leading_omitted(&self, spec: &PotentialSpec, search: usize) -> Option<usize> {
        let k = self.order();
        let longer = puiseux_expand(spec, k + search);
        let scale = longer.coeffs.iter().fold(0.0f64, |a, c| a.max(c.abs()));
        (k + 1..=k + search).find(|&j| longer.coefficient(j as i64).abs() > 1e-12 * scale)
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::solve_v;

    #[test]
    fn leading_coefficients() {
        let spec = PotentialSpec::new(vec![1.0, 2.0, 1.0], 1.0, 0.5).unwrap();
        let p = puiseux_expand(&spec, 3);
        assert!((p.coefficient(-1) - 3f64.cbrt()).abs() < 1e-15);
        assert!((p.coefficient(0) + 1.0).abs() < 1e-15);

        let spec = PotentialSpec::new(vec![1.0, 0.0, 0.0, 0.0], 1.0, 0.5).unwrap();
        let p = puiseux_expand(&spec, 3);
        assert!((p.coefficient(-1) - 4f64.powf(0.25)).abs() < 1e-15);
        assert_eq!(p.coefficient(0), 0.0);
    }

    #[test]
    fn m1_matches_binomial_series() {
        // V = -σ1 + sqrt(σ1² + 2(Cρ + C0)) = -σ1 + sqrt(2C) ρ^{1/2} (1 + A/ρ)^{1/2}
        let (s1, c, c0) = (0.7, 1.3, 0.4);
        let spec = PotentialSpec::new(vec![1.0, s1], c, c0).unwrap();
        let p = puiseux_expand(&spec, 4);
        let a = (s1 * s1 + 2.0 * c0) / (2.0 * c);
        let lead = (2.0 * c).sqrt();
        assert!((p.coefficient(-1) - lead).abs() < 1e-14);
        assert!((p.coefficient(0) + s1).abs() < 1e-14);
        assert!((p.coefficient(1) - lead * 0.5 * a).abs() < 1e-14);
        assert!(p.coefficient(2).abs() < 1e-14);
        assert!((p.coefficient(3) + lead * a * a / 8.0).abs() < 1e-14);
        assert!(p.coefficient(4).abs() < 1e-14);
    }

    #[test]
    fn remainder_matches_direct_difference() {
        let spec = PotentialSpec::new(vec![1.0, 2.0, 0.75], 1.0, 2.0).unwrap();
        for k in 0..3 {
            let p = puiseux_expand(&spec, k);
            for &rho in &[50.0, 1e3, 1e4] {
                let direct = solve_v(&spec, rho).unwrap() - p.partial_sum(rho);
                let stable = p.remainder(rho).unwrap();
                assert!(
                    (direct - stable).abs() < 1e-9 * (1.0 + direct.abs()),
                    "k={k} rho={rho} direct={direct} stable={stable}"
                );
            }
        }
    }

    #[test]
    fn remainder_detects_wrong_coefficients() {
        let spec = PotentialSpec::new(vec![1.0, 2.0, 0.75], 1.0, 2.0).unwrap();
        let mut p = puiseux_expand(&spec, 2);
        p.coeffs[2] += 1e-3;
        assert!(matches!(p.remainder(1e6), Err(Error::Series(_))));
    }
}
