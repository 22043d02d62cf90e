//! Offsets between the potential and its cone model, computed without
//! subtracting large nearly equal numbers.
//!
//! Along the cone, `V ~ X − β` with `X = c_{-1} r̃²`, `r̃² = ρ^{1/(m+1)}` and
//! `β = σ₁/m`. The differences that control `‖ĝ − c·ḡ_CY‖` are
//!
//! ```text
//! δ  = V + β − X,
//! D2 = ρV' − X/(m+1),
//! ```
//!
//! both of which decay while `V`, `X`, `ρV'` grow. Shifting `t = s − β`
//! turns `∏(t + b_j)` into `∏(s + d_j)` with `d_j = b_j − β`, whose
//! elementary symmetric functions `e_k` have `e_1 = 0`; the master equation
//! then becomes a polynomial in `δ` whose coefficients are all small or
//! exact, and Newton on it resolves `δ` to full relative precision.

use serde::{Deserialize, Serialize};

use super::PotentialSpec;
use crate::error::{Error, Result};
use crate::lie::symmetric_functions;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeOffsets {
    pub rtilde: f64,
    /// `X = c_{-1} r̃²`.
    pub x: f64,
    /// `β = σ₁/m`.
    pub beta: f64,
    /// `δ = V + β − X`.
    pub delta: f64,
    /// `D2 = ρV' − X/(m+1)`.
    pub rho_dv_excess: f64,
    /// Elementary symmetric functions `e_0..e_m` of `d_j = b_j − β`.
    pub shifted_sigma: Vec<f64>,
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Coefficients of `p(s − β)` given those of `p(t) = Σ σ_k t^{m−k}`.
fn taylor_shift(sigma: &[f64], beta: f64) -> Vec<f64> {
    // Repeated synthetic division, highest degree first.
    let m = sigma.len() - 1;
    let mut c = sigma.to_vec();
    for i in 0..m {
        for j in 1..=m - i {
            c[j] -= beta * c[j - 1];
        }
    }
    c
}

impl ConeOffsets {
    pub fn m(&self) -> usize {
        self.shifted_sigma.len() - 1
    }

    /// `Σ_j (d_j + δ)²`, the squared ω-norm of `Θ + (V − X)ω`.
    pub fn base_offset_sq(&self) -> f64 {
        let m = self.m() as f64;
        let e2 = self.shifted_sigma.get(2).copied().unwrap_or(0.0);
        (-2.0 * e2).max(0.0) + m * self.delta * self.delta
    }

    /// `‖ĝ − c ḡ_CY‖` measured in `c ḡ_CY`, which depends on `r̃` only.
    pub fn deviation(&self) -> f64 {
        let a = 1.0 / (self.m() as f64 + 1.0);
        let base = self.base_offset_sq() / (self.x * self.x);
        let fiber = self.rho_dv_excess / (a * self.x);
        (base + fiber * fiber).sqrt()
    }
}

/// The offsets at cone radius `r̃ > 0`.
///
/// The eigenvalues of the class are used when the spec carries them;
/// otherwise the shifted symmetric functions come from a Taylor shift of
/// `σ`.
pub fn cone_offsets(spec: &PotentialSpec, rtilde: f64) -> Result<ConeOffsets> {
    if !(rtilde > 0.0) || !rtilde.is_finite() {
        return Err(Error::Domain(format!(
            "rtilde must be positive, got {rtilde}"
        )));
    }
    let m = spec.m;
    let n = m as f64 + 1.0;
    let beta = spec.sigma[1] / m as f64;
    let e = match &spec.class {
        Some(class) if class.eigenvalues.len() == m => {
            let d: Vec<f64> = class.eigenvalues.iter().map(|b| b - beta).collect();
            let mut e = symmetric_functions(&d);
            e[1] = 0.0;
            e
        }
        _ => {
            let mut e = taylor_shift(&spec.sigma, beta);
            e[1] = 0.0;
            e
        }
    };
    let x = spec.leading_coefficient() * rtilde * rtilde;

    // F(δ) = [(X+δ)^{m+1} − X^{m+1}]/(m+1)
    //      + Σ_{k≥2} e_k (u^{m+1−k} − β^{m+1−k})/(m+1−k) − C0 − β^{m+1}/(m+1)
    // with u = X + δ, and F'(δ) = ∏(u + d_j).
    let constant = spec.c0 + beta.powi(m as i32 + 1) / n;
    let big = |delta: f64| -> f64 {
        (1..=m + 1)
            .map(|j| binomial(m + 1, j) * x.powi((m + 1 - j) as i32) * delta.powi(j as i32))
            .sum::<f64>()
            / n
    };
    let small = |u: f64| -> f64 {
        (2..=m)
            .map(|k| {
                let p = (m + 1 - k) as i32;
                e[k] * (u.powi(p) - beta.powi(p)) / p as f64
            })
            .sum::<f64>()
    };
    let prod = |u: f64| -> f64 { (0..=m).fold(0.0, |acc, k| acc * u + e[k]) };
    let mut delta = 0.0;
    let mut converged = false;
    for _ in 0..100 {
        let u = x + delta;
        let g = big(delta) + small(u) - constant;
        let dg = prod(u);
        if !(dg > 0.0) {
            return Err(Error::SingularDerivative(u - beta));
        }
        let step = g / dg;
        delta -= step;
        if step.abs() <= 4.0 * f64::EPSILON * delta.abs() || g == 0.0 {
            converged = true;
            break;
        }
    }
    if !converged || !delta.is_finite() {
        return Err(Error::Domain(format!(
            "cone offset did not converge at rtilde={rtilde}"
        )));
    }

    // X^m − Π(u) = −[Σ_{j≥1} C(m,j) X^{m−j} δ^j + Σ_{k≥2} e_k u^{m−k}]
    let u = x + delta;
    let gap = -((1..=m)
        .map(|j| binomial(m, j) * x.powi((m - j) as i32) * delta.powi(j as i32))
        .sum::<f64>()
        + (2..=m).map(|k| e[k] * u.powi((m - k) as i32)).sum::<f64>());
    let rho_dv_excess = x * gap / (n * prod(u));

    Ok(ConeOffsets {
        rtilde,
        x,
        beta,
        delta,
        rho_dv_excess,
        shifted_sigma: e,
    })
}
