//! Decay of `ĝ − c ḡ_CY` along rays to infinity.
//!
//! With `c = (m+1) c_{-1}` and `X = c_{-1} r̃²`, the comparison metric is
//! `Xω ⊕ (X/(2(m+1))) ℓℓ*` in the coframe `{dz_j, ℓ = ∂ log ρ}`, and the
//! difference is
//!
//! ```text
//! ĝ − c ḡ_CY = [(Θ − βω) + δω] ⊕ (D2/2) ℓℓ*,
//! ```
//!
//! where `δ`, `D2` are the offsets of [`crate::potential::asymptotics`].
//! Forming the difference in this frame avoids subtracting two metrics
//! that agree to many digits; the norm is congruence invariant, so the
//! frame change does not alter the deviation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::FlagFamily;
use crate::geometry::{
    ansatz_metric, base_ke_block, cone_metric, metric_deviation, potential_block, ChartPoint,
    HermitianForm, C64,
};
use crate::potential::{cone_offsets, PotentialModel, PotentialSpec};

/// A ray `{(z, w) : |w| > 0}` sampled at geometrically spaced cone radii.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RaySpec {
    /// Base point as `[re, im]` pairs.
    pub z: Vec<[f64; 2]>,
    pub rtilde_min: f64,
    pub rtilde_max: f64,
    pub count: usize,
}

impl RaySpec {
    pub fn new(family: FlagFamily, rtilde_min: f64, rtilde_max: f64, count: usize) -> Self {
        let z = (0..family.dim())
            .map(|i| [0.3 - 0.1 * i as f64, 0.2 + 0.15 * i as f64])
            .collect();
        RaySpec {
            z,
            rtilde_min,
            rtilde_max,
            count,
        }
    }

    /// `r̃ ∈ [10, 10⁴]`, 12 samples.
    pub fn default_for(family: FlagFamily) -> Self {
        Self::new(family, 10.0, 1e4, 12)
    }

    pub fn validate(&self, family: FlagFamily) -> Result<()> {
        if self.z.len() != family.dim() {
            return Err(Error::Arity {
                expected: family.dim(),
                got: self.z.len(),
            });
        }
        if self.count < 8 {
            return Err(Error::UnderdeterminedFit(format!(
                "ray needs at least 8 samples, got {}",
                self.count
            )));
        }
        if !(self.rtilde_min > 0.0) || !(self.rtilde_max > self.rtilde_min) {
            return Err(Error::Domain(format!(
                "ray radii must satisfy 0 < min < max, got [{}, {}]",
                self.rtilde_min, self.rtilde_max
            )));
        }
        let n = family.dim() as i32 + 1;
        if !self.rtilde_max.powi(2 * n).is_finite() {
            return Err(Error::Domain(format!(
                "rtilde {} overflows rho",
                self.rtilde_max
            )));
        }
        Ok(())
    }

    pub fn radii(&self) -> Vec<f64> {
        let (lo, hi) = (self.rtilde_min.ln(), self.rtilde_max.ln());
        (0..self.count)
            .map(|i| (lo + (hi - lo) * i as f64 / (self.count - 1) as f64).exp())
            .collect()
    }

    pub fn base(&self) -> Vec<C64> {
        self.z.iter().map(|p| C64::new(p[0], p[1])).collect()
    }
}

/// Ordinary least squares `y = intercept + slope x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_std_error: f64,
}

pub fn fit_line(x: &[f64], y: &[f64]) -> Result<LineFit> {
    let n = x.len();
    if n < 3 || y.len() != n {
        return Err(Error::UnderdeterminedFit(format!(
            "need at least 3 points, got {n}"
        )));
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    if !(sxx > 0.0) {
        return Err(Error::UnderdeterminedFit("abscissae coincide".into()));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| {
            let r = b - intercept - slope * a;
            r * r
        })
        .sum();
    let slope_std_error = (ssr / (nf - 2.0) / sxx).sqrt();
    Ok(LineFit {
        slope,
        intercept,
        slope_std_error,
    })
}

/// The `ω`-block of the base and `Θ − βω` at a base point.
fn base_blocks(
    family: FlagFamily,
    b: &[f64],
    beta: f64,
    base: &[f64],
    step: f64,
) -> Result<(HermitianForm, HermitianForm)> {
    let omega = base_ke_block(family, base, step)?;
    let shifted: Vec<f64> = b.iter().map(|bi| bi - beta).collect();
    let theta_shift = potential_block(family, &shifted, base, step)?;
    Ok((omega, theta_shift))
}

fn block_diag(base: &HermitianForm, fiber: f64) -> HermitianForm {
    let mut out = base.pad_fiber();
    let n = base.dim();
    out.entries[(n, n)] = C64::new(fiber, 0.0);
    out
}

/// `‖ĝ − c ḡ_CY‖` in `c ḡ_CY` at cone radius `r̃` over the base point.
pub fn ray_deviation(
    family: FlagFamily,
    b: &[f64],
    spec: &PotentialSpec,
    base: &[f64],
    rtilde: f64,
    step: f64,
) -> Result<f64> {
    let off = cone_offsets(spec, rtilde)?;
    let (omega, theta_shift) = base_blocks(family, b, off.beta, base, step)?;
    let a = 1.0 / (family.dim() as f64 + 1.0);
    let diff = block_diag(
        &theta_shift.add(&omega.scale(off.delta)),
        0.5 * off.rho_dv_excess,
    );
    let bar = block_diag(&omega.scale(off.x), 0.5 * a * off.x);
    Ok(bar.whiten(&diff)?.frobenius())
}

/// The same deviation by direct subtraction of the assembled chart metrics;
/// only meaningful at moderate `r̃` where the difference is well above
/// rounding.
pub fn direct_ray_deviation(
    family: FlagFamily,
    b: &[f64],
    model: &PotentialModel,
    z: &[C64],
    rtilde: f64,
    step: f64,
) -> Result<f64> {
    let n = family.dim() as f64 + 1.0;
    let rho = rtilde.powf(2.0 * n);
    let h = crate::geometry::base_factor(family, z);
    let point = ChartPoint::new(family, z, C64::new((rho / h).sqrt(), 0.0))?;
    let g_hat = ansatz_metric(family, b, model, &point, step)?;
    let c = n * model.spec.leading_coefficient();
    let g_bar = cone_metric(family, &point, step)?.scale(c);
    metric_deviation(&g_hat, &g_bar)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    /// `−slope` of `log deviation` against `log r̃`.
    pub gamma: f64,
    pub std_error: f64,
    pub window: [f64; 2],
    /// `(r̃, deviation)` samples.
    pub samples: Vec<[f64; 2]>,
}

/// Fitted decay exponent `γ` of `‖ĝ − c ḡ_CY‖ = O(r̃^{-γ})` along a ray.
///
/// The cone constant is fixed at `c = (m+1) c_{-1}`, the only value for
/// which the deviation tends to zero; with it the regression intercept
/// absorbs all remaining constants.
pub fn estimate_decay_rate(
    family: FlagFamily,
    b: &[f64],
    spec: &PotentialSpec,
    ray: &RaySpec,
    step: f64,
) -> Result<DecayFit> {
    ray.validate(family)?;
    if spec.m != family.dim() {
        return Err(Error::Arity {
            expected: family.dim(),
            got: spec.m,
        });
    }
    let base: Vec<f64> = ray.z.iter().flat_map(|p| p.iter().copied()).collect();
    let radii = ray.radii();
    let mut samples = Vec::with_capacity(radii.len());
    for &rt in &radii {
        let dev = ray_deviation(family, b, spec, &base, rt, step)?;
        if !(dev > f64::MIN_POSITIVE) || !dev.is_finite() {
            return Err(Error::UnderdeterminedFit(format!(
                "deviation {dev:e} at rtilde={rt} is below the representable floor"
            )));
        }
        samples.push([rt, dev]);
    }
    let lx: Vec<f64> = samples.iter().map(|s| s[0].ln()).collect();
    let ly: Vec<f64> = samples.iter().map(|s| s[1].ln()).collect();
    let fit = fit_line(&lx, &ly)?;
    Ok(DecayFit {
        gamma: -fit.slope,
        std_error: fit.slope_std_error,
        window: [ray.rtilde_min, ray.rtilde_max],
        samples,
    })
}

/// `2m + 2` when `Θ` is a multiple of `ω`, else `2`.
pub fn expected_gamma(m: usize, compact_type: bool) -> f64 {
    if compact_type {
        2.0 * m as f64 + 2.0
    } else {
        2.0
    }
}
