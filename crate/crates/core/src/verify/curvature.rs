//! Pointwise curvature and volume checks.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::FlagFamily;
use crate::geometry::chart::to_complex;
use crate::geometry::{
    ansatz_metric_analytic_real, ansatz_metric_real, base_ke_block, cone_metric, flat_cone_metric,
    normalized_norm, potential_block_analytic, radial_rho, ricci_tensor, ChartPoint, FdSteps,
};
use crate::potential::RadialProfile;

/// How chart derivatives inside the metric are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DerivativePath {
    /// Nested finite differences (any family).
    FiniteDifference,
    /// Closed-form chart derivatives; only the outer Ricci Hessian is a
    /// finite difference.
    Analytic,
}

/// `‖Ric(ω̂)‖ / ‖ω̂‖`, both measured in `ω̂`, at one point.
pub fn ricci_residual<P: RadialProfile + ?Sized>(
    family: FlagFamily,
    b: &[f64],
    profile: &P,
    point: &ChartPoint,
    steps: &FdSteps,
    path: DerivativePath,
) -> Result<f64> {
    steps.validate()?;
    let x = point.to_real();
    let field = |y: &[f64]| match path {
        DerivativePath::FiniteDifference => ansatz_metric_real(family, b, profile, y, steps.inner),
        DerivativePath::Analytic => ansatz_metric_analytic_real(family, b, profile, y),
    };
    let g = field(&x)?;
    let ric = ricci_tensor(field, &x, steps.outer)?;
    normalized_norm(&ric, &g)
}

/// Per-point Ricci residuals of the ansatz metric.
pub fn check_ricci_flat<P: RadialProfile + ?Sized>(
    family: FlagFamily,
    b: &[f64],
    profile: &P,
    points: &[ChartPoint],
    steps: &FdSteps,
    path: DerivativePath,
) -> Result<Vec<f64>> {
    points
        .iter()
        .map(|p| ricci_residual(family, b, profile, p, steps, path))
        .collect()
}

/// `‖Ric(g) − 2g‖ / ‖g‖` for `g = scale · ω` on the base at one point.
///
/// `scale = 1` is the Kähler–Einstein check; any other scale is a negative
/// control, since `Ric(sω) = Ric(ω)`.
pub fn base_einstein_residual(
    family: FlagFamily,
    point: &ChartPoint,
    steps: &FdSteps,
    scale: f64,
    path: DerivativePath,
) -> Result<f64> {
    steps.validate()?;
    let x = point.base_real();
    let ones = vec![1.0; family.rank()];
    let field = |y: &[f64]| {
        let omega = match path {
            DerivativePath::FiniteDifference => base_ke_block(family, y, steps.inner)?,
            DerivativePath::Analytic => potential_block_analytic(family, &ones, &to_complex(y)),
        };
        Ok(omega.scale(scale))
    };
    let g = field(&x)?;
    let ric = ricci_tensor(field, &x, steps.outer)?;
    normalized_norm(&ric.sub(&g.scale(2.0)), &g)
}

pub fn check_base_einstein(
    family: FlagFamily,
    points: &[ChartPoint],
    steps: &FdSteps,
    scale: f64,
    path: DerivativePath,
) -> Result<Vec<f64>> {
    points
        .iter()
        .map(|p| base_einstein_residual(family, p, steps, scale, path))
        .collect()
}

/// `det ω̄ / det ω̄_CY` with `ω̄ = ½ i∂∂̄ρ`, and its predicted value
/// `(m+1)^{m+2} ρ^m`.
pub fn volume_ratio(family: FlagFamily, point: &ChartPoint, step: f64) -> Result<(f64, f64)> {
    let m = family.dim() as i32;
    let flat = flat_cone_metric(family, point, step)?;
    let cone = cone_metric(family, point, step)?;
    let (lf, lc) = (flat.log_det()?, cone.log_det()?);
    let ratio = (lf - lc).exp();
    let expected = ((m + 1) as f64).powi(m + 2) * radial_rho(point).powi(m);
    Ok((ratio, expected))
}

/// Relative errors of the volume identity at each point.
pub fn check_volume_identity(
    family: FlagFamily,
    points: &[ChartPoint],
    step: f64,
) -> Result<Vec<f64>> {
    points
        .iter()
        .map(|p| {
            let (ratio, expected) = volume_ratio(family, p, step)?;
            if !(expected > 0.0) {
                return Err(Error::Singular);
            }
            Ok((ratio / expected - 1.0).abs())
        })
        .collect()
}

pub fn max_of(values: &[f64]) -> f64 {
    values
        .iter()
        .fold(0.0f64, |a, &b| if b.is_nan() { f64::NAN } else { a.max(b) })
}
