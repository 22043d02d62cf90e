use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::chart::{
    base_factor, base_factor_gradient, potential_jets, potentials, rho_real, split, to_complex,
    ChartPoint,
};
use super::fd::{check_step, complex_gradient, complex_hessian, try_complex_hessian};
use super::form::{HermitianForm, C64};
use crate::error::{Error, Result};
use crate::family::FlagFamily;
use crate::lie::relative_eigenvalues;
use crate::potential::RadialProfile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    Ansatz,
    Cone,
    BaseKe,
    Theta,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricSample {
    pub point: ChartPoint,
    pub rho: f64,
    pub metric: HermitianForm,
    pub which: MetricKind,
}

/// Inner (assembly) and outer (curvature) finite-difference steps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FdSteps {
    pub inner: f64,
    pub outer: f64,
}

impl Default for FdSteps {
    fn default() -> Self {
        FdSteps {
            inner: super::fd::DEFAULT_STEP,
            outer: super::fd::RICCI_STEP,
        }
    }
}

impl FdSteps {
    /// Nested differences need the outer step well above the inner one,
    /// or the inner truncation noise is amplified by `1/outer²`.
    pub fn validate(&self) -> Result<()> {
        check_step(self.inner)?;
        check_step(self.outer)?;
        if self.outer < 10.0 * self.inner {
            return Err(Error::InvalidStep(self.outer));
        }
        Ok(())
    }
}

fn check_b(family: FlagFamily, b: &[f64]) -> Result<()> {
    if b.len() != family.rank() {
        return Err(Error::Arity {
            expected: family.rank(),
            got: b.len(),
        });
    }
    if let Some(bad) = b.iter().find(|x| !(**x >= 0.0) || !x.is_finite()) {
        return Err(Error::Domain(format!(
            "class parameters must be nonnegative, got {bad}"
        )));
    }
    Ok(())
}

/// `i∂∂̄ Σ c_i φ_i` on the base, as an `m×m` block.
pub fn potential_block(
    family: FlagFamily,
    coeffs: &[f64],
    base: &[f64],
    step: f64,
) -> Result<HermitianForm> {
    if coeffs.iter().all(|&c| c == 0.0) {
        check_step(step)?;
        return Ok(HermitianForm::zeros(family.dim()));
    }
    complex_hessian(
        |x| {
            potentials(family, &to_complex(x))
                .iter()
                .zip(coeffs)
                .map(|(p, c)| c * p)
                .sum()
        },
        base,
        step,
    )
}

/// [`potential_block`] from closed-form derivatives of the potentials.
pub fn potential_block_analytic(family: FlagFamily, coeffs: &[f64], z: &[C64]) -> HermitianForm {
    let n = z.len();
    let sum = potential_jets(family, z)
        .iter()
        .zip(coeffs)
        .filter(|(_, &c)| c != 0.0)
        .fold(DMatrix::zeros(n, n), |acc, (jet, &c)| {
            acc + jet.log_hessian() * C64::new(c, 0.0)
        });
    HermitianForm::from_matrix(sum)
}

/// `ω` on the base as an `m×m` block.
pub fn base_ke_block(family: FlagFamily, base: &[f64], step: f64) -> Result<HermitianForm> {
    potential_block(family, &vec![1.0; family.rank()], base, step)
}

/// `ω = ½ i∂∂̄ log ρ`, pulled back to the total space.
pub fn base_ke_metric(family: FlagFamily, point: &ChartPoint, step: f64) -> Result<HermitianForm> {
    Ok(base_ke_block(family, &point.base_real(), step)?.pad_fiber())
}

/// `Θ = Σ b_i i∂∂̄φ_i`, pulled back to the total space.
pub fn theta_form(
    family: FlagFamily,
    b: &[f64],
    point: &ChartPoint,
    step: f64,
) -> Result<HermitianForm> {
    check_b(family, b)?;
    Ok(potential_block(family, b, &point.base_real(), step)?.pad_fiber())
}

/// `v` with `v v* = ∂ρ ⊗ ∂̄ρ / ρ`: `v_j = w ∂_j h / √h`, `v_w = √h`.
///
/// Never divides by `w`, so it is valid on the zero section.
pub fn fiber_vector(family: FlagFamily, z: &[C64], w: C64, grad_h: &[C64]) -> Vec<C64> {
    let sh = base_factor(family, z).sqrt();
    grad_h
        .iter()
        .map(|g| w * g / sh)
        .chain(std::iter::once(C64::new(sh, 0.0)))
        .collect()
}

/// `[Θ + Vω] ⊕ 0 + (V'/2) v v*`, without a definiteness check.
pub fn assemble_ansatz(
    theta: &HermitianForm,
    omega: &HermitianForm,
    v: f64,
    dv: f64,
    fiber: &[C64],
) -> HermitianForm {
    let base = theta.add(&omega.scale(v)).pad_fiber();
    let n = fiber.len();
    let outer = DMatrix::from_fn(n, n, |a, b| fiber[a] * fiber[b].conj() * (0.5 * dv));
    HermitianForm::from_matrix(base.entries + outer)
}

fn checked(g: HermitianForm) -> Result<HermitianForm> {
    if g.is_positive_definite() {
        Ok(g)
    } else {
        Err(Error::AssemblyFailure(g.min_eigenvalue()))
    }
}

/// The ansatz metric `ω̂ = Θ + Vω + 2V' i∂r∧∂̄r` at real coordinates `x`,
/// all chart derivatives by finite differences.
pub fn ansatz_metric_real<P: RadialProfile + ?Sized>(
    family: FlagFamily,
    b: &[f64],
    profile: &P,
    x: &[f64],
    step: f64,
) -> Result<HermitianForm> {
    check_b(family, b)?;
    let (z, w) = split(x);
    let base = &x[..x.len() - 2];
    let omega = base_ke_block(family, base, step)?;
    let theta = potential_block(family, b, base, step)?;
    let grad_h = complex_gradient(|y| base_factor(family, &to_complex(y)), base, step)?;
    let (v, dv) = profile.eval(rho_real(family, x))?;
    checked(assemble_ansatz(
        &theta,
        &omega,
        v,
        dv,
        &fiber_vector(family, &z, w, &grad_h),
    ))
}

pub fn ansatz_metric<P: RadialProfile + ?Sized>(
    family: FlagFamily,
    b: &[f64],
    profile: &P,
    point: &ChartPoint,
    step: f64,
) -> Result<HermitianForm> {
    if point.family != family {
        return Err(Error::Domain(format!(
            "point belongs to {}, not {family}",
            point.family
        )));
    }
    ansatz_metric_real(family, b, profile, &point.to_real(), step)
}

/// The ansatz metric with every chart derivative in closed form; only `V`
/// and `V'` come from the profile.
pub fn ansatz_metric_analytic_real<P: RadialProfile + ?Sized>(
    family: FlagFamily,
    b: &[f64],
    profile: &P,
    x: &[f64],
) -> Result<HermitianForm> {
    check_b(family, b)?;
    let (z, w) = split(x);
    let omega = potential_block_analytic(family, &vec![1.0; family.rank()], &z);
    let theta = potential_block_analytic(family, b, &z);
    let grad_h = base_factor_gradient(family, &z);
    let (v, dv) = profile.eval(w.norm_sqr() * base_factor(family, &z))?;
    checked(assemble_ansatz(
        &theta,
        &omega,
        v,
        dv,
        &fiber_vector(family, &z, w, &grad_h),
    ))
}

fn nonzero_fiber(x: &[f64]) -> Result<()> {
    let n = x.len();
    if x[n - 2] == 0.0 && x[n - 1] == 0.0 {
        return Err(Error::ConeApex);
    }
    Ok(())
}

/// The Calabi–Yau cone metric `½ i∂∂̄ r̃²`, `r̃² = ρ^{1/(m+1)}`.
pub fn cone_metric(family: FlagFamily, point: &ChartPoint, step: f64) -> Result<HermitianForm> {
    let x = point.to_real();
    nonzero_fiber(&x)?;
    let a = 1.0 / (family.dim() as f64 + 1.0);
    Ok(complex_hessian(|y| rho_real(family, y).powf(a), &x, step)?.scale(0.5))
}

/// `ω̄ = ½ i∂∂̄ρ`.
pub fn flat_cone_metric(
    family: FlagFamily,
    point: &ChartPoint,
    step: f64,
) -> Result<HermitianForm> {
    let x = point.to_real();
    nonzero_fiber(&x)?;
    Ok(complex_hessian(|y| rho_real(family, y), &x, step)?.scale(0.5))
}

/// `Ric_{jk̄} = −∂_j∂_{k̄} log det g` for a metric field on real coordinates.
pub fn ricci_tensor<F>(mut field: F, x: &[f64], step: f64) -> Result<HermitianForm>
where
    F: FnMut(&[f64]) -> Result<HermitianForm>,
{
    let h = try_complex_hessian(|y| field(y)?.log_det(), x, step)?;
    Ok(h.scale(-1.0))
}

/// `‖ĝ − ḡ‖` measured in `ḡ`: the Frobenius norm of `L⁻¹(ĝ − ḡ)L⁻*`
/// with `ḡ = LL*`.
pub fn metric_deviation(g_hat: &HermitianForm, g_bar: &HermitianForm) -> Result<f64> {
    if g_hat.dim() != g_bar.dim() {
        return Err(Error::Arity {
            expected: g_bar.dim(),
            got: g_hat.dim(),
        });
    }
    Ok(g_bar.whiten(&g_hat.sub(g_bar))?.frobenius())
}

/// `Ric` measured in `g`, normalized so that `g` itself has norm 1.
pub fn normalized_norm(tensor: &HermitianForm, g: &HermitianForm) -> Result<f64> {
    Ok(g.whiten(tensor)?.frobenius() / (g.dim() as f64).sqrt())
}

/// Relative eigenvalues of `Θ` with respect to `ω` at a point, sorted.
pub fn theta_relative_eigenvalues(
    family: FlagFamily,
    b: &[f64],
    point: &ChartPoint,
    step: f64,
) -> Result<Vec<f64>> {
    check_b(family, b)?;
    let base = point.base_real();
    let omega = base_ke_block(family, &base, step)?;
    let theta = potential_block(family, b, &base, step)?;
    Ok(omega.whiten(&theta)?.eigenvalues())
}

/// The eigenvalues the class should have, sorted, for comparison.
pub fn expected_relative_eigenvalues(family: FlagFamily, b: &[f64]) -> Result<Vec<f64>> {
    let mut e = relative_eigenvalues(family, b)?;
    e.sort_by(|a, b| a.total_cmp(b));
    Ok(e)
}
