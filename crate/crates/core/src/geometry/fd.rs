//! Fourth-order central differences on real coordinates
//! `[Re z_1, Im z_1, ..., Re z_n, Im z_n]`.
//!
//! The step for coordinate `i` is `step · max(1, |x_i|)`.

use nalgebra::DMatrix;

use super::form::{HermitianForm, C64};
use crate::error::{Error, Result};

/// Default relative step for first and second derivatives.
pub const DEFAULT_STEP: f64 = 1e-3;
/// Default step of the outer Hessian in nested (curvature) computations.
/// The inner Hessian carries roundoff of order `ε/DEFAULT_STEP²`, which
/// the outer one amplifies by `1/RICCI_STEP²`; `3e-2` balances that
/// against the `h⁴` truncation of the outer stencil.
pub const RICCI_STEP: f64 = 3e-2;

const D1: [(f64, f64); 4] = [(-2.0, 1.0), (-1.0, -8.0), (1.0, 8.0), (2.0, -1.0)];
const D2: [(f64, f64); 5] = [
    (-2.0, -1.0),
    (-1.0, 16.0),
    (0.0, -30.0),
    (1.0, 16.0),
    (2.0, -1.0),
];

pub fn check_step(step: f64) -> Result<()> {
    if !(1e-8..=0.5).contains(&step) {
        return Err(Error::InvalidStep(step));
    }
    Ok(())
}

fn widths(x: &[f64], step: f64) -> Vec<f64> {
    x.iter().map(|&xi| step * xi.abs().max(1.0)).collect()
}

/// Real gradient of `f` at `x`.
pub fn real_gradient<F>(mut f: F, x: &[f64], step: f64) -> Result<Vec<f64>>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    check_step(step)?;
    let h = widths(x, step);
    let mut y = x.to_vec();
    let mut grad = vec![0.0; x.len()];
    for i in 0..x.len() {
        let mut acc = 0.0;
        for &(o, c) in &D1 {
            y[i] = x[i] + o * h[i];
            acc += c * f(&y)?;
        }
        y[i] = x[i];
        grad[i] = acc / (12.0 * h[i]);
    }
    Ok(grad)
}

/// Real Hessian of `f` at `x`.
pub fn real_hessian<F>(mut f: F, x: &[f64], step: f64) -> Result<DMatrix<f64>>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    check_step(step)?;
    let n = x.len();
    let h = widths(x, step);
    let mut y = x.to_vec();
    let mut out = DMatrix::zeros(n, n);
    for i in 0..n {
        let mut acc = 0.0;
        for &(o, c) in &D2 {
            y[i] = x[i] + o * h[i];
            acc += c * f(&y)?;
        }
        y[i] = x[i];
        out[(i, i)] = acc / (12.0 * h[i] * h[i]);
        for j in 0..i {
            let mut acc = 0.0;
            for &(oi, ci) in &D1 {
                y[i] = x[i] + oi * h[i];
                for &(oj, cj) in &D1 {
                    y[j] = x[j] + oj * h[j];
                    acc += ci * cj * f(&y)?;
                }
                y[j] = x[j];
            }
            y[i] = x[i];
            let v = acc / (144.0 * h[i] * h[j]);
            out[(i, j)] = v;
            out[(j, i)] = v;
        }
    }
    Ok(out)
}

/// `∂_j∂_{k̄} f = ¼[(f_{x_j x_k} + f_{y_j y_k}) + i(f_{x_j y_k} − f_{y_j x_k})]`.
pub fn complex_from_real(hess: &DMatrix<f64>) -> HermitianForm {
    let n = hess.nrows() / 2;
    let m = DMatrix::from_fn(n, n, |j, k| {
        let (xj, yj, xk, yk) = (2 * j, 2 * j + 1, 2 * k, 2 * k + 1);
        C64::new(
            0.25 * (hess[(xj, xk)] + hess[(yj, yk)]),
            0.25 * (hess[(xj, yk)] - hess[(yj, xk)]),
        )
    });
    HermitianForm::from_matrix(m)
}

/// Complex Hessian of a fallible real function of real coordinates.
pub fn try_complex_hessian<F>(f: F, x: &[f64], step: f64) -> Result<HermitianForm>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    if !x.len().is_multiple_of(2) {
        return Err(Error::Domain("real coordinates come in pairs".into()));
    }
    Ok(complex_from_real(&real_hessian(f, x, step)?))
}

/// Complex Hessian `∂_j∂_{k̄} f` of a real function of real coordinates.
pub fn complex_hessian<F>(f: F, x: &[f64], step: f64) -> Result<HermitianForm>
where
    F: Fn(&[f64]) -> f64,
{
    try_complex_hessian(|y| Ok(f(y)), x, step)
}

/// `∂_j f = ½(f_{x_j} − i f_{y_j})`.
pub fn complex_gradient<F>(f: F, x: &[f64], step: f64) -> Result<Vec<C64>>
where
    F: Fn(&[f64]) -> f64,
{
    let g = real_gradient(|y| Ok(f(y)), x, step)?;
    Ok(g.chunks(2)
        .map(|p| C64::new(0.5 * p[0], -0.5 * p[1]))
        .collect())
}
