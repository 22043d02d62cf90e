//! The radial potential `V(ρ)`.
//!
//! Ricci-flatness of the ansatz reduces to `V'(ρ) ∏ (V + b_j) = C`, whose
//! integral is the master polynomial equation
//!
//! ```text
//! P(V) = Σ_{k=0}^{m} V^{k+1} σ_{m-k} / (k+1) = Cρ + C0.
//! ```
//!
//! `P` is strictly increasing on `[0, ∞)` when every `σ_k ≥ 0`, so `V` is the
//! unique nonnegative root. The closed forms in [`radicals`] solve the same
//! equation multiplied through by `m + 1`; we always pass them
//! `f = (m+1)(Cρ + C0)`.

pub mod asymptotics;
pub mod puiseux;
pub mod radicals;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::FlagFamily;
use crate::lie::InvariantFormClass;

pub use asymptotics::{cone_offsets, ConeOffsets};
pub use puiseux::{puiseux_expand, PuiseuxExpansion};
pub use radicals::{cardano_v, f12_v, f12_v_printed, quartic_v};

/// How `C0` is fixed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Anchor {
    /// Prescribe `V(0) = V0 > 0`; then `C0 = P(V0)`.
    V0(f64),
    /// Prescribe the integration constant directly.
    C0(f64),
}

/// Parameters of the radial ODE.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialSpec {
    pub m: usize,
    pub sigma: Vec<f64>,
    pub c: f64,
    pub c0: f64,
    pub v0: Option<f64>,
    /// The class the `σ_k` came from, when known.
    pub class: Option<InvariantFormClass>,
}

fn validate_sigma(sigma: &[f64]) -> Result<()> {
    if sigma.len() < 2 {
        return Err(Error::Domain("need at least sigma_0 and sigma_1".into()));
    }
    if sigma[0] != 1.0 {
        return Err(Error::Domain(format!(
            "sigma_0 must be 1, got {}",
            sigma[0]
        )));
    }
    if let Some(bad) = sigma.iter().find(|s| !(**s >= 0.0) || !s.is_finite()) {
        return Err(Error::Domain(format!(
            "sigma_k must be nonnegative, got {bad}"
        )));
    }
    Ok(())
}

impl PotentialSpec {
    pub fn new(sigma: Vec<f64>, c: f64, c0: f64) -> Result<Self> {
        validate_sigma(&sigma)?;
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::Domain(format!("C must be positive, got {c}")));
        }
        if !c0.is_finite() {
            return Err(Error::Domain(format!("C0 must be finite, got {c0}")));
        }
        Ok(PotentialSpec {
            m: sigma.len() - 1,
            sigma,
            c,
            c0,
            v0: None,
            class: None,
        })
    }

    /// Spec with `C0` derived from the anchor value `V(0) = v0`.
    pub fn anchored(sigma: Vec<f64>, c: f64, v0: f64) -> Result<Self> {
        validate_sigma(&sigma)?;
        let c0 = choose_c0(&sigma, v0)?;
        let mut spec = Self::new(sigma, c, c0)?;
        spec.v0 = Some(v0);
        Ok(spec)
    }

    pub fn from_class(class: &InvariantFormClass, c: f64, anchor: Anchor) -> Result<Self> {
        let mut spec = match anchor {
            Anchor::V0(v0) => Self::anchored(class.sigma.clone(), c, v0)?,
            Anchor::C0(c0) => Self::new(class.sigma.clone(), c, c0)?,
        };
        spec.class = Some(class.clone());
        Ok(spec)
    }

    pub fn with_c(&self, c: f64) -> Result<Self> {
        let mut out = Self::new(self.sigma.clone(), c, self.c0)?;
        out.v0 = self.v0;
        out.class = self.class.clone();
        Ok(out)
    }

    /// `Cρ + C0`.
    pub fn target(&self, rho: f64) -> f64 {
        self.c * rho + self.c0
    }

    /// `f = (m+1)(Cρ + C0)`, the constant term handed to the closed forms.
    pub fn closed_form_constant(&self, rho: f64) -> f64 {
        (self.m as f64 + 1.0) * self.target(rho)
    }

    /// `∏ (V + b_j) = Σ_k V^k σ_{m-k}`.
    pub fn product(&self, v: f64) -> f64 {
        let m = self.m;
        (0..=m)
            .rev()
            .fold(0.0, |acc, k| acc * v + self.sigma[m - k])
    }

    /// `c_{-1} = ((m+1) C)^{1/(m+1)}`, the cone scale of `V`.
    pub fn leading_coefficient(&self) -> f64 {
        let n = self.m as f64 + 1.0;
        (n * self.c).powf(1.0 / n)
    }
}

/// `P(V) = Σ_{k=0}^{m} V^{k+1} σ_{m-k} / (k+1)`.
pub fn master_polynomial(spec: &PotentialSpec, v: f64) -> f64 {
    master_polynomial_sigma(&spec.sigma, v)
}

fn master_polynomial_sigma(sigma: &[f64], v: f64) -> f64 {
    let m = sigma.len() - 1;
    (0..=m)
        .rev()
        .fold(0.0, |acc, k| acc * v + sigma[m - k] / (k as f64 + 1.0))
        * v
}

/// The integration constant giving `V(0) = v0`.
pub fn choose_c0(sigma: &[f64], v0: f64) -> Result<f64> {
    if !(v0 > 0.0) || !v0.is_finite() {
        return Err(Error::Domain(format!("V0 must be positive, got {v0}")));
    }
    Ok(master_polynomial_sigma(sigma, v0))
}

/// The nonnegative root of `P(V) = Cρ + C0`.
///
/// Brackets the root in `[0, V_hi]` with
/// `V_hi = ((m+1)(Cρ+C0))^{1/(m+1)} + σ_1` (valid because
/// `P(V) ≥ V^{m+1}/(m+1)`), then runs Newton from the right end. `P` is
/// increasing and convex there, so the iterates decrease monotonically; a
/// bisection fallback keeps every iterate inside the bracket regardless.
pub fn solve_v(spec: &PotentialSpec, rho: f64) -> Result<f64> {
    if !rho.is_finite() {
        return Err(Error::Domain(format!("rho must be finite, got {rho}")));
    }
    let target = spec.target(rho);
    if target < 0.0 {
        return Err(Error::NoPositiveRoot(target));
    }
    if target == 0.0 {
        return Ok(0.0);
    }
    let n = spec.m as f64 + 1.0;
    let mut lo = 0.0;
    let mut hi = (n * target).powf(1.0 / n) + spec.sigma[1];
    let mut v = hi;
    for _ in 0..200 {
        let g = master_polynomial(spec, v) - target;
        if g == 0.0 {
            return Ok(v);
        }
        if g > 0.0 {
            hi = v;
        } else {
            lo = v;
        }
        let dg = spec.product(v);
        let mut next = v - g / dg;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - v).abs() <= 2.0 * f64::EPSILON * v.abs() || hi - lo <= f64::EPSILON * hi {
            return Ok(next);
        }
        v = next;
    }
    Ok(v)
}

/// `V'(ρ) = C / ∏ (V + b_j)`.
pub fn dv_drho(spec: &PotentialSpec, v: f64) -> Result<f64> {
    let prod = spec.product(v);
    if prod == 0.0 || !prod.is_finite() {
        return Err(Error::SingularDerivative(v));
    }
    Ok(spec.c / prod)
}

/// The potential for `Θ = 0`: `V = ((m+1)(Cρ + C0))^{1/(m+1)}`.
pub fn compact_class_v(m: usize, c: f64, c0: f64, rho: f64) -> Result<f64> {
    let target = c * rho + c0;
    if target < 0.0 {
        return Err(Error::NoPositiveRoot(target));
    }
    let n = m as f64 + 1.0;
    Ok((n * target).powf(1.0 / n))
}

/// Solver used to evaluate `V(ρ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Numeric,
    CompactClosedForm,
    Cardano,
    QuarticResolvent,
    F12ClosedForm,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Numeric,
        Method::CompactClosedForm,
        Method::Cardano,
        Method::QuarticResolvent,
        Method::F12ClosedForm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Numeric => "numeric",
            Method::CompactClosedForm => "compact_closed_form",
            Method::Cardano => "cardano",
            Method::QuarticResolvent => "quartic_resolvent",
            Method::F12ClosedForm => "f12_closed_form",
        }
    }

    /// The radical formula for the family, falling back to the numeric
    /// solver where none exists (`CP¹` with `Θ ≠ 0`).
    pub fn auto_for(family: FlagFamily, class: &InvariantFormClass) -> Method {
        if class.sigma[1..].iter().all(|&s| s == 0.0) {
            return Method::CompactClosedForm;
        }
        match family {
            FlagFamily::Cp1 => Method::Numeric,
            FlagFamily::Cp1xcp1 => Method::Cardano,
            FlagFamily::Cp1cubed => Method::QuarticResolvent,
            FlagFamily::F12 => Method::F12ClosedForm,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown method {s:?}")))
    }
}

/// Anything that supplies `V(ρ)` and `V'(ρ)` to the metric assembly.
pub trait RadialProfile {
    fn value(&self, rho: f64) -> Result<f64>;

    fn derivative(&self, rho: f64) -> Result<f64>;

    fn eval(&self, rho: f64) -> Result<(f64, f64)> {
        Ok((self.value(rho)?, self.derivative(rho)?))
    }
}

/// A solved potential: a spec plus the method used to evaluate it.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialModel {
    pub spec: PotentialSpec,
    pub method: Method,
}

impl PotentialModel {
    pub fn new(spec: PotentialSpec, method: Method) -> Result<Self> {
        let mismatch = |reason: String| Error::MethodMismatch {
            method: method.name(),
            reason,
        };
        match method {
            Method::Numeric => {}
            Method::CompactClosedForm => {
                if spec.sigma[1..].iter().any(|&s| s != 0.0) {
                    return Err(mismatch("requires Theta = 0".into()));
                }
            }
            Method::Cardano => {
                if spec.m != 2 {
                    return Err(mismatch(format!("requires m = 2, got {}", spec.m)));
                }
            }
            Method::QuarticResolvent => {
                if spec.m != 3 {
                    return Err(mismatch(format!("requires m = 3, got {}", spec.m)));
                }
            }
            Method::F12ClosedForm => match &spec.class {
                Some(class) if class.family == Some(FlagFamily::F12) => {}
                _ => return Err(mismatch("requires an F12 class".into())),
            },
        }
        Ok(PotentialModel { spec, method })
    }

    pub fn m(&self) -> usize {
        self.spec.m
    }

    pub fn with_method(&self, method: Method) -> Result<Self> {
        Self::new(self.spec.clone(), method)
    }
}

impl RadialProfile for PotentialModel {
    fn value(&self, rho: f64) -> Result<f64> {
        let spec = &self.spec;
        let s = &spec.sigma;
        match self.method {
            Method::Numeric => solve_v(spec, rho),
            Method::CompactClosedForm => compact_class_v(spec.m, spec.c, spec.c0, rho),
            Method::Cardano => radicals::cardano_sigma(s[1], s[2], spec.closed_form_constant(rho)),
            Method::QuarticResolvent => {
                radicals::quartic_v(s[1], s[2], s[3], spec.closed_form_constant(rho))
            }
            Method::F12ClosedForm => {
                let b = &spec.class.as_ref().expect("checked in new").simple;
                radicals::f12_v(b[0], b[1], spec.closed_form_constant(rho))
            }
        }
    }

    fn derivative(&self, rho: f64) -> Result<f64> {
        dv_drho(&self.spec, self.value(rho)?)
    }

    fn eval(&self, rho: f64) -> Result<(f64, f64)> {
        let v = self.value(rho)?;
        Ok((v, dv_drho(&self.spec, v)?))
    }
}

/// `V + offset` with the unperturbed `V'`; a negative control that no
/// longer solves the Monge–Ampère equation.
#[derive(Debug, Clone)]
pub struct Perturbed<P> {
    pub inner: P,
    pub offset: f64,
}

impl<P: RadialProfile> RadialProfile for Perturbed<P> {
    fn value(&self, rho: f64) -> Result<f64> {
        Ok(self.inner.value(rho)? + self.offset)
    }

    fn derivative(&self, rho: f64) -> Result<f64> {
        self.inner.derivative(rho)
    }
}

/// A constant profile, `V ≡ value`, `V' ≡ 0`.
#[derive(Debug, Clone, Copy)]
pub struct Frozen(pub f64);

impl RadialProfile for Frozen {
    fn value(&self, _rho: f64) -> Result<f64> {
        Ok(self.0)
    }

    fn derivative(&self, _rho: f64) -> Result<f64> {
        Ok(0.0)
    }
}
