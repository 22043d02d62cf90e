//! Explicit asymptotically conical Calabi–Yau metrics on the canonical
//! bundle of the flag varieties `CP¹`, `CP¹ × CP¹`, `(CP¹)³` and `F₁,₂`.
//!
//! The metric is the Calabi ansatz
//!
//! ```text
//! ω̂ = Θ + V(ρ) ω + 2 V'(ρ) i∂r ∧ ∂̄r,        ρ = r²,
//! ```
//!
//! over the Kähler–Einstein base `(Z, ω)` with `Ric_ω = 2ω`, where `Θ` is a
//! semi-positive invariant form with eigenvalues `b_j` relative to `ω` and
//! `V` solves `V' ∏ (V + b_j) = C`.
//!
//! - [`lie`]: root data, eigenvalues of invariant forms, Kähler cone.
//! - [`potential`]: the radial potential, closed forms and Puiseux series.
//! - [`geometry`]: chart formulas, metric assembly, Ricci curvature.
//! - [`verify`]: residual checks, decay-rate fits and reports.

pub mod error;
pub mod family;
pub mod geometry;
pub mod lie;
pub mod potential;
pub mod verify;

pub use error::{Error, Result};
pub use family::FlagFamily;
pub use geometry::{ChartPoint, HermitianForm, MetricKind, MetricSample};
pub use lie::{InvariantFormClass, ParabolicData, RootSystemData};
pub use potential::{
    Anchor, Method, PotentialModel, PotentialSpec, PuiseuxExpansion, RadialProfile,
};
pub use verify::VerificationReport;
