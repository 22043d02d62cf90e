//! The job description shared by every subcommand.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use flagcy_core::verify::RaySpec;
use flagcy_core::{Anchor, FlagFamily, InvariantFormClass, Method, PotentialModel, PotentialSpec};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Environment variable that multiplies every residual tolerance.
pub const TOL_SCALE_VAR: &str = "FLAGCY_TOL_SCALE";

/// A potential method, or `auto` for the radical formula of the family.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum MethodChoice {
    #[default]
    Auto,
    Fixed(Method),
}

impl MethodChoice {
    pub fn resolve(self, family: FlagFamily, class: &InvariantFormClass) -> Method {
        match self {
            MethodChoice::Auto => Method::auto_for(family, class),
            MethodChoice::Fixed(m) => m,
        }
    }

    pub fn as_option(self) -> Option<Method> {
        match self {
            MethodChoice::Auto => None,
            MethodChoice::Fixed(m) => Some(m),
        }
    }
}

impl fmt::Display for MethodChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MethodChoice::Auto => f.write_str("auto"),
            MethodChoice::Fixed(m) => f.write_str(m.name()),
        }
    }
}

impl FromStr for MethodChoice {
    type Err = flagcy_core::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "auto" {
            Ok(MethodChoice::Auto)
        } else {
            s.parse().map(MethodChoice::Fixed)
        }
    }
}

impl TryFrom<String> for MethodChoice {
    type Error = flagcy_core::Error;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<MethodChoice> for String {
    fn from(m: MethodChoice) -> String {
        m.to_string()
    }
}

fn one() -> f64 {
    1.0
}

fn default_samples() -> usize {
    20
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub family: FlagFamily,
    /// Simple-root parameters; the remaining eigenvalues are derived.
    pub b: Vec<f64>,
    #[serde(rename = "C", default = "one")]
    pub c: f64,
    /// `V(0)`; defaults to 1 when neither anchor is given.
    #[serde(rename = "V0", default, skip_serializing_if = "Option::is_none")]
    pub v0: Option<f64>,
    #[serde(rename = "C0", default, skip_serializing_if = "Option::is_none")]
    pub c0: Option<f64>,
    #[serde(default)]
    pub method: MethodChoice,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ray: Option<RaySpec>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    /// `ρ` rows for `solve`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<Vec<f64>>,
    /// Shift of `V` in the Ricci check; a negative control for `verify`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perturb_v: Option<f64>,
}

impl JobConfig {
    pub fn new(family: FlagFamily, b: Vec<f64>) -> Self {
        JobConfig {
            family,
            b,
            c: 1.0,
            v0: None,
            c0: None,
            method: MethodChoice::Auto,
            samples: default_samples(),
            ray: None,
            seed: 0,
            output: None,
            rho: None,
            perturb_v: None,
        }
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn anchor(&self) -> Anchor {
        match (self.v0, self.c0) {
            (_, Some(c0)) => Anchor::C0(c0),
            (Some(v0), None) => Anchor::V0(v0),
            (None, None) => Anchor::V0(1.0),
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Config(msg));
        if self.b.len() != self.family.rank() {
            return bad(format!(
                "{} takes {} simple-root parameters, got {}",
                self.family,
                self.family.rank(),
                self.b.len()
            ));
        }
        if !(self.c > 0.0) || !self.c.is_finite() {
            return bad(format!("C must be positive, got {}", self.c));
        }
        match (self.v0, self.c0) {
            (Some(_), Some(_)) => return bad("give V0 or C0, not both".into()),
            (Some(v0), None) if !(v0 > 0.0) || !v0.is_finite() => {
                return bad(format!("V0 must be positive, got {v0}"))
            }
            (None, Some(c0)) if !c0.is_finite() => {
                return bad(format!("C0 must be finite, got {c0}"))
            }
            _ => {}
        }
        if self.samples == 0 {
            return bad("samples must be at least 1".into());
        }
        if let Some(rho) = &self.rho {
            if let Some(r) = rho.iter().find(|r| !(**r >= 0.0) || !r.is_finite()) {
                return bad(format!(
                    "rho values must be finite and non-negative, got {r}"
                ));
            }
        }
        if let Some(p) = self.perturb_v {
            if !p.is_finite() {
                return bad(format!("perturb_v must be finite, got {p}"));
            }
        }
        self.class()?;
        Ok(())
    }

    pub fn class(&self) -> Result<InvariantFormClass, CliError> {
        Ok(InvariantFormClass::new(self.family, &self.b)?)
    }

    pub fn spec(&self) -> Result<PotentialSpec, CliError> {
        Ok(PotentialSpec::from_class(
            &self.class()?,
            self.c,
            self.anchor(),
        )?)
    }

    pub fn model(&self) -> Result<PotentialModel, CliError> {
        let class = self.class()?;
        let method = self.method.resolve(self.family, &class);
        Ok(PotentialModel::new(self.spec()?, method)?)
    }

    pub fn ray_or_default(&self) -> RaySpec {
        self.ray
            .clone()
            .unwrap_or_else(|| RaySpec::default_for(self.family))
    }
}

/// `{0} ∪ logspace(10⁻², 10⁶, 33)`.
pub fn default_rho_grid() -> Vec<f64> {
    std::iter::once(0.0)
        .chain((0..33).map(|i| 10f64.powf(-2.0 + 8.0 * i as f64 / 32.0)))
        .collect()
}

/// Multiplier for residual tolerances from [`TOL_SCALE_VAR`], default 1.
pub fn tolerance_scale() -> Result<f64, CliError> {
    match std::env::var(TOL_SCALE_VAR) {
        Err(std::env::VarError::NotPresent) => Ok(1.0),
        Err(e) => Err(CliError::Config(format!("{TOL_SCALE_VAR}: {e}"))),
        Ok(s) => match s.trim().parse::<f64>() {
            Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
            _ => Err(CliError::Config(format!(
                "{TOL_SCALE_VAR} must be a positive number, got {s:?}"
            ))),
        },
    }
}
