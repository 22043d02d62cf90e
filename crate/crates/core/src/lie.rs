//! Root-system data for the implemented flag varieties.
//!
//! Each family is `G/B` for a product of `A1` factors or for `A2`, so the
//! parabolic is always the Borel (`S_p = ∅`) and every positive root is a
//! tangent direction of the base. Weights are stored in the
//! fundamental-weight basis.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::FlagFamily;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RootSystemLabel {
    A1,
    A1xA1,
    A1xA1xA1,
    A2,
}

impl RootSystemLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            RootSystemLabel::A1 => "A1",
            RootSystemLabel::A1xA1 => "A1xA1",
            RootSystemLabel::A1xA1xA1 => "A1xA1xA1",
            RootSystemLabel::A2 => "A2",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "A1" => Ok(RootSystemLabel::A1),
            "A1xA1" => Ok(RootSystemLabel::A1xA1),
            "A1xA1xA1" => Ok(RootSystemLabel::A1xA1xA1),
            "A2" => Ok(RootSystemLabel::A2),
            other => Err(Error::UnsupportedFamily(other.to_string())),
        }
    }
}

/// Positive roots and their coroot pairings with the fundamental weights.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootSystemData {
    pub label: RootSystemLabel,
    /// Cartan matrix `A[i][j] = <α_j, α̌_i>`.
    pub cartan: Vec<Vec<i64>>,
    /// Positive roots as coefficient vectors over the simple roots.
    pub positive_roots: Vec<Vec<i64>>,
    /// `coroot_pairing[i][k] = ϖ_i(β̌_k)` for fundamental weight `i` and
    /// positive root `k`.
    pub coroot_pairing: Vec<Vec<i64>>,
}

impl RootSystemData {
    pub fn for_label(label: RootSystemLabel) -> Self {
        match label {
            RootSystemLabel::A1 => Self::a1_power(label, 1),
            RootSystemLabel::A1xA1 => Self::a1_power(label, 2),
            RootSystemLabel::A1xA1xA1 => Self::a1_power(label, 3),
            RootSystemLabel::A2 => RootSystemData {
                label,
                cartan: vec![vec![2, -1], vec![-1, 2]],
                positive_roots: vec![vec![1, 0], vec![0, 1], vec![1, 1]],
                // (α1+α2)ˇ = α̌1 + α̌2 since A2 is simply laced.
                coroot_pairing: vec![vec![1, 0, 1], vec![0, 1, 1]],
            },
        }
    }

    fn a1_power(label: RootSystemLabel, k: usize) -> Self {
        let unit = |i: usize| (0..k).map(|j| i64::from(i == j)).collect::<Vec<_>>();
        let cartan = (0..k)
            .map(|i| (0..k).map(|j| if i == j { 2 } else { 0 }).collect())
            .collect();
        RootSystemData {
            label,
            cartan,
            positive_roots: (0..k).map(unit).collect(),
            coroot_pairing: (0..k).map(unit).collect(),
        }
    }

    pub fn for_family(family: FlagFamily) -> Self {
        Self::for_label(label_of(family))
    }

    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    /// Converts a root given over the simple roots to fundamental-weight
    /// coordinates.
    pub fn root_to_weight(&self, root: &[i64]) -> Vec<i64> {
        (0..self.rank())
            .map(|i| root.iter().zip(&self.cartan[i]).map(|(n, a)| n * a).sum())
            .collect()
    }
}

pub fn label_of(family: FlagFamily) -> RootSystemLabel {
    match family {
        FlagFamily::Cp1 => RootSystemLabel::A1,
        FlagFamily::Cp1xcp1 => RootSystemLabel::A1xA1,
        FlagFamily::Cp1cubed => RootSystemLabel::A1xA1xA1,
        FlagFamily::F12 => RootSystemLabel::A2,
    }
}

/// A parabolic subalgebra, given by the simple roots `S_p` it contains.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParabolicData {
    pub s_p: Vec<usize>,
    /// Indices into `positive_roots` of `Δ⁺ ∖ ⟨S_p⟩`.
    pub complement_roots: Vec<usize>,
}

impl ParabolicData {
    /// The Borel subalgebra: `S_p = ∅`, so every positive root is in the
    /// complement.
    pub fn borel(roots: &RootSystemData) -> Self {
        ParabolicData {
            s_p: Vec::new(),
            complement_roots: (0..roots.positive_roots.len()).collect(),
        }
    }
}

/// `δ_P`, the sum of the complement roots, in fundamental-weight coordinates.
pub fn delta_p(roots: &RootSystemData, parabolic: &ParabolicData) -> Result<Vec<i64>> {
    if !parabolic.s_p.is_empty() {
        return Err(Error::UnsupportedFamily(format!(
            "{} with S_p = {:?}",
            roots.label.as_str(),
            parabolic.s_p
        )));
    }
    let mut sum = vec![0i64; roots.rank()];
    for &k in &parabolic.complement_roots {
        let beta = roots
            .positive_roots
            .get(k)
            .ok_or_else(|| Error::Domain(format!("complement root index {k} out of range")))?;
        for (s, b) in sum.iter_mut().zip(beta) {
            *s += b;
        }
    }
    Ok(roots.root_to_weight(&sum))
}

fn check_arity(family: FlagFamily, b_simple: &[f64]) -> Result<()> {
    if b_simple.len() != family.rank() {
        return Err(Error::Arity {
            expected: family.rank(),
            got: b_simple.len(),
        });
    }
    Ok(())
}

/// Eigenvalues of an invariant `(1,1)`-form relative to the Kähler-Einstein
/// form, one per complement root.
///
/// The form with simple-root parameters `b` has eigenvalue
/// `Σ c_i ϖ_i(β̌) / Σ d_i ϖ_i(β̌)` on the root `β`, where `d = δ_P` and
/// `c_i = b_i d_i`, so that the simple roots recover `b` itself.
pub fn relative_eigenvalues(family: FlagFamily, b_simple: &[f64]) -> Result<Vec<f64>> {
    check_arity(family, b_simple)?;
    if let Some(bad) = b_simple.iter().find(|b| !(**b >= 0.0) || !b.is_finite()) {
        return Err(Error::Domain(format!(
            "class parameters must be finite and nonnegative, got {bad}"
        )));
    }
    let roots = RootSystemData::for_family(family);
    let parabolic = ParabolicData::borel(&roots);
    let d = delta_p(&roots, &parabolic)?;
    let eigs = parabolic
        .complement_roots
        .iter()
        .map(|&k| {
            let (num, den) = (0..roots.rank()).fold((0.0, 0.0), |(num, den), i| {
                let pairing = roots.coroot_pairing[i][k] as f64;
                let di = d[i] as f64;
                (num + b_simple[i] * di * pairing, den + di * pairing)
            });
            num / den
        })
        .collect();
    Ok(eigs)
}

/// Human-readable form of the eigenvalue list, e.g. `b1, b2, (b1+b2)/2`.
pub fn eigenvalue_template(family: FlagFamily) -> String {
    let roots = RootSystemData::for_family(family);
    let parabolic = ParabolicData::borel(&roots);
    let d = delta_p(&roots, &parabolic).expect("Borel parabolic");
    parabolic
        .complement_roots
        .iter()
        .map(|&k| {
            let terms: Vec<usize> = (0..roots.rank())
                .filter(|&i| roots.coroot_pairing[i][k] != 0)
                .collect();
            let den: i64 = (0..roots.rank())
                .map(|i| d[i] * roots.coroot_pairing[i][k])
                .sum();
            // Every family has δ_P with equal coefficients, so the weights
            // collapse to an average over the simple roots that pair with β.
            if terms.len() == 1 {
                format!("b{}", terms[0] + 1)
            } else {
                let sum = terms
                    .iter()
                    .map(|i| format!("b{}", i + 1))
                    .collect::<Vec<_>>()
                    .join("+");
                format!("({sum})/{}", den / d[terms[0]])
            }
        })
        .collect::<Vec<_>>()
        .join(", ")
}

/// Elementary symmetric functions `σ_0 = 1, σ_1, ..., σ_m` of `eigs`.
pub fn symmetric_functions(eigs: &[f64]) -> Vec<f64> {
    let mut sigma = vec![0.0; eigs.len() + 1];
    sigma[0] = 1.0;
    for (n, &b) in eigs.iter().enumerate() {
        for k in (1..=n + 1).rev() {
            sigma[k] += b * sigma[k - 1];
        }
    }
    sigma
}

/// Dimension of the irreducible `A2` representation with highest weight
/// `m1 ϖ_1 + m2 ϖ_2`.
pub fn weyl_dim_a2(m1: u64, m2: u64) -> u64 {
    (m1 + 1) * (m2 + 1) * (m1 + m2 + 2) / 2
}

/// The variant `½(m1+1)(m2+1)(m1+m2+1)` with the last factor off by one.
/// Kept only to show that it is not a dimension: `(2,2) ↦ 22.5`.
pub fn weyl_dim_a2_misprint(m1: u64, m2: u64) -> f64 {
    0.5 * ((m1 + 1) * (m2 + 1) * (m1 + m2 + 1)) as f64
}

/// Membership of the simple-root parameters in the (open) Kähler cone.
pub fn kahler_cone_contains(family: FlagFamily, b_simple: &[f64]) -> Result<bool> {
    check_arity(family, b_simple)?;
    Ok(b_simple.iter().all(|&b| b > 0.0))
}

/// A `G`-invariant semi-positive class: simple-root parameters plus the
/// derived relative eigenvalues and their symmetric functions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantFormClass {
    pub family: Option<FlagFamily>,
    pub simple: Vec<f64>,
    pub eigenvalues: Vec<f64>,
    pub sigma: Vec<f64>,
}

impl InvariantFormClass {
    pub fn new(family: FlagFamily, b_simple: &[f64]) -> Result<Self> {
        let eigenvalues = relative_eigenvalues(family, b_simple)?;
        let sigma = symmetric_functions(&eigenvalues);
        Ok(InvariantFormClass {
            family: Some(family),
            simple: b_simple.to_vec(),
            eigenvalues,
            sigma,
        })
    }

    /// A class known only through its eigenvalues.
    pub fn from_eigenvalues(eigs: &[f64]) -> Result<Self> {
        if let Some(bad) = eigs.iter().find(|b| !(**b >= 0.0) || !b.is_finite()) {
            return Err(Error::Domain(format!("negative eigenvalue {bad}")));
        }
        Ok(InvariantFormClass {
            family: None,
            simple: eigs.to_vec(),
            eigenvalues: eigs.to_vec(),
            sigma: symmetric_functions(eigs),
        })
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_kahler(&self) -> bool {
        self.simple.iter().all(|&b| b > 0.0)
    }

    /// True when all eigenvalues coincide, i.e. `Θ` is a multiple of `ω`
    /// and the total class is proportional to the anticanonical class.
    pub fn is_compact_type(&self) -> bool {
        self.eigenvalues.windows(2).all(|w| w[0] == w[1])
    }
}
