//! The implemented base manifolds.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// A flag variety `Z = G/P` with `P` a Borel subgroup, one of the four
/// families that have explicit chart formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FlagFamily {
    /// `CP¹`, root system `A1`.
    Cp1,
    /// `CP¹ × CP¹`, root system `A1 × A1`.
    Cp1xcp1,
    /// `CP¹ × CP¹ × CP¹`, root system `A1 × A1 × A1`.
    Cp1cubed,
    /// The full flag manifold `F₁,₂ = SU(3)/T²`, root system `A2`.
    F12,
}

impl FlagFamily {
    pub const ALL: [FlagFamily; 4] = [
        FlagFamily::Cp1,
        FlagFamily::Cp1xcp1,
        FlagFamily::Cp1cubed,
        FlagFamily::F12,
    ];

    /// Complex dimension of the base.
    pub fn dim(self) -> usize {
        match self {
            FlagFamily::Cp1 => 1,
            FlagFamily::Cp1xcp1 => 2,
            FlagFamily::Cp1cubed | FlagFamily::F12 => 3,
        }
    }

    /// Number of simple roots, i.e. the dimension of the Kähler cone.
    pub fn rank(self) -> usize {
        match self {
            FlagFamily::Cp1 => 1,
            FlagFamily::Cp1xcp1 | FlagFamily::F12 => 2,
            FlagFamily::Cp1cubed => 3,
        }
    }

    /// True for the products of `CP¹`.
    pub fn is_product(self) -> bool {
        !matches!(self, FlagFamily::F12)
    }

    pub fn name(self) -> &'static str {
        match self {
            FlagFamily::Cp1 => "cp1",
            FlagFamily::Cp1xcp1 => "cp1xcp1",
            FlagFamily::Cp1cubed => "cp1cubed",
            FlagFamily::F12 => "f12",
        }
    }

    pub fn pretty(self) -> &'static str {
        match self {
            FlagFamily::Cp1 => "CP1",
            FlagFamily::Cp1xcp1 => "CP1 x CP1",
            FlagFamily::Cp1cubed => "CP1 x CP1 x CP1",
            FlagFamily::F12 => "F12 = SU(3)/T2",
        }
    }
}

impl fmt::Display for FlagFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FlagFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "cp1" => Ok(FlagFamily::Cp1),
            "cp1xcp1" => Ok(FlagFamily::Cp1xcp1),
            "cp1cubed" => Ok(FlagFamily::Cp1cubed),
            "f12" => Ok(FlagFamily::F12),
            other => Err(Error::UnsupportedFamily(other.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_roundtrip() {
        for fam in FlagFamily::ALL {
            assert_eq!(fam.name().parse::<FlagFamily>().unwrap(), fam);
        }
        assert!(matches!(
            "cp2".parse::<FlagFamily>(),
            Err(Error::UnsupportedFamily(_))
        ));
    }

    #[test]
    fn dimensions() {
        let dims: Vec<_> = FlagFamily::ALL.iter().map(|f| f.dim()).collect();
        assert_eq!(dims, vec![1, 2, 3, 3]);
        let ranks: Vec<_> = FlagFamily::ALL.iter().map(|f| f.rank()).collect();
        assert_eq!(ranks, vec![1, 2, 3, 2]);
    }
}
