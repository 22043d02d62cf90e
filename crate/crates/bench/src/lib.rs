//! Shared fixtures for the criterion benches.

use flagcy_core::geometry::{ChartPoint, C64};
use flagcy_core::{Anchor, FlagFamily, InvariantFormClass, Method, PotentialModel, PotentialSpec};

/// A solved model for `family` with simple-root parameters `b`.
pub fn model(family: FlagFamily, b: &[f64], method: Method) -> PotentialModel {
    let class = InvariantFormClass::new(family, b).expect("valid class");
    let spec = PotentialSpec::from_class(&class, 1.0, Anchor::V0(1.0)).expect("valid spec");
    PotentialModel::new(spec, method).expect("method applies")
}

/// A generic chart point away from the coordinate axes.
pub fn point(family: FlagFamily) -> ChartPoint {
    let z: Vec<C64> = (0..family.dim())
        .map(|i| C64::new(0.4 - 0.3 * i as f64, 0.7 + 0.2 * i as f64))
        .collect();
    ChartPoint::new(family, &z, C64::new(1.3, -0.6)).expect("valid point")
}
