use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::family::FlagFamily;
use crate::geometry::{ChartPoint, C64};

/// Region of the chart that random points are drawn from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleRegion {
    /// Base coordinates uniform in the polydisc `|z_i| ≤ z_max`.
    pub z_max: f64,
    /// `|w|` log-uniform in this interval, with uniform phase, so that the
    /// zero section and the conical end are sampled alike.
    pub w_min: f64,
    pub w_max: f64,
}

impl Default for SampleRegion {
    fn default() -> Self {
        SampleRegion {
            z_max: 2.0,
            w_min: 0.1,
            w_max: 5.0,
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn disc<R: Rng>(rng: &mut R, radius: f64) -> C64 {
    let r = radius * rng.random::<f64>().sqrt();
    C64::from_polar(r, TAU * rng.random::<f64>())
}

pub fn sample_point<R: Rng>(rng: &mut R, family: FlagFamily, region: &SampleRegion) -> ChartPoint {
    let z: Vec<C64> = (0..family.dim()).map(|_| disc(rng, region.z_max)).collect();
    let modulus = rng
        .random_range(region.w_min.ln()..=region.w_max.ln())
        .exp();
    let w = C64::from_polar(modulus, TAU * rng.random::<f64>());
    ChartPoint::new(family, &z, w).expect("arity matches family")
}

pub fn sample_points(
    family: FlagFamily,
    count: usize,
    region: &SampleRegion,
    seed: u64,
) -> Vec<ChartPoint> {
    let mut rng = rng(seed);
    (0..count)
        .map(|_| sample_point(&mut rng, family, region))
        .collect()
}
