//! Dimensions of `A2` irreducibles from Freudenthal's multiplicity formula,
//! summed over all weights, against the closed product formula.

#[path = "support/freudenthal.rs"]
mod freudenthal;

use flagcy_core::lie::{weyl_dim_a2, weyl_dim_a2_misprint};
use freudenthal::freudenthal_dim;

#[test]
fn freudenthal_agrees_with_product_formula() {
    for m1 in 0..=4u64 {
        for m2 in 0..=4u64 {
            let oracle = freudenthal_dim(m1 as i64, m2 as i64);
            assert_eq!(weyl_dim_a2(m1, m2) as i64, oracle, "({m1},{m2})");
        }
    }
}

#[test]
fn small_representations() {
    assert_eq!(freudenthal_dim(1, 0), 3);
    assert_eq!(freudenthal_dim(1, 1), 8);
    assert_eq!(freudenthal_dim(2, 2), 27);
    assert_eq!(freudenthal_dim(3, 0), 10);
}

#[test]
fn misprinted_formula_is_not_a_dimension() {
    let v = weyl_dim_a2_misprint(2, 2);
    assert_eq!(v, 22.5);
    assert_ne!(v.fract(), 0.0);
}
