//! Dimensions of `A2` irreducibles from Freudenthal's multiplicity formula.

use std::collections::HashMap;

/// `3 (μ, ν)` for weights in the fundamental-weight basis; the inverse
/// Cartan matrix of `A2` is `⅓ [[2, 1], [1, 2]]`.
fn form3(a: (i64, i64), b: (i64, i64)) -> i64 {
    2 * a.0 * b.0 + a.0 * b.1 + a.1 * b.0 + 2 * a.1 * b.1
}

const POSITIVE_ROOTS: [(i64, i64); 3] = [(2, -1), (-1, 2), (1, 1)];

fn add(a: (i64, i64), b: (i64, i64), k: i64) -> (i64, i64) {
    (a.0 + k * b.0, a.1 + k * b.1)
}

pub fn freudenthal_dim(m1: i64, m2: i64) -> i64 {
    let lambda = (m1, m2);
    let rho = (1, 1);
    let lr = form3(add(lambda, rho, 1), add(lambda, rho, 1));
    let depth = m1 + m2;
    let mut levels: Vec<(i64, i64)> = (0..=depth)
        .flat_map(|n1| (0..=depth).map(move |n2| (n1, n2)))
        .collect();
    levels.sort_by_key(|&(n1, n2)| n1 + n2);

    let mut mult: HashMap<(i64, i64), i64> = HashMap::new();
    mult.insert(lambda, 1);
    for &(n1, n2) in levels.iter().skip(1) {
        // μ = λ − n1 α1 − n2 α2
        let mu = (lambda.0 - 2 * n1 + n2, lambda.1 + n1 - 2 * n2);
        let mr = form3(add(mu, rho, 1), add(mu, rho, 1));
        let den = lr - mr;
        let mut num = 0;
        for alpha in POSITIVE_ROOTS {
            let mut k = 1;
            loop {
                let nu = add(mu, alpha, k);
                if nu.0 + nu.1 > lambda.0 + lambda.1 + 2 * depth {
                    break;
                }
                if let Some(&m) = mult.get(&nu) {
                    num += 2 * m * form3(nu, alpha);
                }
                k += 1;
                if k > 2 * depth + 2 {
                    break;
                }
            }
        }
        if num == 0 {
            continue;
        }
        assert!(den > 0, "non-weight with nonzero numerator at {mu:?}");
        assert_eq!(num % den, 0, "non-integer multiplicity at {mu:?}");
        mult.insert(mu, num / den);
    }
    mult.values().sum()
}
