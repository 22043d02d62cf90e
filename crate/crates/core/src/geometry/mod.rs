//! Metric tensors in the explicit charts: the Kähler–Einstein base metric,
//! the invariant forms `Θ`, the ansatz metric, the cone metric and Ricci
//! curvature by nested finite differences.

pub mod chart;
pub mod fd;
pub mod form;
pub mod metric;

pub use chart::{
    base_factor, base_factor_gradient, potential_jets, potentials, radial_rho, rho_real,
    ChartPoint, PotentialJet,
};
pub use fd::{complex_gradient, complex_hessian, try_complex_hessian, DEFAULT_STEP, RICCI_STEP};
pub use form::{HermitianForm, C64};
pub use metric::{
    ansatz_metric, ansatz_metric_analytic_real, ansatz_metric_real, assemble_ansatz, base_ke_block,
    base_ke_metric, cone_metric, fiber_vector, flat_cone_metric, metric_deviation, normalized_norm,
    potential_block, potential_block_analytic, ricci_tensor, theta_form,
    theta_relative_eigenvalues, FdSteps, MetricKind, MetricSample,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::FlagFamily;
    use crate::lie::InvariantFormClass;
    use crate::potential::{Anchor, Frozen, Method, PotentialModel, PotentialSpec};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn model(family: FlagFamily, b: &[f64]) -> PotentialModel {
        let class = InvariantFormClass::new(family, b).unwrap();
        let spec = PotentialSpec::from_class(&class, 1.0, Anchor::V0(1.0)).unwrap();
        PotentialModel::new(spec, Method::Numeric).unwrap()
    }

    fn point(family: FlagFamily, z: &[C64], w: C64) -> ChartPoint {
        ChartPoint::new(family, z, w).unwrap()
    }

    #[test]
    fn theta_at_origin() {
        let p = ChartPoint::origin(FlagFamily::Cp1xcp1, c(1.0, 0.0));
        let t = theta_form(FlagFamily::Cp1xcp1, &[1.0, 1.0], &p, DEFAULT_STEP).unwrap();
        let expect = HermitianForm::from_real_diagonal(&[1.0, 1.0, 0.0]);
        assert!(t.sub(&expect).frobenius() < 1e-9);
        let p = ChartPoint::origin(FlagFamily::F12, c(1.0, 0.0));
        let zero = theta_form(FlagFamily::F12, &[0.0, 0.0], &p, DEFAULT_STEP).unwrap();
        assert_eq!(zero.frobenius(), 0.0);
    }

    #[test]
    fn f12_base_metric_at_origin() {
        let p = ChartPoint::origin(FlagFamily::F12, c(1.0, 0.0));
        let g = base_ke_metric(FlagFamily::F12, &p, DEFAULT_STEP).unwrap();
        let expect = HermitianForm::from_real_diagonal(&[1.0, 1.0, 2.0, 0.0]);
        assert!(g.sub(&expect).frobenius() < 1e-9, "{:?}", g);
    }

    #[test]
    fn f12_theta_eigenvalues_are_invariant() {
        let b = [1.0, 2.0];
        let expect = metric::expected_relative_eigenvalues(FlagFamily::F12, &b).unwrap();
        for z in [[c(0.0, 0.0); 3], [c(0.5, -0.2), c(1.1, 0.3), c(-0.4, 0.9)]] {
            let p = point(FlagFamily::F12, &z, c(1.0, 0.0));
            let ev = theta_relative_eigenvalues(FlagFamily::F12, &b, &p, DEFAULT_STEP).unwrap();
            for (a, e) in ev.iter().zip(&expect) {
                assert!((a - e).abs() < 1e-8, "{ev:?} vs {expect:?}");
            }
        }
    }

    #[test]
    fn frozen_profile_gives_theta_plus_v_omega() {
        let fam = FlagFamily::Cp1xcp1;
        let p = point(fam, &[c(0.3, 0.1), c(-0.5, 0.7)], c(1.2, -0.4));
        let g = ansatz_metric(fam, &[0.5, 1.5], &Frozen(2.0), &p, DEFAULT_STEP);
        // V' = 0 degenerates the fiber direction.
        assert!(matches!(g, Err(crate::Error::AssemblyFailure(_))));
        let theta = theta_form(fam, &[0.5, 1.5], &p, DEFAULT_STEP).unwrap();
        let omega = base_ke_metric(fam, &p, DEFAULT_STEP).unwrap();
        let assembled = assemble_ansatz(
            &theta.block(2),
            &omega.block(2),
            2.0,
            0.0,
            &[c(0.0, 0.0); 3],
        );
        assert!(assembled.sub(&theta.add(&omega.scale(2.0))).frobenius() < 1e-15);
    }

    #[test]
    fn analytic_and_fd_paths_agree() {
        for fam in FlagFamily::ALL {
            let b: Vec<f64> = (0..fam.rank()).map(|i| 0.5 + i as f64).collect();
            let m = model(fam, &b);
            let z: Vec<C64> = (0..fam.dim())
                .map(|i| c(0.3 - 0.9 * i as f64, 0.1 + 0.4 * i as f64))
                .collect();
            let p = point(fam, &z, c(1.2, -0.4));
            let fd = ansatz_metric(fam, &b, &m, &p, DEFAULT_STEP).unwrap();
            let an = ansatz_metric_analytic_real(fam, &b, &m, &p.to_real()).unwrap();
            let rel = fd.sub(&an).frobenius() / an.frobenius();
            assert!(rel < 1e-8, "{fam}: {rel}");
            assert!(fd.hermitian_defect() <= 1e-12);
        }
    }

    #[test]
    fn extends_across_zero_section() {
        for fam in FlagFamily::ALL {
            let b = vec![0.7; fam.rank()];
            let m = model(fam, &b);
            let z: Vec<C64> = (0..fam.dim()).map(|i| c(0.3 * i as f64, -0.2)).collect();
            let p = point(fam, &z, c(0.0, 0.0));
            let g = ansatz_metric(fam, &b, &m, &p, DEFAULT_STEP).unwrap();
            assert!(g.min_eigenvalue() > 0.0);
            assert!(g
                .entries
                .iter()
                .all(|e| e.re.is_finite() && e.im.is_finite()));
        }
    }

    #[test]
    fn u1_invariance_of_scalars() {
        let fam = FlagFamily::F12;
        let m = model(fam, &[1.0, 2.0]);
        let p = point(fam, &[c(0.2, 0.4), c(-0.6, 0.1), c(0.3, 0.3)], c(0.8, 0.6));
        let q = p.rotate_fiber(1.234);
        assert!((radial_rho(&p) - radial_rho(&q)).abs() <= 4.0 * f64::EPSILON * radial_rho(&p));
        let a = ansatz_metric(fam, &[1.0, 2.0], &m, &p, DEFAULT_STEP)
            .unwrap()
            .log_det()
            .unwrap();
        let b = ansatz_metric(fam, &[1.0, 2.0], &m, &q, DEFAULT_STEP)
            .unwrap()
            .log_det()
            .unwrap();
        assert!((a - b).abs() < 1e-12, "{a} vs {b}");
    }

    #[test]
    fn base_factor_consistency_cp1xcp1() {
        // ½ i∂∂̄ log h equals the sum of per-factor Fubini–Study forms.
        let fam = FlagFamily::Cp1xcp1;
        for (i, (x, y)) in [(0.3, -1.2), (1.7, 0.4), (-0.9, -0.9)].iter().enumerate() {
            let z = [c(*x, *y), c(*y * 0.5, i as f64 * 0.3)];
            let half_log = complex_hessian(
                |v| 0.5 * base_factor(fam, &chart::to_complex(v)).ln(),
                &[z[0].re, z[0].im, z[1].re, z[1].im],
                DEFAULT_STEP,
            )
            .unwrap();
            let fs: Vec<f64> = z.iter().map(|zi| (1.0 + zi.norm_sqr()).powi(-2)).collect();
            assert!(
                half_log
                    .sub(&HermitianForm::from_real_diagonal(&fs))
                    .frobenius()
                    < 1e-6
            );
        }
    }

    #[test]
    fn cone_metric_at_apex_is_an_error() {
        let p = ChartPoint::origin(FlagFamily::Cp1, c(0.0, 0.0));
        assert!(matches!(
            cone_metric(FlagFamily::Cp1, &p, DEFAULT_STEP),
            Err(crate::Error::ConeApex)
        ));
        let p = ChartPoint::origin(FlagFamily::Cp1, c(1.0, 0.0));
        assert!(cone_metric(FlagFamily::Cp1, &p, DEFAULT_STEP)
            .unwrap()
            .is_positive_definite());
    }

    #[test]
    fn ricci_of_flat_and_fubini_study() {
        let flat = ricci_tensor(
            |_| Ok(HermitianForm::identity(2)),
            &[0.1, 0.2, 0.3, 0.4],
            RICCI_STEP,
        )
        .unwrap();
        assert_eq!(flat.frobenius(), 0.0);
        let fs = |x: &[f64]| {
            complex_hessian(|y| (1.0 + y[0] * y[0] + y[1] * y[1]).ln(), x, DEFAULT_STEP)
        };
        let x = [0.6, -0.3];
        let ric = ricci_tensor(fs, &x, RICCI_STEP).unwrap();
        let g = fs(&x).unwrap();
        let rel = ric.sub(&g.scale(2.0)).frobenius() / g.frobenius();
        assert!(rel < 1e-4, "{rel}");
    }

    #[test]
    fn deviation_examples() {
        let g = HermitianForm::from_real_diagonal(&[1.0, 3.0, 0.5]);
        assert_eq!(metric_deviation(&g, &g).unwrap(), 0.0);
        assert!((metric_deviation(&g.scale(2.0), &g).unwrap() - 3f64.sqrt()).abs() < 1e-14);
        let singular = HermitianForm::from_real_diagonal(&[1.0, 0.0, 1.0]);
        assert!(metric_deviation(&g, &singular).is_err());
    }

    #[test]
    fn steps_are_validated() {
        assert!(FdSteps::default().validate().is_ok());
        assert!(FdSteps {
            inner: 1e-3,
            outer: 5e-3
        }
        .validate()
        .is_err());
    }
}
