use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use flagcy_bench::{model, point};
use flagcy_core::geometry::{ansatz_metric, cone_metric, FdSteps, DEFAULT_STEP};
use flagcy_core::verify::{ricci_residual, DerivativePath};
use flagcy_core::{FlagFamily, Method};

fn assembly(c: &mut Criterion) {
    let mut group = c.benchmark_group("assembly");
    for (family, b) in [
        (FlagFamily::Cp1xcp1, vec![0.5, 1.5]),
        (FlagFamily::F12, vec![1.0, 2.0]),
    ] {
        let m = model(family, &b, Method::Numeric);
        let p = point(family);
        group.bench_function(format!("ansatz/{family}"), |bench| {
            bench.iter(|| ansatz_metric(family, &b, &m, black_box(&p), DEFAULT_STEP).unwrap())
        });
        group.bench_function(format!("cone/{family}"), |bench| {
            bench.iter(|| cone_metric(family, black_box(&p), DEFAULT_STEP).unwrap())
        });
    }
    group.finish();
}

fn ricci(c: &mut Criterion) {
    let mut group = c.benchmark_group("ricci");
    group.sample_size(10);
    let steps = FdSteps::default();
    for (family, b) in [
        (FlagFamily::Cp1xcp1, vec![0.5, 1.5]),
        (FlagFamily::F12, vec![1.0, 2.0]),
    ] {
        let m = model(family, &b, Method::Numeric);
        let p = point(family);
        group.bench_function(format!("fd/{family}"), |bench| {
            bench.iter(|| {
                ricci_residual(
                    family,
                    &b,
                    &m,
                    black_box(&p),
                    &steps,
                    DerivativePath::FiniteDifference,
                )
                .unwrap()
            })
        });
    }
    let b = [0.5, 1.5];
    let m = model(FlagFamily::Cp1xcp1, &b, Method::Numeric);
    let p = point(FlagFamily::Cp1xcp1);
    group.bench_function("analytic/cp1xcp1", |bench| {
        bench.iter(|| {
            ricci_residual(
                FlagFamily::Cp1xcp1,
                &b,
                &m,
                black_box(&p),
                &steps,
                DerivativePath::Analytic,
            )
            .unwrap()
        })
    });
    group.finish();
}

criterion_group!(benches, assembly, ricci);
criterion_main!(benches);
