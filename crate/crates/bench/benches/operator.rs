use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use durrmeyer_core::function::TestFunction;
use durrmeyer_core::moments::exact_raw_moment;
use durrmeyer_core::specfun::log_gamma;
use durrmeyer_core::{apply, basis_weights, Approximant, OperatorParams, QuadratureSpec};

fn special_functions(c: &mut Criterion) {
    c.bench_function("log_gamma", |b| {
        b.iter(|| {
            let mut s = 0.0;
            for i in 1..200 {
                s += log_gamma(black_box(0.37 * i as f64)).unwrap();
            }
            s
        })
    });
}

fn basis(c: &mut Criterion) {
    let mut group = c.benchmark_group("basis_weights");
    for n in [10u32, 100, 1000] {
        let params = OperatorParams::new(n, 0.3, 4.0).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &params, |b, p| {
            b.iter(|| basis_weights(p, black_box(0.37)).unwrap())
        });
    }
    group.finish();
}

fn operator(c: &mut Criterion) {
    let spec = QuadratureSpec::default();
    let f = TestFunction::SquareSine.build();
    let mut group = c.benchmark_group("apply");
    group.sample_size(20);
    for n in [20u32, 200] {
        let params = OperatorParams::new(n, 0.3, 4.0).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &params, |b, p| {
            b.iter(|| apply(p, &f, black_box(0.37), &spec).unwrap())
        });
    }
    group.finish();

    let mut group = c.benchmark_group("approximant");
    group.sample_size(10);
    for n in [20u32, 200] {
        let params = OperatorParams::new(n, 0.3, 4.0).unwrap();
        group.bench_with_input(BenchmarkId::new("build", n), &params, |b, p| {
            b.iter(|| Approximant::new(*p, &f, &spec).unwrap())
        });
        let approx = Approximant::new(params, &f, &spec).unwrap();
        group.bench_with_input(BenchmarkId::new("eval", n), &approx, |b, a| {
            b.iter(|| a.eval(black_box(0.37)).unwrap())
        });
    }
    group.finish();
}

fn moments(c: &mut Criterion) {
    let params = OperatorParams::new(50, 0.3, 4.0).unwrap();
    c.bench_function("exact_raw_moment_4", |b| {
        b.iter(|| exact_raw_moment(&params, 4, black_box(0.37)).unwrap())
    });
}

criterion_group!(benches, special_functions, basis, operator, moments);
criterion_main!(benches);
