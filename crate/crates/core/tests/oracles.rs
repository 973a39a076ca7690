use durrmeyer_core::moments::{central_moment, exact_raw_moment, quadrature_raw_moment};
use durrmeyer_core::quadrature::integrate;
use durrmeyer_core::specfun::log_beta;
use durrmeyer_core::{
    apply, basis_weights, OperatorParams, QuadratureSpec, ScalarFunction, TestFunction,
};
use proptest::prelude::*;

fn params(n: u32, alpha: f64, rho: f64) -> OperatorParams {
    OperatorParams::new(n, alpha, rho).unwrap()
}

#[test]
fn log_beta_matches_quadrature() {
    let spec = QuadratureSpec::default()
        .with_tolerances(1e-13, 1e-300)
        .unwrap();
    for (a, b) in [
        (1.0, 1.0),
        (2.5, 3.0),
        (1.0, 41.0),
        (7.3, 2.2),
        (20.0, 20.0),
    ] {
        let q = integrate(
            |t: f64| t.powf(a - 1.0) * (1.0 - t).powf(b - 1.0),
            0.0,
            1.0,
            &spec,
        )
        .unwrap();
        let lb = log_beta(a, b).unwrap();
        assert!(
            (lb - q.ln()).abs() < 1e-11,
            "a={a} b={b}: {lb} vs {}",
            q.ln()
        );
    }
}

#[test]
fn exact_moments_match_operator_on_monomials() {
    let spec = QuadratureSpec::default();
    for (n, alpha, rho) in [(2, 0.0, 0.5), (7, 0.3, 1.0), (25, 1.0, 4.0), (60, 0.7, 2.5)] {
        let p = params(n, alpha, rho);
        for i in 0..=6u32 {
            let f = TestFunction::Monomial(i).build();
            for x in [0.0, 0.13, 0.5, 0.91, 1.0] {
                let exact = exact_raw_moment(&p, i, x).unwrap();
                let via_apply = apply(&p, &f, x, &spec).unwrap();
                assert!(
                    (exact - via_apply).abs() <= 1e-10 * exact.abs().max(1e-12),
                    "n={n} i={i} x={x}: {exact} vs {via_apply}"
                );
            }
        }
    }
}

#[test]
fn relative_oracle_resolves_tiny_moments() {
    let p = params(50, 0.3, 4.0);
    let spec = QuadratureSpec::default();
    let exact = exact_raw_moment(&p, 4, 0.0).unwrap();
    let oracle = quadrature_raw_moment(&p, 4, 0.0, &spec).unwrap();
    assert!(exact < 1e-7);
    assert!((exact - oracle).abs() <= 1e-10 * exact);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn weights_are_a_partition_of_unity(n in 2u32..400, alpha in 0.0..=1.0f64, rho in 0.05..20.0f64, x in 0.0..=1.0f64) {
        let w = basis_weights(&params(n, alpha, rho), x).unwrap();
        prop_assert!(w.iter().all(|&v| v >= 0.0));
        prop_assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn variance_is_nonnegative(n in 2u32..2000, alpha in 0.0..=1.0f64, rho in 0.05..20.0f64, x in 0.0..=1.0f64) {
        prop_assert!(central_moment(&params(n, alpha, rho), 2, x).unwrap() >= 0.0);
    }

    #[test]
    fn reflection_symmetry(n in 2u32..60, alpha in 0.0..=1.0f64, rho in 0.2..8.0f64, x in 0.0..=1.0f64) {
        let spec = QuadratureSpec::default();
        let p = params(n, alpha, rho);
        let f = ScalarFunction::new("f", |t: f64| (3.0 * t).sin() + t * t * t);
        let g = ScalarFunction::new("g", |t: f64| (3.0 * (1.0 - t)).sin() + (1.0 - t).powi(3));
        let a = apply(&p, &f, x, &spec).unwrap();
        let b = apply(&p, &g, 1.0 - x, &spec).unwrap();
        prop_assert!((a - b).abs() < 1e-11, "{} vs {}", a, b);
    }

    #[test]
    fn positive_functions_stay_positive(n in 2u32..80, alpha in 0.0..=1.0f64, rho in 0.2..8.0f64, x in 0.0..=1.0f64, c in 0.0..1.0f64) {
        let spec = QuadratureSpec::default();
        let f = ScalarFunction::new("bump", move |t: f64| (t - c).powi(2));
        prop_assert!(apply(&params(n, alpha, rho), &f, x, &spec).unwrap() >= 0.0);
    }
}
