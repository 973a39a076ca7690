//! Applying G_{n,ρ}^{(α)} and the classical Bernstein–Durrmeyer operator D_n.
//!
//! The operator is evaluated as Σ_k p_{n,k}^{(α)}(x)·I_k with
//! I_k = ∫ μ_{n,k} f computed by [`beta_weighted_integral`]. The I_k do not
//! depend on x, so [`Approximant`] computes them once and evaluates the
//! operator at any number of points.

use rayon::prelude::*;
use serde::Serialize;

use crate::basis::{basis_weights, bernstein_weight, OperatorParams};
use crate::error::{ensure_unit_interval, Error, Result};
use crate::function::ScalarFunction;
use crate::quadrature::{
    beta_weighted_integral, integrate_piecewise, pairwise_sum, peak_breakpoints, QuadratureSpec,
};

/// Basis weights below this are dropped by the single-point [`apply`]. The
/// discarded mass is at most (n + 1)·1e-18.
pub const WEIGHT_CUTOFF: f64 = 1e-18;

/// Default grid size for sup-norm estimates.
pub const DEFAULT_GRID: usize = 257;

/// `size` equally spaced points on [0, 1], endpoints included.
pub fn uniform_grid(size: usize) -> Vec<f64> {
    match size {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..size).map(|i| i as f64 / (size - 1) as f64).collect(),
    }
}

/// G_{n,ρ}^{(α)} f with the x-independent integrals precomputed.
#[derive(Debug, Clone)]
pub struct Approximant {
    params: OperatorParams,
    function: ScalarFunction,
    integrals: Vec<f64>,
}

impl Approximant {
    pub fn new(params: OperatorParams, f: &ScalarFunction, spec: &QuadratureSpec) -> Result<Self> {
        let integrals = (0..=params.n())
            .into_par_iter()
            .map(|k| beta_weighted_integral(|t| f.eval(t), &params, k, spec))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            params,
            function: f.clone(),
            integrals,
        })
    }

    pub fn params(&self) -> &OperatorParams {
        &self.params
    }

    pub fn function(&self) -> &ScalarFunction {
        &self.function
    }

    /// ∫ μ_{n,k} f for k = 0..=n.
    pub fn integrals(&self) -> &[f64] {
        &self.integrals
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        let weights = basis_weights(&self.params, x)?;
        let terms: Vec<f64> = weights
            .iter()
            .zip(&self.integrals)
            .map(|(w, i)| w * i)
            .collect();
        Ok(pairwise_sum(&terms))
    }

    /// G(f; x) − f(x).
    pub fn error_at(&self, x: f64) -> Result<f64> {
        Ok(self.eval(x)? - self.function.eval(x))
    }
}

/// G_{n,ρ}^{(α)}(f; x).
pub fn apply(
    params: &OperatorParams,
    f: &ScalarFunction,
    x: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let weights = basis_weights(params, x)?;
    let terms = weights
        .par_iter()
        .enumerate()
        .map(|(k, &w)| {
            if w > WEIGHT_CUTOFF {
                Ok(w * beta_weighted_integral(|t| f.eval(t), params, k as u32, spec)?)
            } else {
                Ok(0.0)
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(pairwise_sum(&terms))
}

/// D_n(f; x) = (n + 1) Σ_k p_{n,k}(x) ∫ p_{n,k}(t) f(t) dt, built from the
/// classical Bernstein basis without going through [`OperatorParams`].
pub fn classical_durrmeyer(
    n: u32,
    f: &ScalarFunction,
    x: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidParams(format!("n = {n} must be at least 2")));
    }
    ensure_unit_interval("x", x)?;
    let nf = n as f64;
    let terms = (0..=n)
        .into_par_iter()
        .map(|k| {
            let w = bernstein_weight(n, k, x)?;
            if w == 0.0 {
                return Ok(0.0);
            }
            let peak = k as f64 / nf;
            let width = ((peak * (1.0 - peak)).max(1.0 / nf) / nf).sqrt();
            let points = peak_breakpoints(peak, width, 0.0, 1.0);
            let integral = integrate_piecewise(
                |t| bernstein_weight(n, k, t).unwrap_or(0.0) * f.eval(t),
                &points,
                spec,
            )?;
            Ok(w * (nf + 1.0) * integral)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(pairwise_sum(&terms))
}

/// Grid estimate of ‖G f − f‖_∞.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorSummary {
    pub sup_error: f64,
    pub argmax_x: f64,
    pub grid_size: usize,
}

impl ErrorSummary {
    /// Max of |error| over paired (x, error) samples; the first maximiser wins.
    pub fn from_samples(xs: &[f64], errors: &[f64]) -> Self {
        let mut sup_error = 0.0;
        let mut argmax_x = xs.first().copied().unwrap_or(0.0);
        for (&x, &e) in xs.iter().zip(errors) {
            if e.abs() > sup_error {
                sup_error = e.abs();
                argmax_x = x;
            }
        }
        Self {
            sup_error,
            argmax_x,
            grid_size: xs.len(),
        }
    }
}

/// max over a uniform grid of |G(f; x) − f(x)|. The grid max is a proxy for
/// the sup norm.
pub fn sup_error(
    params: &OperatorParams,
    f: &ScalarFunction,
    grid_size: usize,
    spec: &QuadratureSpec,
) -> Result<ErrorSummary> {
    if grid_size < 2 {
        return Err(Error::InvalidParams(format!(
            "grid_size = {grid_size} must be at least 2"
        )));
    }
    let approx = Approximant::new(*params, f, spec)?;
    let xs = uniform_grid(grid_size);
    let errors = xs
        .iter()
        .map(|&x| approx.error_at(x))
        .collect::<Result<Vec<_>>>()?;
    Ok(ErrorSummary::from_samples(&xs, &errors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::TestFunction;

    fn params(n: u32, alpha: f64, rho: f64) -> OperatorParams {
        OperatorParams::new(n, alpha, rho).unwrap()
    }

    #[test]
    fn apply_examples() {
        let spec = QuadratureSpec::default();
        let one = TestFunction::Constant(1.0).build();
        let e1 = TestFunction::Monomial(1).build();
        for x in [0.0, 0.37, 1.0] {
            assert!((apply(&params(7, 0.3, 2.0), &one, x, &spec).unwrap() - 1.0).abs() < 1e-13);
        }
        assert!((apply(&params(10, 0.6, 1.0), &e1, 0.5, &spec).unwrap() - 0.5).abs() < 1e-14);
        assert!(apply(&params(10, 0.6, 1.0), &e1, 1.5, &spec).is_err());
    }

    #[test]
    fn apply_matches_approximant() {
        let spec = QuadratureSpec::default();
        let f = TestFunction::SquareSine.build();
        let p = params(23, 0.4, 3.0);
        let approx = Approximant::new(p, &f, &spec).unwrap();
        for x in [0.0, 0.11, 0.5, 0.93, 1.0] {
            let a = apply(&p, &f, x, &spec).unwrap();
            assert!((a - approx.eval(x).unwrap()).abs() < 1e-14);
        }
    }

    #[test]
    fn classical_durrmeyer_examples() {
        let spec = QuadratureSpec::default();
        let one = TestFunction::Constant(1.0).build();
        let e1 = TestFunction::Monomial(1).build();
        let e3 = TestFunction::Monomial(3).build();
        for x in [0.0, 0.3, 0.8] {
            assert!((classical_durrmeyer(12, &one, x, &spec).unwrap() - 1.0).abs() < 1e-13);
            let d = classical_durrmeyer(12, &e1, x, &spec).unwrap();
            assert!((d - (12.0 * x + 1.0) / 14.0).abs() < 1e-13);
        }
        let a = classical_durrmeyer(10, &e3, 0.3, &spec).unwrap();
        let b = apply(&params(10, 1.0, 1.0), &e3, 0.3, &spec).unwrap();
        assert!((a - b).abs() < 1e-10);
        assert!(classical_durrmeyer(1, &e1, 0.3, &spec).is_err());
    }

    #[test]
    fn sup_error_of_identity_is_attained_at_endpoints() {
        let spec = QuadratureSpec::default();
        let e1 = TestFunction::Monomial(1).build();
        for n in [5u32, 10, 40] {
            let s = sup_error(&params(n, 1.0, 1.0), &e1, DEFAULT_GRID, &spec).unwrap();
            assert!((s.sup_error - 1.0 / (n as f64 + 2.0)).abs() < 1e-13);
            assert!(s.argmax_x == 0.0 || s.argmax_x == 1.0);
            assert_eq!(s.grid_size, DEFAULT_GRID);
        }
        let c = sup_error(
            &params(9, 0.2, 0.5),
            &TestFunction::Constant(-3.0).build(),
            33,
            &spec,
        )
        .unwrap();
        assert!(c.sup_error < 1e-12);
        assert!(sup_error(&params(9, 0.2, 0.5), &e1, 1, &spec).is_err());
    }

    #[test]
    fn uniform_grid_shape() {
        assert_eq!(uniform_grid(5), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(uniform_grid(257).len(), 257);
    }
}
