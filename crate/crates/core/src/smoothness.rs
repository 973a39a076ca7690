//! Moduli of smoothness, Steklov means, total variation and the jump
//! decomposition of a derivative.
//!
//! The moduli are sup-norms over [0, 1] computed by nested grid search, so
//! they are lower bounds of the exact values.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{ensure_unit_interval, Error, Result};
use crate::function::{RealFn, ScalarFunction};
use crate::quadrature::{integrate_piecewise, pairwise_sum, QuadratureSpec};

/// Grid sizes for the modulus searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ModulusSpec {
    x_grid: usize,
    h_grid: usize,
}

impl ModulusSpec {
    pub const MIN_GRID: usize = 8;

    pub fn new(x_grid: usize, h_grid: usize) -> Result<Self> {
        if x_grid < Self::MIN_GRID || h_grid < Self::MIN_GRID {
            return Err(Error::InvalidParams(format!(
                "modulus grids must have at least {} points (got x_grid={x_grid}, h_grid={h_grid})",
                Self::MIN_GRID
            )));
        }
        Ok(Self { x_grid, h_grid })
    }

    pub fn x_grid(&self) -> usize {
        self.x_grid
    }

    pub fn h_grid(&self) -> usize {
        self.h_grid
    }
}

impl Default for ModulusSpec {
    fn default() -> Self {
        Self {
            x_grid: 513,
            h_grid: 129,
        }
    }
}

fn check_step(what: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            what,
            value,
            expected: "> 0",
        })
    }
}

/// max over h_j = j·hmax/h_grid of `inner(h_j)`.
fn sup_over_steps(hmax: f64, spec: &ModulusSpec, inner: impl Fn(f64) -> f64 + Sync) -> f64 {
    (1..=spec.h_grid)
        .into_par_iter()
        .map(|j| inner(hmax * j as f64 / spec.h_grid as f64))
        .reduce(|| 0.0, f64::max)
}

/// x_i uniformly spread over [lo, hi], i < x_grid.
fn grid_point(lo: f64, hi: f64, i: usize, size: usize) -> f64 {
    if i + 1 == size {
        hi
    } else {
        lo + (hi - lo) * i as f64 / (size - 1) as f64
    }
}

/// ω(f, δ) = sup_{0<h≤δ} sup_x |f(x + h) − f(x)|.
pub fn modulus(f: &ScalarFunction, delta: f64, spec: &ModulusSpec) -> Result<f64> {
    check_step("delta", delta)?;
    Ok(sup_over_steps(delta.min(1.0), spec, |h| {
        (0..spec.x_grid)
            .map(|i| {
                let x = grid_point(0.0, 1.0 - h, i, spec.x_grid);
                (f.eval(x + h) - f.eval(x)).abs()
            })
            .fold(0.0, f64::max)
    }))
}

/// ω₂ with step bound `step`: sup_{0<h≤step} sup_x |f(x + 2h) − 2f(x + h) + f(x)|.
pub fn modulus2(f: &ScalarFunction, step: f64, spec: &ModulusSpec) -> Result<f64> {
    check_step("step", step)?;
    Ok(sup_over_steps(step.min(0.5), spec, |h| {
        (0..spec.x_grid)
            .map(|i| {
                let x = grid_point(0.0, 1.0 - 2.0 * h, i, spec.x_grid);
                (f.eval(x + 2.0 * h) - 2.0 * f.eval(x + h) + f.eval(x)).abs()
            })
            .fold(0.0, f64::max)
    }))
}

/// φ(x) = √(x(1 − x)).
pub fn phi(x: f64) -> f64 {
    (x * (1.0 - x)).max(0.0).sqrt()
}

/// Ditzian–Totik modulus ω_φ(f, t) = sup_{0<h≤t} sup |f(x + hφ(x)/2) − f(x − hφ(x)/2)|
/// over x with both arguments in [0, 1].
pub fn modulus_dt(f: &ScalarFunction, t: f64, spec: &ModulusSpec) -> Result<f64> {
    check_step("t", t)?;
    Ok(sup_over_steps(t, spec, |h| {
        (0..spec.x_grid)
            .filter_map(|i| {
                let x = grid_point(0.0, 1.0, i, spec.x_grid);
                let half = 0.5 * h * phi(x);
                let (lo, hi) = (x - half, x + half);
                (lo >= 0.0 && hi <= 1.0).then(|| (f.eval(hi) - f.eval(lo)).abs())
            })
            .fold(0.0, f64::max)
    }))
}

/// f continued past [0, 1] by its tangent lines at the endpoints.
fn tangent_extension(f: &ScalarFunction) -> impl Fn(f64) -> f64 + '_ {
    let (f0, f1) = (f.eval(0.0), f.eval(1.0));
    let (s0, s1) = (f.right_derivative(0.0), f.left_derivative(1.0));
    move |t| {
        if t > 1.0 {
            f1 + s1 * (t - 1.0)
        } else if t < 0.0 {
            f0 + s0 * t
        } else {
            f.eval(t)
        }
    }
}

/// Steklov mean
///
/// ```text
/// f_h(x) = (4/h²) ∫_0^{h/2} ∫_0^{h/2} [2f(x + u + v) − f(x + 2(u + v))] du dv
/// ```
///
/// by nested adaptive quadrature, with breakpoints where either argument
/// crosses 1. Arguments beyond 1 use the tangent line of f at 1 (and
/// symmetrically at 0), which keeps ‖f_h − f‖ ≤ ω₂(f, h) where a constant
/// continuation does not.
pub fn steklov_mean(f: &ScalarFunction, h: f64, x: f64) -> Result<f64> {
    check_step("h", h)?;
    ensure_unit_interval("x", x)?;
    let spec = QuadratureSpec::default();
    let g = tangent_extension(f);
    let half = 0.5 * h;
    let crossings = [1.0 - x, 0.5 * (1.0 - x)];
    let cuts = |lo: f64, hi: f64, shifts: &[f64]| {
        let mut points = vec![lo, hi];
        points.extend(shifts.iter().copied().filter(|&p| p > lo && p < hi));
        points.sort_by(f64::total_cmp);
        points
    };
    let outer_cuts = cuts(
        0.0,
        half,
        &[
            crossings[0],
            crossings[1],
            crossings[0] - half,
            crossings[1] - half,
        ],
    );
    let inner = |u: f64| -> Result<f64> {
        let points = cuts(0.0, half, &[crossings[0] - u, crossings[1] - u]);
        integrate_piecewise(
            |v| 2.0 * g(x + u + v) - g(x + 2.0 * (u + v)),
            &points,
            &spec,
        )
    };
    let failure = std::cell::Cell::new(None);
    let total = integrate_piecewise(
        |u| {
            inner(u).unwrap_or_else(|e| {
                failure.set(Some(e));
                0.0
            })
        },
        &outer_cuts,
        &spec,
    )?;
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok(4.0 / (h * h) * total)
}

/// Σ |g(t_{i+1}) − g(t_i)| over a uniform partition of [a, b] with
/// `resolution` points.
pub fn total_variation(g: impl Fn(f64) -> f64, a: f64, b: f64, resolution: usize) -> Result<f64> {
    if !(a <= b) || resolution < 2 {
        return Err(Error::InvalidParams(format!(
            "total variation needs a <= b and resolution >= 2 (got [{a}, {b}], {resolution})"
        )));
    }
    let values: Vec<f64> = (0..resolution)
        .map(|i| g(grid_point(a, b, i, resolution)))
        .collect();
    let diffs: Vec<f64> = values.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    Ok(pairwise_sum(&diffs))
}

/// f′ split at x into its one-sided limits and the remainder
///
/// ```text
/// f′_x(t) = f′(t) − f′(x−)  for t < x
///         = 0               for t = x
///         = f′(t) − f′(x+)  for t > x
/// ```
#[derive(Clone)]
pub struct JumpDecomposition {
    x: f64,
    d_left: f64,
    d_right: f64,
    derivative: RealFn,
}

impl fmt::Debug for JumpDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("JumpDecomposition")
            .field("x", &self.x)
            .field("d_left", &self.d_left)
            .field("d_right", &self.d_right)
            .finish()
    }
}

impl JumpDecomposition {
    pub fn x(&self) -> f64 {
        self.x
    }

    /// f′(x−).
    pub fn d_left(&self) -> f64 {
        self.d_left
    }

    /// f′(x+).
    pub fn d_right(&self) -> f64 {
        self.d_right
    }

    pub fn fx_prime(&self, t: f64) -> f64 {
        if t < self.x {
            (self.derivative)(t) - self.d_left
        } else if t > self.x {
            (self.derivative)(t) - self.d_right
        } else {
            0.0
        }
    }
}

/// Builds f′_x for f at x.
pub fn jump_decompose(f: &ScalarFunction, x: f64) -> Result<JumpDecomposition> {
    ensure_unit_interval("x", x)?;
    let d_left = f.left_derivative(x);
    let d_right = f.right_derivative(x);
    for (what, value) in [("f'(x-)", d_left), ("f'(x+)", d_right)] {
        if !value.is_finite() {
            return Err(Error::NonFinite { what, value });
        }
    }
    let owned = f.clone();
    Ok(JumpDecomposition {
        x,
        d_left,
        d_right,
        derivative: std::sync::Arc::new(move |t| owned.derivative_or_difference(t)),
    })
}
