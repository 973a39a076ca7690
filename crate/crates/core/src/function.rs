//! Real functions on [0, 1] with optional analytic derivatives, and the
//! built-in test corpus.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};

pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Step used for difference-quotient derivatives when no analytic one exists.
pub const DIFFERENCE_STEP: f64 = 1e-6;

/// A function on [0, 1] together with whatever derivative information is
/// known analytically.
#[derive(Clone)]
pub struct ScalarFunction {
    name: String,
    value: RealFn,
    d1: Option<RealFn>,
    d2: Option<RealFn>,
    d1_left: Option<RealFn>,
    d1_right: Option<RealFn>,
}

impl fmt::Debug for ScalarFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarFunction")
            .field("name", &self.name)
            .field("d1", &self.d1.is_some())
            .field("d2", &self.d2.is_some())
            .field(
                "one_sided",
                &(self.d1_left.is_some() && self.d1_right.is_some()),
            )
            .finish()
    }
}

impl ScalarFunction {
    pub fn new(
        name: impl Into<String>,
        value: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            value: Arc::new(value),
            d1: None,
            d2: None,
            d1_left: None,
            d1_right: None,
        }
    }

    pub fn with_derivative(mut self, d1: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.d1 = Some(Arc::new(d1));
        self
    }

    pub fn with_second_derivative(
        mut self,
        d2: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.d2 = Some(Arc::new(d2));
        self
    }

    /// One-sided limits f′(x−) and f′(x+) as functions of x.
    pub fn with_one_sided_derivatives(
        mut self,
        left: impl Fn(f64) -> f64 + Send + Sync + 'static,
        right: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.d1_left = Some(Arc::new(left));
        self.d1_right = Some(Arc::new(right));
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        (self.value)(x)
    }

    pub fn has_derivative(&self) -> bool {
        self.d1.is_some()
    }

    pub fn has_second_derivative(&self) -> bool {
        self.d2.is_some()
    }

    fn missing(&self, which: &'static str) -> Error {
        Error::MissingDerivative {
            function: self.name.clone(),
            which,
        }
    }

    pub fn derivative(&self, x: f64) -> Result<f64> {
        self.d1
            .as_ref()
            .map(|d| d(x))
            .ok_or_else(|| self.missing("first derivative"))
    }

    pub fn second_derivative(&self, x: f64) -> Result<f64> {
        self.d2
            .as_ref()
            .map(|d| d(x))
            .ok_or_else(|| self.missing("second derivative"))
    }

    /// The analytic derivative as a standalone function.
    pub fn derivative_function(&self) -> Result<ScalarFunction> {
        let d1 = self
            .d1
            .clone()
            .ok_or_else(|| self.missing("first derivative"))?;
        let mut out = ScalarFunction {
            name: format!("d/dx {}", self.name),
            value: d1,
            d1: None,
            d2: None,
            d1_left: None,
            d1_right: None,
        };
        out.d1 = self.d2.clone();
        Ok(out)
    }

    /// f′(t): analytic if available, else a difference quotient that stays
    /// inside [0, 1].
    pub fn derivative_or_difference(&self, t: f64) -> f64 {
        if let Some(d) = &self.d1 {
            return d(t);
        }
        let h = DIFFERENCE_STEP;
        if t - h < 0.0 {
            (self.eval(t + h) - self.eval(t)) / h
        } else if t + h > 1.0 {
            (self.eval(t) - self.eval(t - h)) / h
        } else {
            (self.eval(t + h) - self.eval(t - h)) / (2.0 * h)
        }
    }

    /// f′(x−): analytic one-sided limit, else the analytic derivative, else a
    /// backward difference quotient. At x = 0 the right limit is returned.
    pub fn left_derivative(&self, x: f64) -> f64 {
        if let Some(d) = &self.d1_left {
            return d(x);
        }
        if let Some(d) = &self.d1 {
            return d(x);
        }
        if x - DIFFERENCE_STEP < 0.0 {
            return self.right_derivative(x);
        }
        (self.eval(x) - self.eval(x - DIFFERENCE_STEP)) / DIFFERENCE_STEP
    }

    /// f′(x+), mirroring [`Self::left_derivative`]. At x = 1 the left limit
    /// is returned.
    pub fn right_derivative(&self, x: f64) -> f64 {
        if let Some(d) = &self.d1_right {
            return d(x);
        }
        if let Some(d) = &self.d1 {
            return d(x);
        }
        if x + DIFFERENCE_STEP > 1.0 {
            return (self.eval(x) - self.eval(x - DIFFERENCE_STEP)) / DIFFERENCE_STEP;
        }
        (self.eval(x + DIFFERENCE_STEP) - self.eval(x)) / DIFFERENCE_STEP
    }

    /// a·f + b·g; derivatives are kept where both operands have them.
    pub fn linear_combination(
        a: f64,
        f: &ScalarFunction,
        b: f64,
        g: &ScalarFunction,
    ) -> ScalarFunction {
        let combine = |p: &Option<RealFn>, q: &Option<RealFn>| -> Option<RealFn> {
            match (p, q) {
                (Some(p), Some(q)) => {
                    let (p, q) = (p.clone(), q.clone());
                    Some(Arc::new(move |x| a * p(x) + b * q(x)))
                }
                _ => None,
            }
        };
        let (fv, gv) = (f.value.clone(), g.value.clone());
        ScalarFunction {
            name: format!("{a}*({}) + {b}*({})", f.name, g.name),
            value: Arc::new(move |x| a * fv(x) + b * gv(x)),
            d1: combine(&f.d1, &g.d1),
            d2: combine(&f.d2, &g.d2),
            d1_left: combine(&f.d1_left, &g.d1_left),
            d1_right: combine(&f.d1_right, &g.d1_right),
        }
    }

    /// Spot-checks the analytic derivatives against central differences on
    /// an interior grid. Returns the first mismatch.
    pub fn check_derivatives(&self, grid_size: usize, tol: f64) -> Result<()> {
        let h = 1e-5;
        for i in 1..grid_size.saturating_sub(1) {
            let x = i as f64 / (grid_size - 1) as f64;
            if x - h < 0.0 || x + h > 1.0 {
                continue;
            }
            if let Some(d1) = &self.d1 {
                let fd = (self.eval(x + h) - self.eval(x - h)) / (2.0 * h);
                let scale = 1.0 + fd.abs();
                if (d1(x) - fd).abs() > tol * scale {
                    return Err(Error::DerivativeMismatch {
                        function: self.name.clone(),
                        which: "first derivative",
                        x,
                    });
                }
            }
            if let (Some(d1), Some(d2)) = (&self.d1, &self.d2) {
                let fd = (d1(x + h) - d1(x - h)) / (2.0 * h);
                let scale = 1.0 + fd.abs();
                if (d2(x) - fd).abs() > tol * scale {
                    return Err(Error::DerivativeMismatch {
                        function: self.name.clone(),
                        which: "second derivative",
                        x,
                    });
                }
            }
        }
        Ok(())
    }
}

/// Built-in test functions covering smooth, polynomial, Lipschitz and
/// derivative-of-bounded-variation regimes.
#[derive(Debug, Clone, PartialEq)]
pub enum TestFunction {
    Constant(f64),
    /// e_i(x) = x^i.
    Monomial(u32),
    /// Σ c_j x^j, coefficients in increasing degree.
    Polynomial(Vec<f64>),
    /// x⁷ + 10x⁵ + x.
    Septic,
    /// x² sin(2x/π).
    SquareSine,
    /// x² sin(2πx).
    SquareSinePeriodic,
    /// |x − 1/2|.
    AbsCentered,
    /// x^{3/2}.
    ThreeHalvesPower,
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

fn differentiate(coeffs: &[f64]) -> Vec<f64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(j, &c)| j as f64 * c)
        .collect()
}

fn polynomial_function(name: String, coeffs: Vec<f64>) -> ScalarFunction {
    let d1 = differentiate(&coeffs);
    let d2 = differentiate(&d1);
    ScalarFunction::new(name, move |x| horner(&coeffs, x))
        .with_derivative(move |x| horner(&d1, x))
        .with_second_derivative(move |x| horner(&d2, x))
}

fn square_sine(name: &str, freq: f64) -> ScalarFunction {
    ScalarFunction::new(name, move |x: f64| x * x * (freq * x).sin())
        .with_derivative(move |x: f64| 2.0 * x * (freq * x).sin() + freq * x * x * (freq * x).cos())
        .with_second_derivative(move |x: f64| {
            (2.0 - freq * freq * x * x) * (freq * x).sin() + 4.0 * freq * x * (freq * x).cos()
        })
}

impl TestFunction {
    /// The canonical corpus used by sweeps.
    pub fn corpus() -> Vec<TestFunction> {
        vec![
            TestFunction::Constant(1.0),
            TestFunction::Monomial(1),
            TestFunction::Monomial(2),
            TestFunction::Monomial(3),
            TestFunction::Monomial(4),
            TestFunction::Septic,
            TestFunction::SquareSine,
            TestFunction::AbsCentered,
            TestFunction::ThreeHalvesPower,
        ]
    }

    pub fn is_constant(&self) -> bool {
        match self {
            TestFunction::Constant(_) | TestFunction::Monomial(0) => true,
            TestFunction::Polynomial(c) => c.iter().skip(1).all(|&v| v == 0.0),
            _ => false,
        }
    }

    pub fn is_polynomial(&self) -> bool {
        matches!(
            self,
            TestFunction::Constant(_)
                | TestFunction::Monomial(_)
                | TestFunction::Polynomial(_)
                | TestFunction::Septic
        )
    }

    /// Continuously differentiable on [0, 1].
    pub fn is_c1(&self) -> bool {
        !matches!(self, TestFunction::AbsCentered)
    }

    pub fn build(&self) -> ScalarFunction {
        let name = self.to_string();
        match self {
            TestFunction::Constant(c) => polynomial_function(name, vec![*c]),
            TestFunction::Monomial(i) => {
                let mut coeffs = vec![0.0; *i as usize + 1];
                coeffs[*i as usize] = 1.0;
                polynomial_function(name, coeffs)
            }
            TestFunction::Polynomial(c) => polynomial_function(name, c.clone()),
            TestFunction::Septic => {
                polynomial_function(name, vec![0.0, 1.0, 0.0, 0.0, 0.0, 10.0, 0.0, 1.0])
            }
            TestFunction::SquareSine => square_sine(&name, 2.0 / std::f64::consts::PI),
            TestFunction::SquareSinePeriodic => square_sine(&name, 2.0 * std::f64::consts::PI),
            TestFunction::AbsCentered => ScalarFunction::new(name, |x: f64| (x - 0.5).abs())
                .with_derivative(|x: f64| if x < 0.5 { -1.0 } else { 1.0 })
                .with_second_derivative(|_| 0.0)
                .with_one_sided_derivatives(
                    |x: f64| if x <= 0.5 { -1.0 } else { 1.0 },
                    |x: f64| if x < 0.5 { -1.0 } else { 1.0 },
                ),
            TestFunction::ThreeHalvesPower => ScalarFunction::new(name, |x: f64| x * x.sqrt())
                .with_derivative(|x: f64| 1.5 * x.sqrt())
                .with_second_derivative(|x: f64| 0.75 / x.sqrt()),
        }
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TestFunction::Constant(c) => write!(f, "const:{c}"),
            TestFunction::Monomial(i) => write!(f, "e{i}"),
            TestFunction::Polynomial(c) => {
                let parts: Vec<String> = c.iter().map(|v| v.to_string()).collect();
                write!(f, "poly:{}", parts.join(","))
            }
            TestFunction::Septic => f.write_str("septic"),
            TestFunction::SquareSine => f.write_str("xsin"),
            TestFunction::SquareSinePeriodic => f.write_str("xsin-periodic"),
            TestFunction::AbsCentered => f.write_str("abs-half"),
            TestFunction::ThreeHalvesPower => f.write_str("pow1.5"),
        }
    }
}

/// Error from parsing a test-function identifier.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown function `{0}` (expected const:<c>, e0..e9, poly:<c0,c1,..>, septic, xsin, xsin-periodic, abs-half, pow1.5)")]
pub struct ParseFunctionError(pub String);

impl FromStr for TestFunction {
    type Err = ParseFunctionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParseFunctionError(s.to_string());
        if let Some(rest) = s.strip_prefix("const:") {
            return rest.parse().map(TestFunction::Constant).map_err(|_| bad());
        }
        if let Some(rest) = s.strip_prefix("poly:") {
            let coeffs: Result<Vec<f64>, _> =
                rest.split(',').map(|c| c.trim().parse::<f64>()).collect();
            return match coeffs {
                Ok(c) if !c.is_empty() => Ok(TestFunction::Polynomial(c)),
                _ => Err(bad()),
            };
        }
        if let Some(rest) = s.strip_prefix('e') {
            if let Ok(i) = rest.parse::<u32>() {
                if i <= 9 {
                    return Ok(TestFunction::Monomial(i));
                }
            }
        }
        match s {
            "septic" => Ok(TestFunction::Septic),
            "xsin" => Ok(TestFunction::SquareSine),
            "xsin-periodic" => Ok(TestFunction::SquareSinePeriodic),
            "abs-half" => Ok(TestFunction::AbsCentered),
            "pow1.5" => Ok(TestFunction::ThreeHalvesPower),
            _ => Err(bad()),
        }
    }
}
