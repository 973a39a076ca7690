//! Generalized Bernstein–Durrmeyer operators of blending type.
//!
//! For n ≥ 2, α ∈ [0, 1] and ρ > 0 the operator is
//!
//! ```text
//! G(f; x) = Σ_{k=0}^{n} p_{n,k}^{(α)}(x) ∫_0^1 μ_{n,k}(t) f(t) dt
//! ```
//!
//! with the blending basis p_{n,k}^{(α)} and the Beta(kρ + 1, (n − k)ρ + 1)
//! density μ_{n,k}. The crate evaluates the operator by quadrature, provides
//! the closed-form moments (with an independent quadrature check), the
//! moduli of smoothness used in the error estimates, and routines that
//! evaluate each error estimate against the measured error.

// `!(x > 0.0)` style checks are used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod basis;
pub mod bounds;
pub mod error;
pub mod function;
pub mod moments;
pub mod operator;
pub mod quadrature;
pub mod smoothness;
pub mod specfun;

pub use basis::{
    basis_weight, basis_weights, durrmeyer_log_density, kernel, DurrmeyerDensity, OperatorParams,
};
pub use bounds::{BoundReport, TheoremId};
pub use error::{Error, Result};
pub use function::{ScalarFunction, TestFunction};
pub use moments::MomentReport;
pub use operator::{apply, classical_durrmeyer, sup_error, Approximant, ErrorSummary};
pub use quadrature::{integrate, QuadratureSpec};
pub use smoothness::{JumpDecomposition, ModulusSpec};
