//! Blending-type basis p_{n,k}^{(α)}, the Durrmeyer beta density μ_{n,k} and
//! the operator kernel U(x, t).

use serde::Serialize;

use crate::error::{ensure_unit_interval, Error, Result};
use crate::specfun::{log_beta, log_binomial, log_pow, LogScale};

/// The triple (n, α, ρ) identifying one operator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OperatorParams {
    n: u32,
    alpha: f64,
    rho: f64,
}

impl OperatorParams {
    pub fn new(n: u32, alpha: f64, rho: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParams(format!("n = {n} must be at least 2")));
        }
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::InvalidParams(format!(
                "alpha = {alpha} must lie in [0, 1]"
            )));
        }
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "rho = {rho} must be positive and finite"
            )));
        }
        Ok(Self { n, alpha, rho })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// nρ, the quantity every moment formula is written in.
    pub fn n_rho(&self) -> f64 {
        self.n as f64 * self.rho
    }

    /// Same (α, ρ) with a different n.
    pub fn with_n(&self, n: u32) -> Result<Self> {
        Self::new(n, self.alpha, self.rho)
    }

    fn check_index(&self, k: u32) -> Result<()> {
        if k > self.n {
            return Err(Error::IndexOutOfRange {
                what: "k",
                value: k as i64,
                max: self.n as i64,
            });
        }
        Ok(())
    }
}

fn term(
    coefficient: f64,
    binomial: Option<LogScale>,
    x: f64,
    x_exp: f64,
    one_minus_exp: f64,
) -> f64 {
    match binomial {
        Some(c) if coefficient != 0.0 => {
            let log = c.ln() + log_pow(x, x_exp) + log_pow(1.0 - x, one_minus_exp);
            coefficient * log.exp()
        }
        _ => 0.0,
    }
}

/// p_{n,k}^{(α)}(x) without argument validation.
///
/// Uses the expanded three-term form
/// (1−α)C(n−2,k)x^k(1−x)^{n−k−1} + (1−α)C(n−2,k−2)x^{k−1}(1−x)^{n−k} + αC(n,k)x^k(1−x)^{n−k},
/// which is total on k = 0..=n and x ∈ [0, 1].
pub(crate) fn weight_unchecked(params: &OperatorParams, k: u32, x: f64) -> f64 {
    let n = params.n as u64;
    let k_i = k as i64;
    let kf = k as f64;
    let nf = n as f64;
    let blend = 1.0 - params.alpha;
    term(blend, log_binomial(n - 2, k_i), x, kf, nf - kf - 1.0)
        + term(blend, log_binomial(n - 2, k_i - 2), x, kf - 1.0, nf - kf)
        + term(params.alpha, log_binomial(n, k_i), x, kf, nf - kf)
}

/// The blending-type basis weight p_{n,k}^{(α)}(x).
pub fn basis_weight(params: &OperatorParams, k: u32, x: f64) -> Result<f64> {
    params.check_index(k)?;
    ensure_unit_interval("x", x)?;
    Ok(weight_unchecked(params, k, x))
}

/// All n + 1 basis weights at `x`.
pub fn basis_weights(params: &OperatorParams, x: f64) -> Result<Vec<f64>> {
    ensure_unit_interval("x", x)?;
    Ok((0..=params.n)
        .map(|k| weight_unchecked(params, k, x))
        .collect())
}

/// Classical Bernstein weight C(n,k) x^k (1−x)^{n−k}.
pub fn bernstein_weight(n: u32, k: u32, x: f64) -> Result<f64> {
    if k > n {
        return Err(Error::IndexOutOfRange {
            what: "k",
            value: k as i64,
            max: n as i64,
        });
    }
    ensure_unit_interval("x", x)?;
    Ok(term(
        1.0,
        log_binomial(n as u64, k as i64),
        x,
        k as f64,
        (n - k) as f64,
    ))
}

/// The Beta(kρ + 1, (n − k)ρ + 1) density attached to index k.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DurrmeyerDensity {
    left_exponent: f64,
    right_exponent: f64,
    log_norm: f64,
}

impl DurrmeyerDensity {
    pub fn new(params: &OperatorParams, k: u32) -> Result<Self> {
        params.check_index(k)?;
        let left_exponent = k as f64 * params.rho;
        let right_exponent = (params.n - k) as f64 * params.rho;
        let log_norm = -log_beta(left_exponent + 1.0, right_exponent + 1.0)?;
        Ok(Self {
            left_exponent,
            right_exponent,
            log_norm,
        })
    }

    /// Exponent of t (kρ).
    pub fn left_exponent(&self) -> f64 {
        self.left_exponent
    }

    /// Exponent of 1 − t ((n − k)ρ).
    pub fn right_exponent(&self) -> f64 {
        self.right_exponent
    }

    pub(crate) fn ln_pdf_unchecked(&self, t: f64) -> f64 {
        self.log_norm + log_pow(t, self.left_exponent) + log_pow(1.0 - t, self.right_exponent)
    }

    pub fn ln_pdf(&self, t: f64) -> Result<f64> {
        ensure_unit_interval("t", t)?;
        Ok(self.ln_pdf_unchecked(t))
    }

    pub fn pdf(&self, t: f64) -> Result<f64> {
        Ok(self.ln_pdf(t)?.exp())
    }

    pub(crate) fn pdf_unchecked(&self, t: f64) -> f64 {
        self.ln_pdf_unchecked(t).exp()
    }

    pub fn mean(&self) -> f64 {
        (self.left_exponent + 1.0) / (self.left_exponent + self.right_exponent + 2.0)
    }

    /// Location of the maximum, kρ/(nρ).
    pub fn mode(&self) -> f64 {
        self.left_exponent / (self.left_exponent + self.right_exponent)
    }

    pub fn std_dev(&self) -> f64 {
        let m = self.mean();
        (m * (1.0 - m) / (self.left_exponent + self.right_exponent + 3.0)).sqrt()
    }
}

/// ln μ_{n,ρ}(t) for index k; −∞ where the density vanishes.
pub fn durrmeyer_log_density(params: &OperatorParams, k: u32, t: f64) -> Result<f64> {
    DurrmeyerDensity::new(params, k)?.ln_pdf(t)
}

/// The kernel U(x, t) = Σ_k p_{n,k}^{(α)}(x) μ_{n,k}(t).
pub fn kernel(params: &OperatorParams, x: f64, t: f64) -> Result<f64> {
    ensure_unit_interval("x", x)?;
    ensure_unit_interval("t", t)?;
    let mut sum = 0.0;
    for k in 0..=params.n {
        let w = weight_unchecked(params, k, x);
        if w > 0.0 {
            sum += w * DurrmeyerDensity::new(params, k)?.pdf_unchecked(t);
        }
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(n: u32, alpha: f64, rho: f64) -> OperatorParams {
        OperatorParams::new(n, alpha, rho).unwrap()
    }

    /// p_{n,k}^{(α)} in the factored form, valid for x ∈ (0, 1).
    fn factored_weight(n: u32, alpha: f64, k: u32, x: f64) -> f64 {
        let c = |n: i64, k: i64| -> f64 {
            if k < 0 || k > n {
                0.0
            } else {
                (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
            }
        };
        let (n, k) = (n as i64, k as i64);
        (c(n - 2, k) * (1.0 - alpha) * x
            + c(n - 2, k - 2) * (1.0 - alpha) * (1.0 - x)
            + c(n, k) * alpha * x * (1.0 - x))
            * x.powi(k as i32 - 1)
            * (1.0 - x).powi((n - k - 1) as i32)
    }

    #[test]
    fn params_validation() {
        assert!(OperatorParams::new(1, 0.5, 1.0).is_err());
        assert!(OperatorParams::new(2, -0.1, 1.0).is_err());
        assert!(OperatorParams::new(2, 1.1, 1.0).is_err());
        assert!(OperatorParams::new(2, 0.5, 0.0).is_err());
        assert!(OperatorParams::new(2, 0.5, f64::NAN).is_err());
        assert!(OperatorParams::new(2, 0.0, 1e-3).is_ok());
    }

    #[test]
    fn weight_examples() {
        assert!((basis_weight(&params(2, 1.0, 1.0), 1, 0.5).unwrap() - 0.5).abs() < 1e-15);
        assert!((basis_weight(&params(2, 0.0, 1.0), 0, 0.5).unwrap() - 0.5).abs() < 1e-15);
        let p = params(5, 0.3, 1.0);
        for i in 1..10 {
            let x = i as f64 / 10.0;
            let s: f64 = basis_weights(&p, x).unwrap().iter().sum();
            assert!((s - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn weight_errors() {
        let p = params(5, 0.3, 1.0);
        assert!(matches!(
            basis_weight(&p, 6, 0.5),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            basis_weight(&p, 1, 1.5),
            Err(Error::Domain { .. })
        ));
        assert!(basis_weight(&p, 1, -0.1).is_err());
    }

    #[test]
    fn expanded_form_matches_factored_form_on_open_interval() {
        for n in [2u32, 3, 5, 10, 17] {
            for alpha in [0.0, 0.3, 1.0] {
                for k in 0..=n {
                    for x in [0.05, 0.3, 0.5, 0.77, 0.95] {
                        let a = weight_unchecked(&params(n, alpha, 1.0), k, x);
                        let b = factored_weight(n, alpha, k, x);
                        assert!(
                            (a - b).abs() <= 1e-13 * b.abs().max(1e-300),
                            "n={n} k={k} x={x}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn endpoint_weights_are_indicator() {
        for alpha in [0.0, 0.4, 1.0] {
            let p = params(7, alpha, 2.0);
            let w0 = basis_weights(&p, 0.0).unwrap();
            let w1 = basis_weights(&p, 1.0).unwrap();
            assert_eq!(w0[0], 1.0);
            assert!(w0[1..].iter().all(|&w| w == 0.0));
            assert_eq!(w1[7], 1.0);
            assert!(w1[..7].iter().all(|&w| w == 0.0));
        }
    }

    #[test]
    fn density_examples() {
        let p = params(10, 0.5, 1.0);
        assert!((durrmeyer_log_density(&p, 0, 0.0).unwrap().exp() - 11.0).abs() < 1e-12);
        assert_eq!(
            durrmeyer_log_density(&p, 3, 0.0).unwrap(),
            f64::NEG_INFINITY
        );
        assert!(durrmeyer_log_density(&p, 3, 1.2).is_err());
        for k in 0..=10 {
            for t in [0.1, 0.35, 0.8] {
                let a = durrmeyer_log_density(&p, k, t).unwrap();
                let b = durrmeyer_log_density(&p, 10 - k, 1.0 - t).unwrap();
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn kernel_at_left_endpoint_is_first_density() {
        let p = params(10, 0.5, 2.0);
        let d0 = DurrmeyerDensity::new(&p, 0).unwrap();
        for t in [0.0, 0.1, 0.5] {
            assert!((kernel(&p, 0.0, t).unwrap() - d0.pdf(t).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn kernel_reduces_to_classical_durrmeyer_kernel() {
        let n = 10;
        let p = params(n, 1.0, 1.0);
        for x in [0.0, 0.2, 0.5, 0.9] {
            for t in [0.05, 0.3, 0.6, 1.0] {
                let classical: f64 = (n as f64 + 1.0)
                    * (0..=n)
                        .map(|k| {
                            bernstein_weight(n, k, x).unwrap() * bernstein_weight(n, k, t).unwrap()
                        })
                        .sum::<f64>();
                let ours = kernel(&p, x, t).unwrap();
                assert!(
                    (ours - classical).abs() <= 1e-12 * classical.max(1.0),
                    "x={x} t={t}"
                );
            }
        }
    }

    proptest! {
        #[test]
        fn partition_of_unity_and_nonnegativity(n in 2u32..=200, alpha in 0.0f64..=1.0, x in 0.0f64..=1.0) {
            let w = basis_weights(&params(n, alpha, 1.0), x).unwrap();
            prop_assert!(w.iter().all(|&v| v >= 0.0));
            let s: f64 = w.iter().sum();
            prop_assert!((s - 1.0).abs() <= 1e-12, "sum = {}", s);
        }

        #[test]
        fn alpha_one_is_bernstein(n in 2u32..=120, x in 0.0f64..=1.0) {
            let p = params(n, 1.0, 1.0);
            for k in 0..=n {
                let a = basis_weight(&p, k, x).unwrap();
                let b = bernstein_weight(n, k, x).unwrap();
                prop_assert!((a - b).abs() <= 1e-12 * b.max(1e-300));
            }
        }
    }
}
