//! Raw and central moments of the operator.
//!
//! Two closed forms are provided for the raw moments G(e_i; x):
//!
//! * [`raw_moment`] transcribes the published polynomial coefficients
//!   verbatim. For i ≥ 2 some of them are wrong (see [`published_discrepancies`]),
//!   so this route is only a subject of validation.
//! * [`exact_raw_moment`] re-derives the coefficients. The k-th beta moment
//!   is Π_{l<i}(kρ + 1 + l)/(nρ + 2 + l); its numerator is a polynomial in k,
//!   rewritten in falling factorials via Stirling numbers of the second kind,
//!   and the basis sums of falling factorials are
//!
//!   ```text
//!   Σ_k k^(j) p_{n,k}^{(α)}(x) = x^{j−1} (n−2)^(j−2) [n(n−1)x + j(j−1)(1−α)(1−x)],  j ≥ 2
//!   ```
//!
//!   with Σ_k p = 1 and Σ_k k p = nx.
//!
//! Both are checked against quadrature of the operator applied to e_i.

use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::Serialize;

use crate::basis::{basis_weights, DurrmeyerDensity, OperatorParams};
use crate::error::{ensure_unit_interval, Error, Result};
use crate::function::TestFunction;
use crate::operator::apply;
use crate::quadrature::{density_weighted_integral, pairwise_sum, QuadratureSpec};

/// Highest raw-moment order with a published closed form.
pub const MAX_PUBLISHED_ORDER: u32 = 4;

/// Highest order accepted by the re-derived route.
pub const MAX_EXACT_ORDER: u32 = 12;

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

fn order_error(i: u32, max: u32) -> Error {
    Error::IndexOutOfRange {
        what: "moment order",
        value: i as i64,
        max: max as i64,
    }
}

/// Π_{l<i}(nρ + 2 + l).
fn moment_denominator(params: &OperatorParams, i: u32) -> f64 {
    (0..i).map(|l| params.n_rho() + 2.0 + l as f64).product()
}

/// Coefficients (ascending powers of x) of G(e_i; x) exactly as published.
pub fn published_moment_polynomial(params: &OperatorParams, i: u32) -> Result<Vec<f64>> {
    let n = params.n() as f64;
    let a = params.alpha();
    let r = params.rho();
    let am1 = a - 1.0;
    let numerators: Vec<f64> = match i {
        0 => vec![1.0],
        1 => vec![1.0, n * r],
        2 => vec![
            2.0,
            r * (n * r * r + 3.0 * n * r - 2.0 * am1 * r * r),
            r * r * (n * n + 2.0 * am1 - n),
        ],
        3 => vec![
            6.0,
            r * (n * r * r + 6.0 * n * r + 11.0 * n - 6.0 * am1 * r * (2.0 + r)),
            3.0 * r
                * r
                * (6.0 * n * n + 3.0 * n * r + 3.0 * n * n * r - 6.0 * n * a * r - 6.0 * n
                    + 6.0 * am1 * (2.0 + 3.0 * r)),
            r.powi(3) * (n.powi(3) + 6.0 * n * a - 3.0 * n * n - 4.0 * n - 12.0 * am1),
        ],
        4 => vec![
            24.0,
            r * (35.0 * n * r + 50.0 * n + 10.0 * n * r * r + n * r.powi(3)
                - 2.0 * am1 * r * (7.0 * r * r + 30.0 * r + 35.0)),
            r * r
                * (35.0 * n * (n - 1.0) - 10.0 * n * r + 30.0 * n * n * r
                    - 10.0 * n * (6.0 * a - 4.0) * r
                    - n * r * r
                    + 7.0 * n * n * r * r
                    - 6.0 * n * (6.0 * a - 5.0) * r * r
                    + 2.0 * am1 * (43.0 * r * r + 90.0 * r + 35.0)),
            r.powi(3)
                * (10.0 * n.powi(3) - 30.0 * n * n + 10.0 * n * (6.0 * a - 4.0) - 7.0 * n * n * r
                    + 6.0 * n.powi(3) * r
                    + 6.0 * n * (6.0 * a - 5.0) * r
                    + 6.0 * n * (10.0 * a - 9.0) * r
                    + n * n * (12.0 * a - 1.0) * r
                    - 24.0 * am1 * (6.0 * r + 5.0)),
            r.powi(4)
                * (n.powi(4) - 6.0 * n.powi(3) + 72.0 * am1 - 6.0 * n * (10.0 * a - 9.0)
                    + n * n * (12.0 * a - 1.0)),
        ],
        _ => return Err(order_error(i, MAX_PUBLISHED_ORDER)),
    };
    let d = moment_denominator(params, i);
    Ok(numerators.into_iter().map(|c| c / d).collect())
}

/// Stirling numbers of the second kind S(d, j) for d, j ≤ max.
fn stirling2(max: usize) -> Vec<Vec<f64>> {
    let mut s = vec![vec![0.0; max + 1]; max + 1];
    s[0][0] = 1.0;
    for d in 1..=max {
        for j in 1..=d {
            s[d][j] = j as f64 * s[d - 1][j] + s[d - 1][j - 1];
        }
    }
    s
}

/// Coefficients of Σ_k k^(j) p_{n,k}^{(α)}(x), a polynomial of degree j.
fn falling_factorial_basis_sum(params: &OperatorParams, j: usize) -> Vec<f64> {
    let n = params.n() as f64;
    let mut coeffs = vec![0.0; j + 1];
    match j {
        0 => coeffs[0] = 1.0,
        1 => coeffs[1] = n,
        _ => {
            let ff: f64 = (2..j).map(|m| n - m as f64).product();
            let jj = (j * (j - 1)) as f64;
            let blend = 1.0 - params.alpha();
            coeffs[j] = ff * (n * (n - 1.0) - jj * blend);
            coeffs[j - 1] = ff * jj * blend;
        }
    }
    coeffs
}

/// Coefficients (ascending powers of x) of G(e_i; x), re-derived.
pub fn exact_moment_polynomial(params: &OperatorParams, i: u32) -> Result<Vec<f64>> {
    if i > MAX_EXACT_ORDER {
        return Err(order_error(i, MAX_EXACT_ORDER));
    }
    let i = i as usize;
    // Power coefficients in k of Π_{l<i}(ρk + 1 + l).
    let mut in_k = vec![1.0];
    for l in 0..i {
        let mut next = vec![0.0; in_k.len() + 1];
        for (d, &c) in in_k.iter().enumerate() {
            next[d] += c * (1.0 + l as f64);
            next[d + 1] += c * params.rho();
        }
        in_k = next;
    }
    let s = stirling2(i);
    let mut in_x = vec![0.0; i + 1];
    for (d, &a_d) in in_k.iter().enumerate() {
        for (j, s_dj) in s[d].iter().enumerate().take(d + 1) {
            if *s_dj == 0.0 {
                continue;
            }
            for (p, c) in falling_factorial_basis_sum(params, j)
                .into_iter()
                .enumerate()
            {
                in_x[p] += a_d * s_dj * c;
            }
        }
    }
    let den = moment_denominator(params, i as u32);
    Ok(in_x.into_iter().map(|c| c / den).collect())
}

/// G(e_i; x) from the published closed form, i ∈ 0..=4.
pub fn raw_moment(params: &OperatorParams, i: u32, x: f64) -> Result<f64> {
    ensure_unit_interval("x", x)?;
    Ok(horner(&published_moment_polynomial(params, i)?, x))
}

/// G(e_i; x) from the re-derived closed form.
pub fn exact_raw_moment(params: &OperatorParams, i: u32, x: f64) -> Result<f64> {
    ensure_unit_interval("x", x)?;
    Ok(horner(&exact_moment_polynomial(params, i)?, x))
}

/// G(e_i; x) by quadrature. The integrands are nonnegative, so only the
/// relative tolerance of `spec` is kept; an absolute floor would dominate
/// the tiny values near x = 0.
pub fn quadrature_raw_moment(
    params: &OperatorParams,
    i: u32,
    x: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let relative = spec.with_tolerances(spec.rel_tol(), f64::MIN_POSITIVE)?;
    apply(params, &TestFunction::Monomial(i).build(), x, &relative)
}

/// τ_1 = (1 − 2x)/(nρ + 2).
pub fn first_central_moment(params: &OperatorParams, x: f64) -> f64 {
    (1.0 - 2.0 * x) / (params.n_rho() + 2.0)
}

/// τ_2 = [x(1−x)(ρ(n + (n − 2α + 2)ρ) − 6) + 2] / ((nρ + 2)(nρ + 3)).
pub fn second_central_moment(params: &OperatorParams, x: f64) -> f64 {
    let n = params.n() as f64;
    let r = params.rho();
    let a = params.alpha();
    let nr = params.n_rho();
    (x * (1.0 - x) * (r * (n + (n - 2.0 * a + 2.0) * r) - 6.0) + 2.0) / ((nr + 2.0) * (nr + 3.0))
}

/// τ_m = Σ_j C(m, j)(−x)^{m−j} G(e_j; x) over the re-derived raw moments.
pub fn central_moment_by_expansion(params: &OperatorParams, m: u32, x: f64) -> Result<f64> {
    ensure_unit_interval("x", x)?;
    let mut binom = 1.0;
    let mut terms = Vec::with_capacity(m as usize + 1);
    for j in 0..=m {
        if j > 0 {
            binom = binom * (m - j + 1) as f64 / j as f64;
        }
        terms.push(binom * (-x).powi((m - j) as i32) * exact_raw_moment(params, j, x)?);
    }
    Ok(pairwise_sum(&terms))
}

/// τ_m(x) = G((t − x)^m; x) for m ∈ 1..=4: closed forms for m = 1, 2 and the
/// binomial expansion for m = 3, 4.
pub fn central_moment(params: &OperatorParams, m: u32, x: f64) -> Result<f64> {
    ensure_unit_interval("x", x)?;
    match m {
        1 => Ok(first_central_moment(params, x)),
        2 => Ok(second_central_moment(params, x)),
        3 | 4 => central_moment_by_expansion(params, m, x),
        _ => Err(Error::IndexOutOfRange {
            what: "central moment order",
            value: m as i64,
            max: 4,
        }),
    }
}

/// Large-n limits of n·τ_1, n·τ_2 and n²·τ_4. Independent of α.
pub fn scaled_limit(m: u32, rho: f64, _alpha: f64, x: f64) -> Result<f64> {
    if !(rho > 0.0) {
        return Err(Error::Domain {
            what: "rho",
            value: rho,
            expected: "> 0",
        });
    }
    ensure_unit_interval("x", x)?;
    let v = x * (1.0 - x);
    match m {
        1 => Ok((1.0 - 2.0 * x) / rho),
        2 => Ok(v * (1.0 + rho) / rho),
        4 => Ok(3.0 * v * v * (1.0 + rho).powi(2) / (rho * rho)),
        _ => Err(Error::IndexOutOfRange {
            what: "scaled limit order (1, 2 or 4)",
            value: m as i64,
            max: 4,
        }),
    }
}

/// (1 + nρ)·τ_2(x) / (x(1 − x)) for x ∈ (0, 1).
pub fn variance_ratio(params: &OperatorParams, x: f64) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::Domain {
            what: "x",
            value: x,
            expected: "(0, 1)",
        });
    }
    Ok((1.0 + params.n_rho()) * second_central_moment(params, x) / (x * (1.0 - x)))
}

/// Result of scanning [`variance_ratio`] for its supremum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VarianceConstant {
    pub alpha: f64,
    pub rho: f64,
    /// The scan covers x ∈ [delta, 1 − delta].
    pub delta: f64,
    pub n_min: u32,
    pub n_max: u32,
    pub value: f64,
    pub argmax_x: f64,
    pub argmax_n: u32,
}

pub const DEFAULT_DELTA: f64 = 0.05;
pub const DEFAULT_SCAN_N: RangeInclusive<u32> = 2..=200;
pub const DEFAULT_SCAN_POINTS: usize = 181;

/// Empirical constant X with (1 + nρ)τ_2 ≤ X·x(1 − x) over x ∈ [δ, 1 − δ]
/// (`x_points` uniform samples) and n in `n_range`.
pub fn scan_variance_constant(
    alpha: f64,
    rho: f64,
    delta: f64,
    n_range: RangeInclusive<u32>,
    x_points: usize,
) -> Result<VarianceConstant> {
    if !(delta > 0.0 && delta < 0.5) || x_points < 2 {
        return Err(Error::Domain {
            what: "delta",
            value: delta,
            expected: "(0, 0.5) with at least two points",
        });
    }
    let mut best = VarianceConstant {
        alpha,
        rho,
        delta,
        n_min: *n_range.start(),
        n_max: *n_range.end(),
        value: f64::NEG_INFINITY,
        argmax_x: delta,
        argmax_n: *n_range.start(),
    };
    for n in n_range {
        let params = OperatorParams::new(n, alpha, rho)?;
        for i in 0..x_points {
            let x = delta + (1.0 - 2.0 * delta) * i as f64 / (x_points - 1) as f64;
            let r = variance_ratio(&params, x)?;
            if r > best.value {
                best.value = r;
                best.argmax_x = x;
                best.argmax_n = n;
            }
        }
    }
    Ok(best)
}

/// The default scan: δ = 0.05, n ∈ 2..=200, 181 points.
pub fn default_variance_constant(alpha: f64, rho: f64) -> Result<VarianceConstant> {
    scan_variance_constant(
        alpha,
        rho,
        DEFAULT_DELTA,
        DEFAULT_SCAN_N,
        DEFAULT_SCAN_POINTS,
    )
}

/// Which tail of the kernel mass to integrate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tail {
    /// ∫_0^cut U(x, t) dt with cut < x.
    Lower,
    /// ∫_cut^1 U(x, t) dt with cut > x.
    Upper,
}

/// Kernel mass on one side of `cut`.
pub fn kernel_tail(
    params: &OperatorParams,
    x: f64,
    cut: f64,
    side: Tail,
    spec: &QuadratureSpec,
) -> Result<f64> {
    ensure_unit_interval("x", x)?;
    let (lo, hi) = match side {
        Tail::Lower if (0.0..x).contains(&cut) => (0.0, cut),
        Tail::Upper if cut > x && cut < 1.0 => (cut, 1.0),
        _ => {
            return Err(Error::Domain {
                what: "cut",
                value: cut,
                expected: "0 <= cut < x for the lower tail, x < cut < 1 for the upper tail",
            })
        }
    };
    let weights = basis_weights(params, x)?;
    let terms = weights
        .par_iter()
        .enumerate()
        .map(|(k, &w)| {
            if w == 0.0 {
                return Ok(0.0);
            }
            let density = DurrmeyerDensity::new(params, k as u32)?;
            Ok(w * density_weighted_integral(|_| 1.0, &density, lo, hi, spec)?)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(pairwise_sum(&terms))
}

/// One closed-form value against its quadrature oracle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentReport {
    pub n: u32,
    pub alpha: f64,
    pub rho: f64,
    pub order: u32,
    pub x: f64,
    pub closed_form: f64,
    pub oracle: f64,
    pub abs_err: f64,
    pub rel_err: f64,
}

impl MomentReport {
    pub const CSV_HEADER: [&'static str; 9] = [
        "n",
        "alpha",
        "rho",
        "order",
        "x",
        "closed_form",
        "oracle",
        "abs_err",
        "rel_err",
    ];

    pub fn new(params: &OperatorParams, order: u32, x: f64, closed_form: f64, oracle: f64) -> Self {
        let abs_err = (closed_form - oracle).abs();
        Self {
            n: params.n(),
            alpha: params.alpha(),
            rho: params.rho(),
            order,
            x,
            closed_form,
            oracle,
            abs_err,
            rel_err: abs_err / oracle.abs().max(1e-300),
        }
    }
}

/// A published coefficient that disagrees with the re-derived one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PublishedDiscrepancy {
    /// Raw-moment order i of G(e_i; x).
    pub order: u32,
    /// Power of x whose coefficient is affected.
    pub power: u32,
    /// The numerator bracket as published (over Π_{l<i}(nρ + 2 + l)).
    pub published: &'static str,
    /// The re-derived numerator bracket.
    pub rederived: &'static str,
    /// Condition under which the published value is still correct.
    pub correct_when: &'static str,
}

/// Symbolically re-derived corrections to the published moment coefficients.
pub fn published_discrepancies() -> &'static [PublishedDiscrepancy] {
    const LIST: &[PublishedDiscrepancy] = &[
        PublishedDiscrepancy {
            order: 2,
            power: 1,
            published: "rho*(n*rho^2 + 3*n*rho - 2*(alpha-1)*rho^2)",
            rederived: "rho*(n*rho + 3*n - 2*(alpha-1)*rho)",
            correct_when: "rho = 1",
        },
        PublishedDiscrepancy {
            order: 3,
            power: 2,
            published: "3*rho^2*(6n^2 + 3n*rho + 3n^2*rho - 6n*alpha*rho - 6n + 6(alpha-1)(2+3rho))",
            rederived: "rho^2*(6n^2 + 3n*rho + 3n^2*rho - 6n*alpha*rho - 6n + 6(alpha-1)(2+3rho))",
            correct_when: "never (published value is 3x too large)",
        },
        PublishedDiscrepancy {
            order: 4,
            power: 3,
            published: "rho^3*[10n^3 - 30n^2 + 10n(6alpha-4) - 7n^2 rho + 6n^3 rho + 6n(6alpha-5)rho \
                        + 6n(10alpha-9)rho + n^2(12alpha-1)rho - 24(alpha-1)(6rho+5)]",
            rederived: "2*rho^3*(n-2)*(3n^2 rho + 5n^2 + 3n rho - 5n - 6alpha n rho + 36alpha rho + 30alpha - 36rho - 30)",
            correct_when: "never in general",
        },
    ];
    LIST
}
