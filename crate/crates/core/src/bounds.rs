//! Error estimates for the operator, each evaluated against the measured
//! error |G(f; x) − f(x)|.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::basis::OperatorParams;
use crate::error::{ensure_unit_interval, Error, Result};
use crate::function::ScalarFunction;
use crate::moments::{first_central_moment, second_central_moment};
use crate::operator::{apply, Approximant};
use crate::quadrature::QuadratureSpec;
use crate::smoothness::{
    jump_decompose, modulus, modulus2, modulus_dt, total_variation, ModulusSpec,
};

/// Relative slack allowed when comparing lhs against rhs.
pub const REL_SLACK: f64 = 1e-9;
/// Absolute slack, so that an exact 0 ≤ 0 survives quadrature noise.
pub const ABS_SLACK: f64 = 1e-12;

/// lhs ≤ rhs up to [`REL_SLACK`] and [`ABS_SLACK`].
pub fn within_bound(lhs: f64, rhs: f64) -> bool {
    lhs <= rhs * (1.0 + REL_SLACK) + ABS_SLACK
}

/// Which estimate a report refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremId {
    /// Asymptotic formula n(G(f; x) − f(x)) → limit.
    Voronovskaja,
    /// 5ω(f, √τ₂) + 6.5ω₂(f, √τ₂).
    LocalSteklov,
    /// C·ω_φ(f, √(X/(1 + nρ))).
    GlobalDitzianTotik,
    /// M(τ₂/(k₁x² + k₂x))^{σ/2}.
    Lipschitz,
    /// |τ₁||f′(x)| + 2√τ₂·ω(f′, √τ₂).
    C1,
    /// Estimate for f with derivative of bounded variation.
    Dbv,
}

impl TheoremId {
    pub const ALL: [TheoremId; 6] = [
        TheoremId::Voronovskaja,
        TheoremId::LocalSteklov,
        TheoremId::GlobalDitzianTotik,
        TheoremId::Lipschitz,
        TheoremId::C1,
        TheoremId::Dbv,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            TheoremId::Voronovskaja => "voronovskaja",
            TheoremId::LocalSteklov => "local_steklov",
            TheoremId::GlobalDitzianTotik => "global_ditzian_totik",
            TheoremId::Lipschitz => "lipschitz",
            TheoremId::C1 => "c1",
            TheoremId::Dbv => "dbv",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One evaluated estimate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub theorem: TheoremId,
    pub function: String,
    pub x: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
    pub params: OperatorParams,
    pub extras: BTreeMap<String, f64>,
}

impl BoundReport {
    fn inequality(theorem: TheoremId, approx: &Approximant, x: f64, lhs: f64, rhs: f64) -> Self {
        Self {
            theorem,
            function: approx.function().name().to_string(),
            x,
            lhs,
            rhs,
            satisfied: within_bound(lhs, rhs),
            params: *approx.params(),
            extras: BTreeMap::new(),
        }
    }

    fn extra(mut self, key: &str, value: f64) -> Self {
        self.extras.insert(key.to_string(), value);
        self
    }
}

/// ((1 − 2x)/ρ)f′(x) + ((1 + ρ)x(1 − x)/(2ρ))f″(x).
pub fn voronovskaja_rhs(f: &ScalarFunction, rho: f64, x: f64) -> Result<f64> {
    ensure_unit_interval("x", x)?;
    if !(rho > 0.0) {
        return Err(Error::Domain {
            what: "rho",
            value: rho,
            expected: "> 0",
        });
    }
    let d1 = f.derivative(x)?;
    let d2 = f.second_derivative(x)?;
    Ok((1.0 - 2.0 * x) / rho * d1 + (1.0 + rho) * x * (1.0 - x) / (2.0 * rho) * d2)
}

/// r_n = n(G(f; x) − f(x)) − [`voronovskaja_rhs`] for each n.
pub fn voronovskaja_residuals(
    f: &ScalarFunction,
    alpha: f64,
    rho: f64,
    x: f64,
    n_sequence: &[u32],
    spec: &QuadratureSpec,
) -> Result<Vec<f64>> {
    if n_sequence.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParams(
            "n sequence must be strictly increasing".into(),
        ));
    }
    let limit = voronovskaja_rhs(f, rho, x)?;
    let fx = f.eval(x);
    n_sequence
        .iter()
        .map(|&n| {
            let params = OperatorParams::new(n, alpha, rho)?;
            Ok(n as f64 * (apply(&params, f, x, spec)? - fx) - limit)
        })
        .collect()
}

/// Residuals below this are treated as converged when checking decay.
pub const RESIDUAL_FLOOR: f64 = 1e-9;

/// Summarises [`voronovskaja_residuals`]: lhs = |r| at the largest n, rhs =
/// 0.05(1 + |limit|); satisfied when the residuals shrink from one n to the
/// next for all n ≥ `decay_from`, and the final one is below rhs.
pub fn voronovskaja_report(
    f: &ScalarFunction,
    alpha: f64,
    rho: f64,
    x: f64,
    n_sequence: &[u32],
    decay_from: u32,
    spec: &QuadratureSpec,
) -> Result<BoundReport> {
    let residuals = voronovskaja_residuals(f, alpha, rho, x, n_sequence, spec)?;
    let limit = voronovskaja_rhs(f, rho, x)?;
    let mut violations = 0usize;
    for (w, r) in n_sequence.windows(2).zip(residuals.windows(2)) {
        let shrinking = r[1].abs() < r[0].abs() || r[1].abs() <= RESIDUAL_FLOOR;
        if w[0] >= decay_from && !shrinking {
            violations += 1;
        }
    }
    let last = residuals.last().copied().unwrap_or(0.0).abs();
    let rhs = 0.05 * (1.0 + limit.abs());
    let n_last = n_sequence.last().copied().unwrap_or(2);
    Ok(BoundReport {
        theorem: TheoremId::Voronovskaja,
        function: f.name().to_string(),
        x,
        lhs: last,
        rhs,
        satisfied: violations == 0 && last < rhs,
        params: OperatorParams::new(n_last, alpha, rho)?,
        extras: BTreeMap::from([
            ("limit".to_string(), limit),
            (
                "first_residual".to_string(),
                residuals.first().copied().unwrap_or(0.0),
            ),
            ("decay_violations".to_string(), violations as f64),
        ]),
    })
}

fn measured_error(approx: &Approximant, x: f64) -> Result<f64> {
    Ok(approx.error_at(x)?.abs())
}

/// |G(f; x) − f(x)| ≤ 5ω(f, s) + 6.5ω₂(f, s) with s = √τ₂(x).
pub fn local_bound(approx: &Approximant, x: f64, mspec: &ModulusSpec) -> Result<BoundReport> {
    let lhs = measured_error(approx, x)?;
    let s = second_central_moment(approx.params(), x).sqrt();
    let f = approx.function();
    let w1 = modulus(f, s, mspec)?;
    let w2 = modulus2(f, s, mspec)?;
    Ok(
        BoundReport::inequality(TheoremId::LocalSteklov, approx, x, lhs, 5.0 * w1 + 6.5 * w2)
            .extra("step", s)
            .extra("omega", w1)
            .extra("omega2", w2),
    )
}

/// √(X/(1 + nρ)).
pub fn global_modulus_argument(params: &OperatorParams, empirical_x: f64) -> f64 {
    (empirical_x / (1.0 + params.n_rho())).sqrt()
}

/// The global estimate with an unknown absolute constant: rhs is
/// ω_φ(f, √(X/(1 + nρ))) and the extras carry the ratio lhs/rhs, whose
/// boundedness over n is what can be checked (see [`GlobalRatioSweep`]).
pub fn global_bound(
    approx: &Approximant,
    x: f64,
    empirical_x: f64,
    mspec: &ModulusSpec,
) -> Result<BoundReport> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::Domain {
            what: "x",
            value: x,
            expected: "(0, 1)",
        });
    }
    let lhs = measured_error(approx, x)?;
    let arg = global_modulus_argument(approx.params(), empirical_x);
    let w = modulus_dt(approx.function(), arg, mspec)?;
    let ratio = global_ratio(lhs, w);
    let mut report = BoundReport::inequality(TheoremId::GlobalDitzianTotik, approx, x, lhs, w)
        .extra("argument", arg)
        .extra("empirical_x", empirical_x)
        .extra("ratio", ratio);
    report.satisfied = ratio.is_finite();
    Ok(report)
}

fn global_ratio(lhs: f64, modulus: f64) -> f64 {
    if lhs <= ABS_SLACK {
        0.0
    } else {
        lhs / modulus
    }
}

/// sup over x of lhs/ω_φ for each n of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GlobalRatioSweep {
    pub function: String,
    pub alpha: f64,
    pub rho: f64,
    pub xs: Vec<f64>,
    pub n_list: Vec<u32>,
    pub ratios: Vec<f64>,
}

impl GlobalRatioSweep {
    #[allow(clippy::too_many_arguments)]
    pub fn run(
        f: &ScalarFunction,
        alpha: f64,
        rho: f64,
        xs: &[f64],
        n_list: &[u32],
        empirical_x: f64,
        qspec: &QuadratureSpec,
        mspec: &ModulusSpec,
    ) -> Result<Self> {
        let mut ratios = Vec::with_capacity(n_list.len());
        for &n in n_list {
            let approx = Approximant::new(OperatorParams::new(n, alpha, rho)?, f, qspec)?;
            let mut worst: f64 = 0.0;
            for &x in xs {
                worst = worst.max(global_bound(&approx, x, empirical_x, mspec)?.extras["ratio"]);
            }
            ratios.push(worst);
        }
        Ok(Self {
            function: f.name().to_string(),
            alpha,
            rho,
            xs: xs.to_vec(),
            n_list: n_list.to_vec(),
            ratios,
        })
    }

    /// ratio(n_{i+1}) ≤ (1 + slack)·ratio(n_i) whenever n_i ≥ from.
    pub fn non_increasing_after(&self, from: u32, slack: f64) -> bool {
        self.n_list
            .windows(2)
            .zip(self.ratios.windows(2))
            .filter(|(n, _)| n[0] >= from)
            .all(|(_, r)| r[1] <= (1.0 + slack) * r[0] + ABS_SLACK)
    }
}

/// M(τ₂(x)/(k₁x² + k₂x))^{σ/2} for f in the two-parameter Lipschitz class
/// with constant M, which the caller certifies.
pub fn lipschitz_bound(
    approx: &Approximant,
    m: f64,
    sigma: f64,
    k1: f64,
    k2: f64,
    x: f64,
) -> Result<BoundReport> {
    if !(sigma > 0.0 && sigma <= 1.0) {
        return Err(Error::Domain {
            what: "sigma",
            value: sigma,
            expected: "(0, 1]",
        });
    }
    if !(k1 >= 0.0) || !(k2 > 0.0) || !(m >= 0.0) {
        return Err(Error::InvalidParams(format!(
            "lipschitz parameters need k1 >= 0, k2 > 0, M >= 0 (got k1={k1}, k2={k2}, M={m})"
        )));
    }
    if !(x > 0.0 && x <= 1.0) {
        return Err(Error::Domain {
            what: "x",
            value: x,
            expected: "(0, 1]",
        });
    }
    let lhs = measured_error(approx, x)?;
    let t2 = second_central_moment(approx.params(), x);
    let rhs = m * (t2 / (k1 * x * x + k2 * x)).powf(0.5 * sigma);
    Ok(
        BoundReport::inequality(TheoremId::Lipschitz, approx, x, lhs, rhs)
            .extra("m", m)
            .extra("sigma", sigma)
            .extra("k1", k1)
            .extra("k2", k2),
    )
}

/// |τ₁||f′(x)| + 2√τ₂·ω(f′, √τ₂).
pub fn c1_bound(approx: &Approximant, x: f64, mspec: &ModulusSpec) -> Result<BoundReport> {
    let f = approx.function();
    let df = f.derivative_function()?;
    let lhs = measured_error(approx, x)?;
    let t1 = first_central_moment(approx.params(), x);
    let s = second_central_moment(approx.params(), x).sqrt();
    let w = modulus(&df, s, mspec)?;
    let first = t1.abs() * df.eval(x).abs();
    Ok(
        BoundReport::inequality(TheoremId::C1, approx, x, lhs, first + 2.0 * s * w)
            .extra("first_term", first)
            .extra("omega_derivative", w),
    )
}

/// Estimate for f whose derivative has bounded variation, with the empirical
/// variance constant X. Variations are partition sums with `resolution` points.
///
/// The leading factor is taken as |1 − 2x|/(nρ + 2); the extra
/// `first_term_sign_flagged` is 1 where 1 − 2x < 0.
pub fn dbv_bound(
    approx: &Approximant,
    x: f64,
    resolution: usize,
    empirical_x: f64,
) -> Result<BoundReport> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::Domain {
            what: "x",
            value: x,
            expected: "(0, 1)",
        });
    }
    let params = approx.params();
    let n = params.n() as f64;
    let big_x = empirical_x;
    let scale = 1.0 + params.n_rho();
    let jump = jump_decompose(approx.function(), x)?;
    let g = |t: f64| jump.fx_prime(t);
    let lhs = measured_error(approx, x)?;

    let mean_slope = 0.5 * (jump.d_right() + jump.d_left()).abs();
    let half_jump = 0.5 * (jump.d_right() - jump.d_left()).abs();
    let t1 = (1.0 - 2.0 * x).abs() / (params.n_rho() + 2.0) * mean_slope;
    let t2 = (big_x * x * (1.0 - x) / scale).sqrt() * half_jump;

    let root = n.sqrt();
    let terms = n.sqrt().floor() as usize;
    let mut left_sum = 0.0;
    let mut right_sum = 0.0;
    for k in 1..=terms {
        let k = k as f64;
        left_sum += total_variation(g, x - x / k, x, resolution)?;
        right_sum += total_variation(g, x, x + (1.0 - x) / k, resolution)?;
    }
    let t3 = big_x * (1.0 - x) / scale * left_sum;
    let t4 = x / root * total_variation(g, x - x / root, x, resolution)?;
    let t5 = big_x * x / scale * right_sum;
    let t6 = (1.0 - x) / root * total_variation(g, x, x + (1.0 - x) / root, resolution)?;

    Ok(
        BoundReport::inequality(TheoremId::Dbv, approx, x, lhs, t1 + t2 + t3 + t4 + t5 + t6)
            .extra("empirical_x", big_x)
            .extra("jump_mean_term", t1)
            .extra("jump_term", t2)
            .extra("left_sum_term", t3)
            .extra("left_tail_term", t4)
            .extra("right_sum_term", t5)
            .extra("right_tail_term", t6)
            .extra(
                "first_term_sign_flagged",
                if 1.0 - 2.0 * x < 0.0 { 1.0 } else { 0.0 },
            ),
    )
}

/// X·x(1 − x)/((1 + nρ)(cut − x)²), the bound for either kernel tail.
pub fn kernel_tail_bound(params: &OperatorParams, x: f64, cut: f64, empirical_x: f64) -> f64 {
    empirical_x * x * (1.0 - x) / ((1.0 + params.n_rho()) * (cut - x).powi(2))
}
