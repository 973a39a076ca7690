//! Adaptive composite Gauss–Legendre integration on bounded intervals.
//!
//! Every panel is integrated with a fixed Gauss–Legendre rule and with the
//! same rule on its two halves; the difference is the panel's error estimate
//! and the two-half value is kept. The panel with the largest estimate is
//! bisected until the summed estimate meets the tolerance. Panel values are
//! combined in left-to-right order by pairwise summation, so results are
//! bit-reproducible for a fixed spec.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::Arc;

use crate::basis::{DurrmeyerDensity, OperatorParams};
use crate::error::{Error, Result};

/// Nodes and weights of an n-point Gauss–Legendre rule on [−1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// (P_n(x), P_n'(x)) by the three-term recurrence.
fn legendre_with_derivative(order: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    for j in 2..=order {
        let jf = j as f64;
        let p_next = ((2.0 * jf - 1.0) * x * p - (jf - 1.0) * p_prev) / jf;
        p_prev = p;
        p = p_next;
    }
    let n = order as f64;
    (p, n * (x * p - p_prev) / (x * x - 1.0))
}

impl GaussLegendre {
    pub fn new(order: usize) -> Result<Self> {
        if order < 2 {
            return Err(Error::InvalidQuadrature(format!("order {order} < 2")));
        }
        let mut nodes = vec![0.0; order];
        let mut weights = vec![0.0; order];
        let n = order as f64;
        let half = order.div_ceil(2);
        for i in 0..half {
            // Tricomi initial guess, then Newton.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre_with_derivative(order, x);
                let step = p / dp;
                x -= step;
                if step.abs() <= 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre_with_derivative(order, x);
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[order - 1 - i] = x;
            weights[i] = w;
            weights[order - 1 - i] = w;
        }
        if order % 2 == 1 {
            nodes[half - 1] = 0.0;
        }
        Ok(Self { nodes, weights })
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Single-panel rule on [a, b].
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let sum: f64 = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum();
        half * sum
    }
}

/// Order, tolerances and panel budget for every integral in the crate.
#[derive(Debug, Clone)]
pub struct QuadratureSpec {
    base_order: usize,
    rel_tol: f64,
    abs_tol: f64,
    max_panels: usize,
    rule: Arc<GaussLegendre>,
}

impl QuadratureSpec {
    pub const DEFAULT_ORDER: usize = 32;

    pub fn new(base_order: usize, rel_tol: f64, abs_tol: f64, max_panels: usize) -> Result<Self> {
        if !(rel_tol > 0.0 && abs_tol > 0.0) {
            return Err(Error::InvalidQuadrature(format!(
                "tolerances must be positive (rel {rel_tol}, abs {abs_tol})"
            )));
        }
        if max_panels < 1 {
            return Err(Error::InvalidQuadrature(
                "max_panels must be at least 1".into(),
            ));
        }
        Ok(Self {
            base_order,
            rel_tol,
            abs_tol,
            max_panels,
            rule: Arc::new(GaussLegendre::new(base_order)?),
        })
    }

    pub fn base_order(&self) -> usize {
        self.base_order
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    pub fn abs_tol(&self) -> f64 {
        self.abs_tol
    }

    pub fn max_panels(&self) -> usize {
        self.max_panels
    }

    pub fn rule(&self) -> &GaussLegendre {
        &self.rule
    }

    /// Same rule and budget with new tolerances.
    pub fn with_tolerances(&self, rel_tol: f64, abs_tol: f64) -> Result<Self> {
        Self::new(self.base_order, rel_tol, abs_tol, self.max_panels)
    }

    fn target(&self, estimate: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * estimate.abs())
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self::new(Self::DEFAULT_ORDER, 1e-12, 1e-15, 4096).expect("default spec is valid")
    }
}

/// Sum in a fixed binary-tree order.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        2 => values[0] + values[1],
        len => {
            let (l, r) = values.split_at(len / 2);
            pairwise_sum(l) + pairwise_sum(r)
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    left: f64,
    right: f64,
    error: f64,
    seq: usize,
}

impl Panel {
    fn value(&self) -> f64 {
        self.left + self.right
    }
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

struct Adaptive<'a, F> {
    f: F,
    rule: &'a GaussLegendre,
    seq: usize,
}

impl<F: Fn(f64) -> f64> Adaptive<'_, F> {
    fn panel(&mut self, a: f64, b: f64, whole: f64) -> Panel {
        let mid = 0.5 * (a + b);
        let left = self.rule.integrate(&self.f, a, mid);
        let right = self.rule.integrate(&self.f, mid, b);
        self.seq += 1;
        Panel {
            a,
            b,
            left,
            right,
            error: (whole - (left + right)).abs(),
            seq: self.seq,
        }
    }
}

/// ∫ f over the union of consecutive panels given by `breakpoints`
/// (sorted, at least two entries), refining adaptively.
pub fn integrate_piecewise<F: Fn(f64) -> f64>(
    f: F,
    breakpoints: &[f64],
    spec: &QuadratureSpec,
) -> Result<f64> {
    if breakpoints.len() < 2 {
        return Err(Error::InvalidQuadrature(
            "need at least two breakpoints".into(),
        ));
    }
    if breakpoints.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::InvalidQuadrature(
            "breakpoints must be sorted and finite".into(),
        ));
    }
    let mut adaptive = Adaptive {
        f,
        rule: spec.rule(),
        seq: 0,
    };
    let mut heap = BinaryHeap::new();
    for w in breakpoints.windows(2) {
        if w[1] > w[0] {
            let whole = adaptive.rule.integrate(&adaptive.f, w[0], w[1]);
            heap.push(adaptive.panel(w[0], w[1], whole));
        }
    }
    if heap.is_empty() {
        return Ok(0.0);
    }
    let mut total: f64 = heap.iter().map(Panel::value).sum();
    let mut error: f64 = heap.iter().map(|p| p.error).sum();
    while error > spec.target(total) {
        let worst = heap.pop().expect("non-empty heap");
        let mid = 0.5 * (worst.a + worst.b);
        let splittable = mid > worst.a && mid < worst.b;
        if !splittable || heap.len() + 2 > spec.max_panels() {
            heap.push(worst);
            let panels = finish(heap);
            return Err(Error::QuadratureNotConverged {
                estimate: panels.0,
                error_estimate: panels.1,
                panels: panels.2,
            });
        }
        let l = adaptive.panel(worst.a, mid, worst.left);
        let r = adaptive.panel(mid, worst.b, worst.right);
        total += l.value() + r.value() - worst.value();
        error += l.error + r.error - worst.error;
        heap.push(l);
        heap.push(r);
        if heap.len() % 64 == 0 {
            // Re-sum to shed drift from the running updates.
            total = heap.iter().map(Panel::value).sum();
            error = heap.iter().map(|p| p.error).sum();
        }
    }
    Ok(finish(heap).0)
}

fn finish(heap: BinaryHeap<Panel>) -> (f64, f64, usize) {
    let mut panels = heap.into_vec();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let values: Vec<f64> = panels.iter().map(Panel::value).collect();
    let errors: Vec<f64> = panels.iter().map(|p| p.error).collect();
    (pairwise_sum(&values), pairwise_sum(&errors), panels.len())
}

/// ∫_a^b f(t) dt.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) || a > b {
        return Err(Error::InvalidQuadrature(format!("bad interval [{a}, {b}]")));
    }
    integrate_piecewise(f, &[a, b], spec)
}

/// Breakpoints clustering around the peak of a unimodal density on [lo, hi].
pub(crate) fn peak_breakpoints(center: f64, width: f64, lo: f64, hi: f64) -> Vec<f64> {
    let mut points = vec![lo, hi];
    if width > 0.0 {
        for s in [-12.0, -6.0, -3.0, -1.0, 0.0, 1.0, 3.0, 6.0, 12.0] {
            let p = center + s * width;
            if p > lo && p < hi {
                points.push(p);
            }
        }
    }
    points.sort_by(f64::total_cmp);
    points.dedup();
    points
}

/// ∫_lo^hi μ_{n,k}(t) f(t) dt for a prepared density.
pub fn density_weighted_integral<F: Fn(f64) -> f64>(
    f: F,
    density: &DurrmeyerDensity,
    lo: f64,
    hi: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo > hi {
        return Err(Error::InvalidQuadrature(format!(
            "bad sub-interval [{lo}, {hi}] of [0, 1]"
        )));
    }
    let points = peak_breakpoints(density.mode(), density.std_dev(), lo, hi);
    integrate_piecewise(|t| density.pdf_unchecked(t) * f(t), &points, spec)
}

/// ∫_0^1 μ_{n,k}(t) f(t) dt.
pub fn beta_weighted_integral<F: Fn(f64) -> f64>(
    f: F,
    params: &OperatorParams,
    k: u32,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let density = DurrmeyerDensity::new(params, k)?;
    density_weighted_integral(f, &density, 0.0, 1.0, spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::log_beta;

    #[test]
    fn rule_is_exact_for_high_degree_polynomials() {
        for order in [2usize, 3, 5, 8, 16, 32, 33] {
            let rule = GaussLegendre::new(order).unwrap();
            let wsum: f64 = rule.weights().iter().sum();
            assert!((wsum - 2.0).abs() < 1e-14, "order {order}");
            let deg = 2 * order - 1;
            for d in 0..=deg as i32 {
                let got = rule.integrate(|t| t.powi(d), 0.0, 1.0);
                let exact = 1.0 / (d as f64 + 1.0);
                assert!((got - exact).abs() < 1e-13, "order {order} degree {d}");
            }
        }
    }

    #[test]
    fn order_below_two_is_rejected() {
        assert!(GaussLegendre::new(1).is_err());
        assert!(QuadratureSpec::new(1, 1e-10, 1e-10, 10).is_err());
        assert!(QuadratureSpec::new(8, 0.0, 1e-10, 10).is_err());
        assert!(QuadratureSpec::new(8, 1e-10, 1e-10, 0).is_err());
    }

    #[test]
    fn integrate_examples() {
        let spec = QuadratureSpec::default();
        assert!((integrate(|_| 1.0, 0.0, 1.0, &spec).unwrap() - 1.0).abs() < 1e-15);
        assert!((integrate(|t| t * t, 0.0, 1.0, &spec).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        let got = integrate(|t: f64| t.powf(1.5) * (1.0 - t).powf(2.5), 0.0, 1.0, &spec).unwrap();
        let expected = log_beta(2.5, 3.5).unwrap().exp();
        assert!((got - expected).abs() <= 1e-12 * expected);
        assert_eq!(integrate(|t| t, 0.3, 0.3, &spec).unwrap(), 0.0);
        assert!(integrate(|t| t, 1.0, 0.0, &spec).is_err());
    }

    #[test]
    fn kink_is_resolved_by_bisection() {
        let spec = QuadratureSpec::default();
        let got = integrate(|t: f64| (t - 0.3).abs(), 0.0, 1.0, &spec).unwrap();
        assert!((got - (0.045 + 0.245)).abs() < 1e-12);
    }

    #[test]
    fn budget_exhaustion_reports_best_estimate() {
        let spec = QuadratureSpec::new(4, 1e-15, 1e-300, 3).unwrap();
        match integrate(|t: f64| (40.0 * t).sin().abs(), 0.0, 1.0, &spec) {
            Err(Error::QuadratureNotConverged {
                estimate, panels, ..
            }) => {
                assert!(estimate.is_finite());
                assert!(panels <= 3);
            }
            other => panic!("expected convergence failure, got {other:?}"),
        }
    }

    #[test]
    fn beta_weighted_examples() {
        let spec = QuadratureSpec::default();
        let p = OperatorParams::new(10, 0.4, 1.0).unwrap();
        for k in 0..=10 {
            assert!((beta_weighted_integral(|_| 1.0, &p, k, &spec).unwrap() - 1.0).abs() < 1e-13);
        }
        assert!((beta_weighted_integral(|t| t, &p, 0, &spec).unwrap() - 1.0 / 12.0).abs() < 1e-14);
        let p = OperatorParams::new(37, 0.4, 2.5).unwrap();
        for k in [0, 5, 20, 37] {
            let got = beta_weighted_integral(|t| t, &p, k, &spec).unwrap();
            let expected = (k as f64 * 2.5 + 1.0) / (37.0 * 2.5 + 2.0);
            assert!((got - expected).abs() < 1e-13);
        }
    }

    #[test]
    fn beta_weighted_monomials_match_beta_moments() {
        let spec = QuadratureSpec::default()
            .with_tolerances(1e-12, f64::MIN_POSITIVE)
            .unwrap();
        for (n, rho) in [(2u32, 0.5), (10, 1.0), (50, 4.0), (400, 3.0)] {
            let p = OperatorParams::new(n, 0.5, rho).unwrap();
            for k in [0, n / 3, n] {
                for j in 0..=4i32 {
                    let got = beta_weighted_integral(|t| t.powi(j), &p, k, &spec).unwrap();
                    let expected: f64 = (0..j)
                        .map(|i| {
                            (k as f64 * rho + 1.0 + i as f64) / (n as f64 * rho + 2.0 + i as f64)
                        })
                        .product();
                    assert!(
                        (got - expected).abs() <= spec.rel_tol() * 10.0 * expected,
                        "n={n} k={k} j={j}: {got:e} vs {expected:e}"
                    );
                }
            }
        }
    }

    #[test]
    fn refinement_changes_less_than_error_budget() {
        let coarse = QuadratureSpec::new(8, 1e-6, 1e-12, 4096).unwrap();
        let fine = coarse.with_tolerances(5e-7, 5e-13).unwrap();
        let f = |t: f64| (3.0 * t).exp() * (7.0 * t).cos();
        let a = integrate(f, 0.0, 1.0, &coarse).unwrap();
        let b = integrate(f, 0.0, 1.0, &fine).unwrap();
        assert!((a - b).abs() <= 1e-6 * a.abs());
    }

    #[test]
    fn results_are_bit_reproducible() {
        let spec = QuadratureSpec::default();
        let p = OperatorParams::new(60, 0.2, 4.0).unwrap();
        let f = |t: f64| (t * 9.0).sin() + t.sqrt();
        let a = beta_weighted_integral(f, &p, 17, &spec).unwrap();
        let b = beta_weighted_integral(f, &p, 17, &spec).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn pairwise_sum_matches_naive_on_small_inputs() {
        assert_eq!(pairwise_sum(&[]), 0.0);
        assert_eq!(pairwise_sum(&[1.5]), 1.5);
        assert_eq!(pairwise_sum(&[1.0, 2.0, 3.0, 4.0, 5.0]), 15.0);
    }
}
