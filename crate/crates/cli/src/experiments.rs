//! The experiments behind each command, returned as data so that both the
//! binary and the acceptance suite can use them.

use rayon::prelude::*;
use serde::Serialize;

use durrmeyer_core::bounds::{
    c1_bound, dbv_bound, global_bound, kernel_tail_bound, lipschitz_bound, local_bound,
    voronovskaja_report, GlobalRatioSweep,
};
use durrmeyer_core::function::TestFunction;
use durrmeyer_core::moments::{
    central_moment, central_moment_by_expansion, exact_raw_moment, kernel_tail,
    published_discrepancies, quadrature_raw_moment, raw_moment, scan_variance_constant,
    variance_ratio, PublishedDiscrepancy, Tail, VarianceConstant, DEFAULT_DELTA, DEFAULT_SCAN_N,
    DEFAULT_SCAN_POINTS,
};
use durrmeyer_core::operator::uniform_grid;
use durrmeyer_core::smoothness::ModulusSpec;
use durrmeyer_core::{
    apply, classical_durrmeyer, Approximant, BoundReport, MomentReport, OperatorParams,
    QuadratureSpec, Result, ScalarFunction,
};

/// Relative tolerance for closed form against quadrature.
pub const MOMENT_REL_TOL: f64 = 1e-8;
/// Absolute floor for central moments that pass through zero.
pub const CENTRAL_ABS_TOL: f64 = 1e-14;
/// Tolerance for closed τ₁, τ₂ against their expansion.
pub const CLOSED_CENTRAL_TOL: f64 = 1e-10;

/// Parameter grid of the moment validation.
#[derive(Debug, Clone, Serialize)]
pub struct MomentSweep {
    pub n_list: Vec<u32>,
    pub rhos: Vec<f64>,
    pub alphas: Vec<f64>,
    pub xs: Vec<f64>,
}

impl Default for MomentSweep {
    fn default() -> Self {
        Self {
            n_list: vec![2, 5, 10, 20, 50],
            rhos: vec![0.5, 1.0, 2.0, 4.0],
            alphas: vec![0.0, 0.3, 0.7, 1.0],
            xs: (0..=10).map(|i| i as f64 / 10.0).collect(),
        }
    }
}

impl MomentSweep {
    fn cells(&self) -> Vec<(u32, f64, f64)> {
        let mut cells = Vec::new();
        for &n in &self.n_list {
            for &rho in &self.rhos {
                for &alpha in &self.alphas {
                    cells.push((n, alpha, rho));
                }
            }
        }
        cells
    }

    fn alpha_rho_pairs(&self) -> Vec<(f64, f64)> {
        let mut pairs = Vec::new();
        for &alpha in &self.alphas {
            for &rho in &self.rhos {
                pairs.push((alpha, rho));
            }
        }
        pairs
    }
}

/// Aggregate over one moment item.
#[derive(Debug, Clone, Serialize)]
pub struct ItemSummary {
    /// raw_e{i}, central_tau{m} or closed_tau{m}.
    pub item: String,
    /// published, rederived, expansion or closed.
    pub route: String,
    pub points: usize,
    pub max_abs_err: f64,
    pub max_rel_err: f64,
    /// Points outside tolerance.
    pub disagreements: usize,
    pub agrees: bool,
    /// The published form disagrees and a re-derived coefficient is listed.
    pub flagged: bool,
}

/// (1 + nρ)τ₂/(x(1 − x)) near x = 0 against the interior constant.
#[derive(Debug, Clone, Serialize)]
pub struct EndpointCheck {
    pub alpha: f64,
    pub rho: f64,
    pub x: f64,
    pub n: u32,
    pub ratio: f64,
    pub interior_constant: f64,
    pub factor: f64,
    pub exceeds_tenfold: bool,
}

pub const ENDPOINT_X: f64 = 1e-3;

#[derive(Debug, Clone, Serialize)]
pub struct MomentsCheck {
    #[serde(skip)]
    pub published: Vec<MomentReport>,
    #[serde(skip)]
    pub rederived: Vec<MomentReport>,
    #[serde(skip)]
    pub central: Vec<MomentReport>,
    #[serde(skip)]
    pub closed_central: Vec<MomentReport>,
    pub items: Vec<ItemSummary>,
    pub discrepancies: Vec<PublishedDiscrepancy>,
    pub variance_constants: Vec<VarianceConstant>,
    pub endpoint_checks: Vec<EndpointCheck>,
    pub pass: bool,
}

fn central_function(m: u32, x: f64) -> ScalarFunction {
    ScalarFunction::new(format!("(t-x)^{m}"), move |t: f64| (t - x).powi(m as i32))
}

fn summarize(
    item: String,
    route: &str,
    reports: &[&MomentReport],
    ok: impl Fn(&MomentReport) -> bool,
) -> ItemSummary {
    let disagreements = reports.iter().filter(|r| !ok(r)).count();
    ItemSummary {
        item,
        route: route.to_string(),
        points: reports.len(),
        max_abs_err: reports.iter().map(|r| r.abs_err).fold(0.0, f64::max),
        max_rel_err: reports.iter().map(|r| r.rel_err).fold(0.0, f64::max),
        disagreements,
        agrees: disagreements == 0,
        flagged: false,
    }
}

fn relative_ok(r: &MomentReport) -> bool {
    r.rel_err <= MOMENT_REL_TOL
}

fn central_ok(r: &MomentReport) -> bool {
    r.abs_err <= MOMENT_REL_TOL * r.oracle.abs() + CENTRAL_ABS_TOL
}

fn closed_ok(r: &MomentReport) -> bool {
    r.abs_err <= CLOSED_CENTRAL_TOL
}

/// Closed forms against quadrature over `sweep`, the empirical variance
/// constants and the endpoint behaviour of the variance ratio.
pub fn moments_check(sweep: &MomentSweep, spec: &QuadratureSpec) -> Result<MomentsCheck> {
    let central_spec = spec.with_tolerances(spec.rel_tol(), 1e-18)?;
    type Cell = (
        Vec<MomentReport>,
        Vec<MomentReport>,
        Vec<MomentReport>,
        Vec<MomentReport>,
    );
    let cells: Vec<Cell> = sweep
        .cells()
        .par_iter()
        .map(|&(n, alpha, rho)| -> Result<Cell> {
            let params = OperatorParams::new(n, alpha, rho)?;
            let mut out: Cell = Default::default();
            for &x in &sweep.xs {
                for i in 0..=4 {
                    let oracle = quadrature_raw_moment(&params, i, x, spec)?;
                    out.0.push(MomentReport::new(
                        &params,
                        i,
                        x,
                        raw_moment(&params, i, x)?,
                        oracle,
                    ));
                    out.1.push(MomentReport::new(
                        &params,
                        i,
                        x,
                        exact_raw_moment(&params, i, x)?,
                        oracle,
                    ));
                }
                for m in 3..=4 {
                    let oracle = apply(&params, &central_function(m, x), x, &central_spec)?;
                    out.2.push(MomentReport::new(
                        &params,
                        m,
                        x,
                        central_moment(&params, m, x)?,
                        oracle,
                    ));
                }
                for m in 1..=2 {
                    let expansion = central_moment_by_expansion(&params, m, x)?;
                    out.3.push(MomentReport::new(
                        &params,
                        m,
                        x,
                        central_moment(&params, m, x)?,
                        expansion,
                    ));
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut check = MomentsCheck {
        published: Vec::new(),
        rederived: Vec::new(),
        central: Vec::new(),
        closed_central: Vec::new(),
        items: Vec::new(),
        discrepancies: published_discrepancies().to_vec(),
        variance_constants: Vec::new(),
        endpoint_checks: Vec::new(),
        pass: false,
    };
    for (a, b, c, d) in cells {
        check.published.extend(a);
        check.rederived.extend(b);
        check.central.extend(c);
        check.closed_central.extend(d);
    }

    for i in 0..=4 {
        let of = |v: &[MomentReport]| -> Vec<MomentReport> {
            v.iter().filter(|r| r.order == i).copied().collect()
        };
        let published = of(&check.published);
        let mut s = summarize(
            format!("raw_e{i}"),
            "published",
            &published.iter().collect::<Vec<_>>(),
            relative_ok,
        );
        s.flagged = !s.agrees && check.discrepancies.iter().any(|d| d.order == i);
        check.items.push(s);
        let rederived = of(&check.rederived);
        check.items.push(summarize(
            format!("raw_e{i}"),
            "rederived",
            &rederived.iter().collect::<Vec<_>>(),
            relative_ok,
        ));
    }
    for m in 3..=4 {
        let rs: Vec<&MomentReport> = check.central.iter().filter(|r| r.order == m).collect();
        check.items.push(summarize(
            format!("central_tau{m}"),
            "expansion",
            &rs,
            central_ok,
        ));
    }
    for m in 1..=2 {
        let rs: Vec<&MomentReport> = check
            .closed_central
            .iter()
            .filter(|r| r.order == m)
            .collect();
        check.items.push(summarize(
            format!("closed_tau{m}"),
            "closed",
            &rs,
            closed_ok,
        ));
    }

    for (alpha, rho) in sweep.alpha_rho_pairs() {
        let constant = scan_variance_constant(
            alpha,
            rho,
            DEFAULT_DELTA,
            DEFAULT_SCAN_N,
            DEFAULT_SCAN_POINTS,
        )?;
        check.endpoint_checks.push(endpoint_check(&constant)?);
        check.variance_constants.push(constant);
    }

    let published_consistent = check
        .items
        .iter()
        .filter(|s| s.route == "published")
        .all(|s| s.agrees || s.flagged);
    let listed_are_real = check.discrepancies.iter().all(|d| {
        check
            .items
            .iter()
            .any(|s| s.route == "published" && s.item == format!("raw_e{}", d.order) && !s.agrees)
    });
    let validated = check
        .items
        .iter()
        .filter(|s| s.route != "published")
        .all(|s| s.agrees);
    check.pass = published_consistent && listed_are_real && validated;
    Ok(check)
}

/// Largest variance ratio at [`ENDPOINT_X`] over the same n range as the
/// interior scan.
pub fn endpoint_check(constant: &VarianceConstant) -> Result<EndpointCheck> {
    let mut best = (0.0, constant.n_min);
    for n in constant.n_min..=constant.n_max {
        let r = variance_ratio(
            &OperatorParams::new(n, constant.alpha, constant.rho)?,
            ENDPOINT_X,
        )?;
        if r > best.0 {
            best = (r, n);
        }
    }
    let factor = best.0 / constant.value;
    Ok(EndpointCheck {
        alpha: constant.alpha,
        rho: constant.rho,
        x: ENDPOINT_X,
        n: best.1,
        ratio: best.0,
        interior_constant: constant.value,
        factor,
        exceeds_tenfold: factor > 10.0,
    })
}

/// One row of a sup-error study.
#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    pub n: u32,
    pub sup_error: f64,
    pub argmax_x: f64,
    /// ln(e_n/e_next)/ln(next/n); log₂(e_n/e_2n) when the next n doubles.
    pub order: Option<f64>,
}

pub fn convergence(
    f: &TestFunction,
    alpha: f64,
    rho: f64,
    n_list: &[u32],
    grid: usize,
    spec: &QuadratureSpec,
) -> Result<Vec<ConvergenceRow>> {
    let sf = f.build();
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let s = durrmeyer_core::sup_error(&OperatorParams::new(n, alpha, rho)?, &sf, grid, spec)?;
        rows.push(ConvergenceRow {
            n,
            sup_error: s.sup_error,
            argmax_x: s.argmax_x,
            order: None,
        });
    }
    for i in 0..rows.len().saturating_sub(1) {
        let (a, b) = (&rows[i], &rows[i + 1]);
        if a.sup_error > 0.0 && b.sup_error > 0.0 {
            rows[i].order = Some((a.sup_error / b.sup_error).ln() / (b.n as f64 / a.n as f64).ln());
        }
    }
    Ok(rows)
}

/// Values of f and of several approximants on a grid.
#[derive(Debug, Clone, Serialize)]
pub struct Curves {
    pub xs: Vec<f64>,
    pub f: Vec<f64>,
    pub labels: Vec<String>,
    pub approximants: Vec<Vec<f64>>,
}

impl Curves {
    pub fn sup_errors(&self) -> Vec<f64> {
        self.approximants
            .iter()
            .map(|g| {
                g.iter()
                    .zip(&self.f)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .collect()
    }
}

fn operator_curve(
    params: OperatorParams,
    f: &ScalarFunction,
    xs: &[f64],
    spec: &QuadratureSpec,
) -> Result<Vec<f64>> {
    let approx = Approximant::new(params, f, spec)?;
    xs.iter().map(|&x| approx.eval(x)).collect()
}

/// f, G_{n,ρ}^{(α)}f and the classical D_n f.
pub fn figure1_curves(
    f: &TestFunction,
    n: u32,
    alpha: f64,
    rho: f64,
    grid: usize,
    spec: &QuadratureSpec,
) -> Result<Curves> {
    let sf = f.build();
    let xs = uniform_grid(grid);
    let g = operator_curve(OperatorParams::new(n, alpha, rho)?, &sf, &xs, spec)?;
    let d = xs
        .par_iter()
        .map(|&x| classical_durrmeyer(n, &sf, x, spec))
        .collect::<Result<Vec<_>>>()?;
    Ok(Curves {
        f: xs.iter().map(|&x| sf.eval(x)).collect(),
        xs,
        labels: vec![format!("G_{{{n},{rho}}}^({alpha}) f"), format!("D_{n} f")],
        approximants: vec![g, d],
    })
}

/// f and G_{n,ρ}^{(α)}f for each n.
pub fn figure2_curves(
    f: &TestFunction,
    n_list: &[u32],
    alpha: f64,
    rho: f64,
    grid: usize,
    spec: &QuadratureSpec,
) -> Result<Curves> {
    let sf = f.build();
    let xs = uniform_grid(grid);
    let mut approximants = Vec::new();
    for &n in n_list {
        approximants.push(operator_curve(
            OperatorParams::new(n, alpha, rho)?,
            &sf,
            &xs,
            spec,
        )?);
    }
    Ok(Curves {
        f: xs.iter().map(|&x| sf.eval(x)).collect(),
        xs,
        labels: n_list
            .iter()
            .map(|n| format!("G_{{{n},{rho}}}^({alpha}) f"))
            .collect(),
        approximants,
    })
}

/// Parameter grid of the bound audit.
#[derive(Debug, Clone, Serialize)]
pub struct BoundsSweep {
    #[serde(serialize_with = "serialize_functions")]
    pub functions: Vec<TestFunction>,
    pub xs: Vec<f64>,
    pub n_list: Vec<u32>,
    pub alphas: Vec<f64>,
    pub rhos: Vec<f64>,
    /// n values for the global-ratio sequences.
    pub global_n: Vec<u32>,
    /// x values for the kernel-tail checks.
    pub tail_xs: Vec<f64>,
    /// n sequence for the asymptotic-formula residuals.
    pub voronovskaja_n: Vec<u32>,
    pub voronovskaja_xs: Vec<f64>,
    #[serde(serialize_with = "serialize_functions")]
    pub voronovskaja_functions: Vec<TestFunction>,
    pub dbv_resolution: usize,
}

fn serialize_functions<S: serde::Serializer>(
    fs: &[TestFunction],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(fs.iter().map(|f| f.to_string()))
}

impl Default for BoundsSweep {
    fn default() -> Self {
        Self {
            functions: vec![
                TestFunction::Monomial(2),
                TestFunction::Septic,
                TestFunction::SquareSine,
                TestFunction::AbsCentered,
                TestFunction::ThreeHalvesPower,
            ],
            xs: (1..=9).map(|i| i as f64 / 10.0).collect(),
            n_list: vec![10, 20, 50],
            alphas: vec![0.2, 0.3],
            rhos: vec![1.0, 4.0],
            global_n: vec![10, 20, 50, 100, 200, 400],
            tail_xs: (1..=19).map(|i| i as f64 / 20.0).collect(),
            voronovskaja_n: (0..8).map(|j| 10 << j).collect(),
            voronovskaja_xs: vec![0.25, 0.5, 0.75],
            voronovskaja_functions: vec![
                TestFunction::Monomial(2),
                TestFunction::Monomial(3),
                TestFunction::SquareSine,
            ],
            dbv_resolution: 2001,
        }
    }
}

/// Lipschitz-class instances certified analytically: f = e₁ lies in the
/// class with σ = 1 and M = √(1 + k₁ + k₂).
pub const LIPSCHITZ_INSTANCES: [(f64, f64); 3] = [(0.0, 1.0), (1.0, 1.0), (2.0, 0.5)];

/// One kernel-tail mass against its bound.
#[derive(Debug, Clone, Serialize)]
pub struct TailCheck {
    pub n: u32,
    pub alpha: f64,
    pub rho: f64,
    pub x: f64,
    pub side: Tail,
    pub cut: f64,
    pub value: f64,
    pub bound: f64,
    pub holds: bool,
}

/// Global-ratio sequence with its verdict.
#[derive(Debug, Clone, Serialize)]
pub struct GlobalCheck {
    #[serde(flatten)]
    pub sweep: GlobalRatioSweep,
    pub empirical_x: f64,
    pub non_increasing: bool,
}

pub const GLOBAL_FROM_N: u32 = 20;
pub const GLOBAL_SLACK: f64 = 0.1;

#[derive(Debug, Clone, Serialize)]
pub struct BoundsCheck {
    #[serde(skip)]
    pub reports: Vec<BoundReport>,
    pub global: Vec<GlobalCheck>,
    #[serde(skip)]
    pub tails: Vec<TailCheck>,
    #[serde(skip)]
    pub voronovskaja: Vec<BoundReport>,
    pub variance_constants: Vec<VarianceConstant>,
    pub pass: bool,
}

impl BoundsCheck {
    pub fn inequality_reports(&self) -> impl Iterator<Item = &BoundReport> {
        self.reports
            .iter()
            .filter(|r| r.theorem != durrmeyer_core::TheoremId::GlobalDitzianTotik)
    }
}

fn variance_constant(alpha: f64, rho: f64) -> Result<VarianceConstant> {
    scan_variance_constant(
        alpha,
        rho,
        DEFAULT_DELTA,
        DEFAULT_SCAN_N,
        DEFAULT_SCAN_POINTS,
    )
}

/// Every estimate over `sweep`.
pub fn bounds_check(
    sweep: &BoundsSweep,
    spec: &QuadratureSpec,
    mspec: &ModulusSpec,
) -> Result<BoundsCheck> {
    let mut pairs = Vec::new();
    for &alpha in &sweep.alphas {
        for &rho in &sweep.rhos {
            pairs.push((alpha, rho));
        }
    }
    let constants = pairs
        .iter()
        .map(|&(a, r)| variance_constant(a, r))
        .collect::<Result<Vec<_>>>()?;
    let constant_for = |alpha: f64, rho: f64| -> f64 {
        constants
            .iter()
            .find(|c| c.alpha == alpha && c.rho == rho)
            .map(|c| c.value)
            .expect("constant computed for every pair")
    };

    let mut cells = Vec::new();
    for f in &sweep.functions {
        for &n in &sweep.n_list {
            for &(alpha, rho) in &pairs {
                cells.push((f.clone(), n, alpha, rho));
            }
        }
    }
    let lipschitz_cells: Vec<(u32, f64, f64)> = sweep
        .n_list
        .iter()
        .flat_map(|&n| pairs.iter().map(move |&(a, r)| (n, a, r)))
        .collect();

    let mut reports: Vec<BoundReport> = cells
        .par_iter()
        .map(|(f, n, alpha, rho)| -> Result<Vec<BoundReport>> {
            let approx =
                Approximant::new(OperatorParams::new(*n, *alpha, *rho)?, &f.build(), spec)?;
            let big_x = constant_for(*alpha, *rho);
            let mut out = Vec::new();
            for &x in &sweep.xs {
                out.push(local_bound(&approx, x, mspec)?);
                if f.is_c1() {
                    out.push(c1_bound(&approx, x, mspec)?);
                }
                out.push(dbv_bound(&approx, x, sweep.dbv_resolution, big_x)?);
                out.push(global_bound(&approx, x, big_x, mspec)?);
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let lipschitz: Vec<BoundReport> = lipschitz_cells
        .par_iter()
        .map(|&(n, alpha, rho)| -> Result<Vec<BoundReport>> {
            let approx = Approximant::new(
                OperatorParams::new(n, alpha, rho)?,
                &TestFunction::Monomial(1).build(),
                spec,
            )?;
            let mut out = Vec::new();
            for &x in &sweep.xs {
                for (k1, k2) in LIPSCHITZ_INSTANCES {
                    out.push(lipschitz_bound(
                        &approx,
                        (1.0 + k1 + k2).sqrt(),
                        1.0,
                        k1,
                        k2,
                        x,
                    )?);
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    reports.extend(lipschitz);

    let global_cells: Vec<(TestFunction, f64, f64)> = sweep
        .functions
        .iter()
        .flat_map(|f| pairs.iter().map(move |&(a, r)| (f.clone(), a, r)))
        .collect();
    let global = global_cells
        .par_iter()
        .map(|(f, alpha, rho)| -> Result<GlobalCheck> {
            let big_x = constant_for(*alpha, *rho);
            let s = GlobalRatioSweep::run(
                &f.build(),
                *alpha,
                *rho,
                &sweep.xs,
                &sweep.global_n,
                big_x,
                spec,
                mspec,
            )?;
            let ok = s.non_increasing_after(GLOBAL_FROM_N, GLOBAL_SLACK);
            Ok(GlobalCheck {
                sweep: s,
                empirical_x: big_x,
                non_increasing: ok,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut tail_cells = Vec::new();
    for &n in &sweep.n_list {
        for &(alpha, rho) in &pairs {
            for &x in &sweep.tail_xs {
                tail_cells.push((n, alpha, rho, x));
            }
        }
    }
    let tails = tail_cells
        .par_iter()
        .map(|&(n, alpha, rho, x)| -> Result<Vec<TailCheck>> {
            let params = OperatorParams::new(n, alpha, rho)?;
            let big_x = constant_for(alpha, rho);
            let root = (n as f64).sqrt();
            let mut out = Vec::new();
            for (side, cut) in [
                (Tail::Lower, x - x / root),
                (Tail::Upper, x + (1.0 - x) / root),
            ] {
                let value = kernel_tail(&params, x, cut, side, spec)?;
                let bound = kernel_tail_bound(&params, x, cut, big_x);
                out.push(TailCheck {
                    n,
                    alpha,
                    rho,
                    x,
                    side,
                    cut,
                    value,
                    bound,
                    holds: value <= bound,
                });
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect::<Vec<_>>();

    let mut v_cells = Vec::new();
    for f in &sweep.voronovskaja_functions {
        for &x in &sweep.voronovskaja_xs {
            for &(alpha, rho) in &pairs {
                v_cells.push((f.clone(), x, alpha, rho));
            }
        }
    }
    let voronovskaja = v_cells
        .par_iter()
        .map(|(f, x, alpha, rho)| {
            voronovskaja_report(
                &f.build(),
                *alpha,
                *rho,
                *x,
                &sweep.voronovskaja_n,
                20,
                spec,
            )
        })
        .collect::<Result<Vec<_>>>()?;

    let pass = reports.iter().all(|r| r.satisfied)
        && global.iter().all(|g| g.non_increasing)
        && tails.iter().all(|t| t.holds)
        && voronovskaja.iter().all(|r| r.satisfied);
    Ok(BoundsCheck {
        reports,
        global,
        tails,
        voronovskaja,
        variance_constants: constants,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_moment_sweep_passes() {
        let sweep = MomentSweep {
            n_list: vec![2, 7],
            rhos: vec![1.0, 2.0],
            alphas: vec![0.3],
            xs: vec![0.0, 0.4, 1.0],
        };
        let check = moments_check(&sweep, &QuadratureSpec::default()).unwrap();
        assert!(check.pass);
        let e2 = check
            .items
            .iter()
            .find(|s| s.item == "raw_e2" && s.route == "published")
            .unwrap();
        assert!(e2.flagged && !e2.agrees);
        let e1 = check
            .items
            .iter()
            .find(|s| s.item == "raw_e1" && s.route == "published")
            .unwrap();
        assert!(e1.agrees && !e1.flagged);
        assert_eq!(check.published.len(), 2 * 2 * 3 * 5);
        assert!(check.endpoint_checks.iter().all(|e| e.exceeds_tenfold));
    }

    #[test]
    fn convergence_orders() {
        let rows = convergence(
            &TestFunction::Monomial(1),
            1.0,
            1.0,
            &[10, 20, 40],
            33,
            &QuadratureSpec::default(),
        )
        .unwrap();
        // sup error 1/(n + 2)
        let expected = (22.0f64 / 12.0).log2();
        assert!((rows[0].order.unwrap() - expected).abs() < 1e-9);
        assert!(rows[2].order.is_none());
    }

    #[test]
    fn figure_curves_shape() {
        let c = figure2_curves(
            &TestFunction::Monomial(2),
            &[5, 10],
            0.2,
            4.0,
            17,
            &QuadratureSpec::default(),
        )
        .unwrap();
        assert_eq!(c.approximants.len(), 2);
        assert_eq!(c.xs.len(), 17);
        let e = c.sup_errors();
        assert!(e[1] < e[0]);
    }
}
