//! Machine-checkable versions of the distance-distribution claims:
//! goodness of fit of the analytic CDFs against simulation, first-order
//! stochastic dominance, the PPP limit for large clusters and the ordering
//! of the CDFs in the cluster radius.

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::analytic::{ppp_contact_cdf, MaternCdf};
use crate::error::{Error, Result};
use crate::kernels::McpParams;
use crate::simulate::{
    default_window_radius, palm_draws, sample_contact_distance, window_draws, EmpiricalCdf,
    PalmMode, SimulationConfig,
};

/// Tolerance absorbing quadrature error in the exact inequality checks.
pub const DOMINANCE_TOL: f64 = 1e-9;

/// One-sample KS threshold used against the analytic CDFs.
pub const KS_THRESHOLD: f64 = 0.02;

/// Sup-norm gap to the PPP CDF allowed at the largest cluster radius of the
/// default sweep (`r_d = 320`, `λ_p = 2e-5`, `m̄ = 30`, `r ∈ [0, 160]`).
/// Direct integration puts the contact gap there at about 0.041.
pub const PPP_GAP_THRESHOLD: f64 = 0.05;

/// Sup over `[0, r_max]` of `|F_emp - F|`, checked on both sides of every
/// jump and at the censoring boundary.
pub fn ks_statistic<F: FnMut(f64) -> f64>(ecdf: &EmpiricalCdf, mut analytic_f: F) -> f64 {
    let n = ecdf.n_total() as f64;
    if n == 0.0 {
        return 0.0;
    }
    let samples = ecdf.sorted_samples();
    let mut d = samples.iter().enumerate().fold(0.0f64, |acc, (i, &s)| {
        let f = analytic_f(s);
        acc.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n)
    });
    d = d.max((samples.len() as f64 / n - analytic_f(ecdf.r_max())).abs());
    d
}

/// Two-sample KS statistic between censored empirical CDFs sharing `r_max`.
pub fn ks_two_sample(a: &EmpiricalCdf, b: &EmpiricalCdf) -> f64 {
    let (xs, ys) = (a.sorted_samples(), b.sorted_samples());
    let (n, m) = (a.n_total() as f64, b.n_total() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d = 0.0f64;
    while i < xs.len() || j < ys.len() {
        let next = match (xs.get(i), ys.get(j)) {
            (Some(x), Some(y)) => x.min(*y),
            (Some(x), None) => *x,
            (None, Some(y)) => *y,
            (None, None) => unreachable!(),
        };
        while i < xs.len() && xs[i] <= next {
            i += 1;
        }
        while j < ys.len() && ys[j] <= next {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    d
}

/// Survival function of the Kolmogorov distribution,
/// `2 Σ (-1)^{k-1} exp(-2 k² t²)`.
pub fn kolmogorov_survival(t: f64) -> f64 {
    if t <= 0.0 {
        return 1.0;
    }
    if t < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let k = k as f64;
        let term = (-2.0 * k * k * t * t).exp();
        sum += if k as u64 % 2 == 1 { term } else { -term };
        if term < 1e-17 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Asymptotic p-value of a two-sample KS statistic, with the usual
/// small-sample correction to the scaling.
pub fn ks_two_sample_p_value(d: f64, n: usize, m: usize) -> f64 {
    let ne = (n as f64 * m as f64) / (n as f64 + m as f64);
    let sqrt_ne = ne.sqrt();
    kolmogorov_survival((sqrt_ne + 0.12 + 0.11 / sqrt_ne) * d)
}

/// Critical value `c(α)` of the Kolmogorov distribution; the one-sample
/// threshold is `c(α) / √n`.
pub fn kolmogorov_critical(alpha: f64) -> f64 {
    let (mut lo, mut hi) = (0.2, 5.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if kolmogorov_survival(mid) > alpha {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub degrees_of_freedom: usize,
    pub p_value: f64,
}

/// Pearson goodness of fit of integer counts against a PMF on
/// `offset, offset + 1, ...`. Bins with expected count below 5 are merged
/// into their neighbors, and the upper tail mass goes into the last bin.
pub fn chi_square_gof<P: Fn(u64) -> f64>(counts: &[(u64, u64)], pmf: P) -> Result<ChiSquareResult> {
    let total: u64 = counts.iter().map(|(_, c)| c).sum();
    if total == 0 {
        return Err(Error::InvalidParameter {
            name: "counts",
            value: 0.0,
            reason: "no observations",
        });
    }
    let n = total as f64;
    let max_value = counts.iter().map(|(v, _)| *v).max().unwrap_or(0);
    let observed = |v: u64| {
        counts
            .iter()
            .filter(|(x, _)| *x == v)
            .map(|(_, c)| *c)
            .sum::<u64>()
    };

    let mut bins: Vec<(f64, f64)> = Vec::new();
    let mut acc = (0.0, 0.0);
    let mut mass = 0.0;
    for v in 0..=max_value {
        let p = pmf(v);
        mass += p;
        acc.0 += observed(v) as f64;
        acc.1 += n * p;
        if acc.1 >= 5.0 {
            bins.push(acc);
            acc = (0.0, 0.0);
        }
    }
    acc.1 += n * (1.0 - mass).max(0.0);
    match bins.last_mut() {
        Some(last) if acc.1 < 5.0 => {
            last.0 += acc.0;
            last.1 += acc.1;
        }
        _ => bins.push(acc),
    }
    if bins.len() < 2 {
        return Err(Error::InvalidParameter {
            name: "counts",
            value: bins.len() as f64,
            reason: "need at least two bins with expected count >= 5",
        });
    }
    let statistic = bins.iter().map(|(o, e)| (o - e) * (o - e) / e).sum();
    let dof = bins.len() - 1;
    let dist = ChiSquared::new(dof as f64).expect("positive degrees of freedom");
    Ok(ChiSquareResult {
        statistic,
        degrees_of_freedom: dof,
        p_value: 1.0 - dist.cdf(statistic),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DominanceKind {
    /// `F_N(r) ≥ F_C(r)`.
    NearestNeighborOverContact,
    /// `F_PPP(r) ≥ F_C(r)` for the density-matched PPP.
    PppOverContact,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub kind: DominanceKind,
    pub r: f64,
    /// Amount by which the inequality fails (positive).
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DominanceReport {
    pub params: McpParams,
    pub grid_points: usize,
    pub tol: f64,
    pub violations: Vec<Violation>,
    /// Smallest margin `lhs - rhs` seen over both inequalities, and where.
    pub worst_margin: f64,
    pub worst_r: f64,
}

impl DominanceReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks both dominance inequalities pointwise on `grid`.
pub fn check_dominance(params: &McpParams, grid: &[f64], tol: f64) -> Result<DominanceReport> {
    check_dominance_against(params, grid, tol, ppp_contact_cdf)
}

/// [`check_dominance`] with a caller-supplied PPP baseline `(density, r) -> F`.
pub fn check_dominance_against<B>(
    params: &McpParams,
    grid: &[f64],
    tol: f64,
    baseline: B,
) -> Result<DominanceReport>
where
    B: Fn(f64, f64) -> f64,
{
    let eval = MaternCdf::new(*params);
    let curve = eval.curve(
        grid,
        &[
            crate::Distribution::Contact,
            crate::Distribution::NearestNeighbor,
        ],
    )?;
    let contact = curve.values(crate::Distribution::Contact).unwrap();
    let nn = curve.values(crate::Distribution::NearestNeighbor).unwrap();

    let mut violations = Vec::new();
    let (mut worst_margin, mut worst_r) = (f64::INFINITY, 0.0);
    for (i, &r) in grid.iter().enumerate() {
        let ppp = baseline(params.point_density(), r);
        for (kind, lhs) in [
            (DominanceKind::NearestNeighborOverContact, nn[i]),
            (DominanceKind::PppOverContact, ppp),
        ] {
            let margin = lhs - contact[i];
            if margin < worst_margin {
                worst_margin = margin;
                worst_r = r;
            }
            if !(margin >= -tol) {
                violations.push(Violation {
                    kind,
                    r,
                    gap: -margin,
                });
            }
        }
    }
    Ok(DominanceReport {
        params: *params,
        grid_points: grid.len(),
        tol,
        violations,
        worst_margin,
        worst_r,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceGap {
    pub r_d: f64,
    /// `sup_r |F_C - F_PPP|` over the grid, and where it occurs.
    pub contact_gap: f64,
    pub contact_gap_r: f64,
    pub nn_gap: f64,
    pub nn_gap_r: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub lambda_p: f64,
    pub m_bar: f64,
    pub gaps: Vec<ConvergenceGap>,
    pub threshold: f64,
    /// Contact gaps strictly decrease along the `r_d` list.
    pub contact_decreasing: bool,
    /// Nearest-neighbor gaps are nonincreasing. Informational only.
    pub nn_nonincreasing: bool,
    pub final_gap_below_threshold: bool,
    pub warnings: Vec<String>,
}

impl ConvergenceReport {
    pub fn passed(&self) -> bool {
        self.contact_decreasing && self.final_gap_below_threshold
    }
}

/// Sup-norm distance of the contact and nearest-neighbor CDFs to the PPP
/// CDF of density `m̄ λ_p`, for each cluster radius in `r_d_list`.
pub fn check_ppp_convergence(
    lambda_p: f64,
    m_bar: f64,
    r_d_list: &[f64],
    grid: &[f64],
    threshold: f64,
) -> Result<ConvergenceReport> {
    if r_d_list.is_empty() {
        return Err(Error::InvalidParameter {
            name: "r_d_list",
            value: 0.0,
            reason: "need at least one cluster radius",
        });
    }
    if r_d_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter {
            name: "r_d_list",
            value: f64::NAN,
            reason: "cluster radii must be strictly ascending",
        });
    }
    let mut gaps = Vec::with_capacity(r_d_list.len());
    for &r_d in r_d_list {
        let params = McpParams::new(lambda_p, m_bar, r_d)?;
        let curve = MaternCdf::new(params).curve(grid, &crate::Distribution::ALL)?;
        let ppp = curve.values(crate::Distribution::PppBaseline).unwrap();
        let sup = |values: &[f64]| {
            values
                .iter()
                .zip(ppp)
                .zip(grid)
                .map(|((v, p), r)| ((v - p).abs(), *r))
                .fold(
                    (0.0, 0.0),
                    |best, cur| if cur.0 > best.0 { cur } else { best },
                )
        };
        let (contact_gap, contact_gap_r) = sup(curve.values(crate::Distribution::Contact).unwrap());
        let (nn_gap, nn_gap_r) = sup(curve.values(crate::Distribution::NearestNeighbor).unwrap());
        gaps.push(ConvergenceGap {
            r_d,
            contact_gap,
            contact_gap_r,
            nn_gap,
            nn_gap_r,
        });
    }
    let contact_decreasing = gaps.windows(2).all(|w| w[1].contact_gap < w[0].contact_gap);
    let nn_nonincreasing = gaps.windows(2).all(|w| w[1].nn_gap <= w[0].nn_gap);
    let last = gaps.last().unwrap();
    let final_gap_below_threshold = last.contact_gap <= threshold && last.nn_gap <= threshold;
    let mut warnings = Vec::new();
    if !nn_nonincreasing {
        warnings.push("nearest-neighbor gap is not monotone in r_d".to_string());
    }
    Ok(ConvergenceReport {
        lambda_p,
        m_bar,
        threshold,
        contact_decreasing,
        nn_nonincreasing,
        final_gap_below_threshold,
        gaps,
        warnings,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderingReport {
    pub lambda_p: f64,
    pub m_bar: f64,
    pub r_d_small: f64,
    pub r_d_large: f64,
    pub tol: f64,
    /// Radii where the larger cluster radius has the smaller contact CDF.
    pub contact_violations: Vec<f64>,
    /// Radii where the larger cluster radius has the larger NN CDF.
    pub nn_violations: Vec<f64>,
}

impl OrderingReport {
    pub fn passed(&self) -> bool {
        self.contact_violations.is_empty() && self.nn_violations.is_empty()
    }
}

/// Growing the cluster radius makes the contact distance stochastically
/// smaller and the nearest-neighbor distance stochastically larger.
pub fn check_figure2_ordering(
    lambda_p: f64,
    m_bar: f64,
    r_d_small: f64,
    r_d_large: f64,
    grid: &[f64],
    tol: f64,
) -> Result<OrderingReport> {
    if r_d_small > r_d_large {
        return Err(Error::InvalidParameter {
            name: "r_d_small",
            value: r_d_small,
            reason: "must not exceed r_d_large",
        });
    }
    let which = [
        crate::Distribution::Contact,
        crate::Distribution::NearestNeighbor,
    ];
    let small = MaternCdf::new(McpParams::new(lambda_p, m_bar, r_d_small)?).curve(grid, &which)?;
    let large = MaternCdf::new(McpParams::new(lambda_p, m_bar, r_d_large)?).curve(grid, &which)?;
    let pick = |c: &crate::CdfCurve, d| c.values(d).unwrap().to_vec();
    let (cs, cl) = (pick(&small, which[0]), pick(&large, which[0]));
    let (ns, nl) = (pick(&small, which[1]), pick(&large, which[1]));
    let contact_violations = grid
        .iter()
        .enumerate()
        .filter(|(i, _)| !(cl[*i] >= cs[*i] - tol))
        .map(|(_, r)| *r)
        .collect();
    let nn_violations = grid
        .iter()
        .enumerate()
        .filter(|(i, _)| !(nl[*i] <= ns[*i] + tol))
        .map(|(_, r)| *r)
        .collect();
    Ok(OrderingReport {
        lambda_p,
        m_bar,
        r_d_small,
        r_d_large,
        tol,
        contact_violations,
        nn_violations,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KsCheck {
    pub statistic: f64,
    pub threshold: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoSampleCheck {
    pub statistic: f64,
    pub p_value: f64,
    pub alpha: f64,
    pub passed: bool,
}

/// Everything needed to rerun a validation.
#[derive(Debug, Clone)]
pub struct ValidationSuite {
    /// Parameters for the simulation-based checks.
    pub params: McpParams,
    pub simulation: SimulationConfig,
    /// Grid for dominance, convergence and ordering checks.
    pub grid: Vec<f64>,
    /// Ascending cluster radii for the PPP-limit and ordering checks.
    pub r_d_sweep: Vec<f64>,
    pub ks_threshold: f64,
    pub two_sample_alpha: f64,
    pub dominance_tol: f64,
    pub ppp_gap_threshold: f64,
    /// PPP CDF used in the dominance check, `(density, r) -> F`.
    pub ppp_baseline: fn(f64, f64) -> f64,
}

impl ValidationSuite {
    /// Defaults: `λ_p = 2e-5`, `m̄ = 30`, `r_d = 40`, `10⁴` realizations
    /// censored at 160, a 200-point grid on `[0, 160]` and the sweep
    /// `r_d ∈ {20, 80, 320}`.
    pub fn new(params: McpParams, seed: u64) -> Self {
        let r_max = 4.0 * params.r_d();
        Self {
            params,
            simulation: SimulationConfig::new(10_000, r_max, seed),
            grid: (0..200).map(|i| r_max * i as f64 / 199.0).collect(),
            r_d_sweep: vec![20.0, 80.0, 320.0],
            ks_threshold: KS_THRESHOLD,
            two_sample_alpha: 0.05,
            dominance_tol: DOMINANCE_TOL,
            ppp_gap_threshold: PPP_GAP_THRESHOLD,
            ppp_baseline: ppp_contact_cdf,
        }
    }

    pub fn run(&self) -> Result<ValidationReport> {
        let eval = MaternCdf::new(self.params);
        let sim = &self.simulation;

        let contact_ecdf = sample_contact_distance(&self.params, sim)?;
        let mut eval_err = None;
        let ks_c = ks_statistic(&contact_ecdf, |r| {
            eval.contact_cdf(r).unwrap_or_else(|e| {
                eval_err.get_or_insert(e);
                f64::NAN
            })
        });

        let palm = palm_draws(&self.params, sim, PalmMode::Full)?;
        let palm_ecdf = EmpiricalCdf::from_samples(palm.iter().map(|d| d.distance), sim.r_max)?;
        let ks_n = ks_statistic(&palm_ecdf, |r| {
            eval.nn_cdf(r).unwrap_or_else(|e| {
                eval_err.get_or_insert(e);
                f64::NAN
            })
        });
        if let Some(e) = eval_err {
            return Err(e);
        }

        let window = window_draws(
            &self.params,
            sim,
            default_window_radius(&self.params, sim.r_max),
        )?;
        let window_ecdf =
            EmpiricalCdf::from_samples(window.draws.iter().map(|d| d.distance), sim.r_max)?;
        let d2 = ks_two_sample(&palm_ecdf, &window_ecdf);
        let p2 = ks_two_sample_p_value(d2, palm_ecdf.n_total(), window_ecdf.n_total());

        let mut dominance = vec![check_dominance_against(
            &self.params,
            &self.grid,
            self.dominance_tol,
            self.ppp_baseline,
        )?];
        for &r_d in &self.r_d_sweep {
            let p = self.params.with_r_d(r_d)?;
            dominance.push(check_dominance_against(
                &p,
                &self.grid,
                self.dominance_tol,
                self.ppp_baseline,
            )?);
        }

        let convergence = check_ppp_convergence(
            self.params.lambda_p(),
            self.params.m_bar(),
            &self.r_d_sweep,
            &self.grid,
            self.ppp_gap_threshold,
        )?;
        let ordering = self
            .r_d_sweep
            .windows(2)
            .map(|w| {
                check_figure2_ordering(
                    self.params.lambda_p(),
                    self.params.m_bar(),
                    w[0],
                    w[1],
                    &self.grid,
                    self.dominance_tol,
                )
            })
            .collect::<Result<Vec<_>>>()?;

        let ks_contact = KsCheck {
            statistic: ks_c,
            threshold: self.ks_threshold,
            passed: ks_c <= self.ks_threshold,
        };
        let ks_nn = KsCheck {
            statistic: ks_n,
            threshold: self.ks_threshold,
            passed: ks_n <= self.ks_threshold,
        };
        let two_sample = TwoSampleCheck {
            statistic: d2,
            p_value: p2,
            alpha: self.two_sample_alpha,
            passed: p2 > self.two_sample_alpha,
        };
        let mut failures = Vec::new();
        if !ks_contact.passed {
            failures.push(format!("contact KS {ks_c:.4} > {}", self.ks_threshold));
        }
        if !ks_nn.passed {
            failures.push(format!(
                "nearest-neighbor KS {ks_n:.4} > {}",
                self.ks_threshold
            ));
        }
        if !two_sample.passed {
            failures.push(format!("palm vs window samplers differ (p = {p2:.4})"));
        }
        for d in &dominance {
            for v in &d.violations {
                failures.push(format!(
                    "dominance {:?} fails at r = {} (r_d = {}) by {:e}",
                    v.kind,
                    v.r,
                    d.params.r_d(),
                    v.gap
                ));
            }
        }
        if !convergence.contact_decreasing {
            failures.push("contact gap to the PPP does not strictly decrease in r_d".into());
        }
        if !convergence.final_gap_below_threshold {
            failures.push(format!(
                "gap to the PPP at r_d = {} exceeds {}",
                convergence.gaps.last().unwrap().r_d,
                convergence.threshold
            ));
        }
        for o in &ordering {
            if !o.passed() {
                failures.push(format!(
                    "r_d ordering {} -> {} fails at {} radii",
                    o.r_d_small,
                    o.r_d_large,
                    o.contact_violations.len() + o.nn_violations.len()
                ));
            }
        }

        Ok(ValidationReport {
            tool_version: env!("CARGO_PKG_VERSION"),
            params: self.params,
            simulation: *sim,
            window_redraws: window.redraws,
            censored_contact: contact_ecdf.n_censored(),
            censored_nn: palm_ecdf.n_censored(),
            ks_contact,
            ks_nn,
            two_sample,
            dominance,
            convergence,
            ordering,
            passed: failures.is_empty(),
            failures,
        })
    }
}

/// Self-describing result of [`ValidationSuite::run`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub tool_version: &'static str,
    pub params: McpParams,
    pub simulation: SimulationConfig,
    pub window_redraws: u64,
    pub censored_contact: usize,
    pub censored_nn: usize,
    pub ks_contact: KsCheck,
    pub ks_nn: KsCheck,
    pub two_sample: TwoSampleCheck,
    pub dominance: Vec<DominanceReport>,
    pub convergence: ConvergenceReport,
    pub ordering: Vec<OrderingReport>,
    pub passed: bool,
    pub failures: Vec<String>,
}

impl ValidationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn ecdf(samples: &[f64], censored: usize, r_max: f64) -> EmpiricalCdf {
        let it = samples
            .iter()
            .map(|s| Some(*s))
            .chain(std::iter::repeat_n(None, censored));
        EmpiricalCdf::from_samples(it, r_max).unwrap()
    }

    #[test]
    fn ks_constant_samples() {
        let e = ecdf(&[0.5; 10], 0, 1.0);
        assert_abs_diff_eq!(ks_statistic(&e, |r| r), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn ks_counts_censoring_boundary() {
        // Perfect fit below r_max but half the mass censored while F(1) = 1.
        let e = ecdf(&[0.25, 0.5], 2, 1.0);
        assert!(ks_statistic(&e, |r: f64| r.min(1.0)) >= 0.5 - 1e-15);
    }

    #[test]
    fn ks_uniform_sample_within_band() {
        let n = 10_000;
        let mut rng = crate::simulate::realization_rng(1, 0);
        let samples: Vec<f64> = (0..n).map(|_| rand::Rng::random::<f64>(&mut rng)).collect();
        let e = ecdf(&samples, 0, 1.0);
        assert!(ks_statistic(&e, |r| r) <= 1.36 / (n as f64).sqrt());
    }

    #[test]
    fn two_sample_hand_values() {
        let a = ecdf(&[1.0, 1.0, 4.0, 4.0], 0, 5.0);
        let b = ecdf(&[1.0, 1.0, 1.0, 4.0], 0, 5.0);
        assert_abs_diff_eq!(ks_two_sample(&a, &b), 0.25, epsilon = 1e-15);
        let a = ecdf(
            &[0.42, 0.24, 0.86, 0.85, 0.82, 0.82, 0.25, 0.78, 0.13, 0.27],
            0,
            1.0,
        );
        let b = ecdf(
            &[0.24, 0.27, 0.87, 0.29, 0.57, 0.44, 0.5, 0.00, 0.56, 0.03],
            0,
            1.0,
        );
        assert_abs_diff_eq!(ks_two_sample(&a, &b), 0.4, epsilon = 1e-15);
        assert_eq!(ks_two_sample(&a, &a), 0.0);
    }

    #[test]
    fn kolmogorov_quantiles() {
        assert_abs_diff_eq!(kolmogorov_critical(0.05), 1.3581, epsilon = 1e-4);
        assert_abs_diff_eq!(kolmogorov_critical(0.01), 1.6276, epsilon = 1e-4);
        assert_eq!(kolmogorov_survival(0.0), 1.0);
    }

    #[test]
    fn chi_square_detects_mismatch() {
        let pmf = |v: u64| crate::analytic::cluster_size_pmf(3.0, v);
        let exact: Vec<(u64, u64)> = (1..15)
            .map(|v| (v, (pmf(v) * 1e5).round() as u64))
            .collect();
        assert!(chi_square_gof(&exact, pmf).unwrap().p_value > 0.5);
        let shifted: Vec<(u64, u64)> = exact.iter().map(|(v, c)| (v + 1, *c)).collect();
        assert!(chi_square_gof(&shifted, pmf).unwrap().p_value < 1e-6);
        assert!(chi_square_gof(&[], pmf).is_err());
    }

    #[test]
    fn dominance_holds_and_mutation_is_caught() {
        let p = McpParams::new(20e-6, 30.0, 40.0).unwrap();
        let grid: Vec<f64> = (0..50).map(|i| 160.0 * i as f64 / 49.0).collect();
        let ok = check_dominance(&p, &grid, DOMINANCE_TOL).unwrap();
        assert!(ok.passed());
        assert!(ok.worst_margin >= -DOMINANCE_TOL);

        let flipped = |density: f64, r: f64| -(density * std::f64::consts::PI * r * r).exp_m1();
        let bad = check_dominance_against(&p, &grid, DOMINANCE_TOL, flipped).unwrap();
        assert!(!bad.passed());
        assert!(bad
            .violations
            .iter()
            .all(|v| v.kind == DominanceKind::PppOverContact && v.r > 0.0));
    }

    #[test]
    fn zero_radius_is_not_a_violation() {
        let p = McpParams::new(1e-3, 3.0, 2.0).unwrap();
        let r = check_dominance(&p, &[0.0], DOMINANCE_TOL).unwrap();
        assert!(r.passed());
        assert_eq!(r.worst_margin, 0.0);
    }

    #[test]
    fn convergence_single_radius() {
        let grid: Vec<f64> = (0..20).map(|i| 8.0 * i as f64).collect();
        let rep = check_ppp_convergence(20e-6, 30.0, &[40.0], &grid, 1.0).unwrap();
        assert_eq!(rep.gaps.len(), 1);
        assert!(rep.contact_decreasing && rep.nn_nonincreasing);
        assert!(check_ppp_convergence(20e-6, 30.0, &[80.0, 40.0], &grid, 1.0).is_err());
    }

    #[test]
    fn ordering_equal_radii() {
        let grid: Vec<f64> = (0..20).map(|i| 8.0 * i as f64).collect();
        let rep = check_figure2_ordering(20e-6, 30.0, 40.0, 40.0, &grid, 0.0).unwrap();
        assert!(rep.passed());
        assert!(check_figure2_ordering(20e-6, 30.0, 80.0, 40.0, &grid, 0.0).is_err());
    }
}
