//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails. Run with `cargo test --test acceptance`.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use mcp_distance::analytic::{cluster_size_pmf, MaternCdf};
use mcp_distance::kernels::lens_mass;
use mcp_distance::simulate::{
    default_window_radius, palm_draws, sample_contact_distance, window_draws, EmpiricalCdf,
    PalmMode, SimulationConfig,
};
use mcp_distance::validate::{
    check_dominance, check_figure2_ordering, check_ppp_convergence, chi_square_gof, ks_statistic,
    ks_two_sample, ks_two_sample_p_value, DOMINANCE_TOL, KS_THRESHOLD, PPP_GAP_THRESHOLD,
};
use mcp_distance::McpParams;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const LAMBDA_P: f64 = 20e-6;
const M_BAR: f64 = 30.0;
const SEED: u64 = 20_240_601;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn reference_params(r_d: f64) -> McpParams {
    McpParams::new(LAMBDA_P, M_BAR, r_d).unwrap()
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.random_range(lo.ln()..hi.ln())).exp()
}

fn kernel_normalization() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst = 0.0f64;
    for i in 0..1000 {
        let r_d = log_uniform(&mut rng, 0.1, 1e3);
        // Half the draws in each case.
        let x = if i % 2 == 0 {
            r_d * rng.random_range(1e-6..1.0)
        } else {
            r_d * rng.random_range(1.0..10.0)
        };
        worst = worst.max((common::total_mass(x, r_d) - 1.0).abs());
    }
    outcome(
        worst <= 1e-9,
        format!("max |mass - 1| = {worst:.2e} (tol 1e-9)"),
    )
}

fn lens_closed_form() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let r_d = log_uniform(&mut rng, 0.1, 1e3);
        let x = r_d * rng.random_range(0.0..3.0);
        let r = r_d * rng.random_range(0.0..4.0);
        let diff = (lens_mass(r, x, r_d).unwrap() - common::lens_by_quadrature(r, x, r_d)).abs();
        worst = worst.max(diff);
    }
    outcome(
        worst <= 1e-10,
        format!("max |closed form - quadrature| = {worst:.2e} (tol 1e-10)"),
    )
}

fn sim_config() -> SimulationConfig {
    SimulationConfig::new(10_000, 160.0, SEED).with_workers(available_workers())
}

fn available_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn contact_oracle() -> Outcome {
    let params = reference_params(40.0);
    let eval = MaternCdf::new(params);
    let ecdf = sample_contact_distance(&params, &sim_config()).unwrap();
    let d = ks_statistic(&ecdf, |r| eval.contact_cdf(r).unwrap());
    outcome(
        d <= KS_THRESHOLD,
        format!(
            "KS = {d:.4} (threshold {KS_THRESHOLD}, n = {}, {} censored)",
            ecdf.n_total(),
            ecdf.n_censored()
        ),
    )
}

fn nn_oracle() -> Outcome {
    let params = reference_params(40.0);
    let config = sim_config();
    let eval = MaternCdf::new(params);
    let palm = palm_draws(&params, &config, PalmMode::Full).unwrap();
    let palm_ecdf =
        EmpiricalCdf::from_samples(palm.iter().map(|d| d.distance), config.r_max).unwrap();
    let d = ks_statistic(&palm_ecdf, |r| eval.nn_cdf(r).unwrap());

    let window = window_draws(
        &params,
        &config,
        default_window_radius(&params, config.r_max),
    )
    .unwrap();
    let window_ecdf =
        EmpiricalCdf::from_samples(window.draws.iter().map(|w| w.distance), config.r_max).unwrap();
    let d2 = ks_two_sample(&palm_ecdf, &window_ecdf);
    let p = ks_two_sample_p_value(d2, palm_ecdf.n_total(), window_ecdf.n_total());
    outcome(
        d <= KS_THRESHOLD && p > 0.05,
        format!("palm KS = {d:.4} (threshold {KS_THRESHOLD}); palm vs window D = {d2:.4}, p = {p:.3} (alpha 0.05)"),
    )
}

fn dominance() -> Outcome {
    let mut violations = check_dominance(
        &reference_params(40.0),
        &linspace(0.0, 160.0, 200),
        DOMINANCE_TOL,
    )
    .unwrap()
    .violations
    .len();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    let mut worst = f64::INFINITY;
    for _ in 0..100 {
        let params = McpParams::new(
            log_uniform(&mut rng, 1e-7, 1e-2),
            log_uniform(&mut rng, 0.1, 300.0),
            log_uniform(&mut rng, 0.5, 500.0),
        )
        .unwrap();
        // Cover both the cluster scale and the inter-point scale.
        let spacing = 1.0 / params.point_density().sqrt();
        let r_top = 4.0 * params.r_d().max(spacing);
        let report = check_dominance(&params, &linspace(0.0, r_top, 200), DOMINANCE_TOL).unwrap();
        violations += report.violations.len();
        worst = worst.min(report.worst_margin);
    }
    outcome(
        violations == 0,
        format!("{violations} violations over 101 parameter sets (worst margin {worst:.2e}, tol {DOMINANCE_TOL:e})"),
    )
}

fn palm_collapse() -> Outcome {
    let r_d = 40.0;
    let params = McpParams::new(LAMBDA_P, 2.0, r_d).unwrap();
    let eval = MaternCdf::new(params);
    let target = (-2.0f64).exp();
    let mut worst = 0.0f64;
    let mut checked = 0;
    for r in linspace(2.0 * r_d, 20.0 * r_d, 100) {
        let (sn, sc) = (
            eval.nn_survival(r).unwrap(),
            eval.contact_survival(r).unwrap(),
        );
        if sn > 1e-300 && sc > 1e-300 {
            worst = worst.max((sn / sc - target).abs());
            checked += 1;
        }
    }
    outcome(
        checked > 0 && worst <= 1e-9,
        format!("max |ratio - e^-2| = {worst:.2e} over {checked} radii (tol 1e-9)"),
    )
}

fn size_biased_pmf() -> Outcome {
    let params = reference_params(40.0);
    let config = SimulationConfig::new(100_000, 160.0, SEED + 3).with_workers(available_workers());
    let draws = palm_draws(&params, &config, PalmMode::OwnClusterOnly).unwrap();
    let mut counts = std::collections::BTreeMap::new();
    for d in &draws {
        *counts.entry(d.own_cluster_size).or_insert(0u64) += 1;
    }
    let counts: Vec<(u64, u64)> = counts.into_iter().collect();
    let pmf = |l| cluster_size_pmf(M_BAR, l);
    let chi = chi_square_gof(&counts, pmf).unwrap();

    let (mut sum, mut mean) = (0.0, 0.0);
    for l in 0..400u64 {
        sum += pmf(l);
        mean += l as f64 * pmf(l);
    }
    let sum_err = (sum - 1.0).abs();
    let mean_err = (mean - (M_BAR + 1.0)).abs();
    outcome(
        chi.p_value > 0.01 && sum_err <= 1e-12 && mean_err <= 1e-9,
        format!(
            "chi-square p = {:.3} (dof {}, alpha 0.01); |sum - 1| = {sum_err:.1e}; |mean - (m+1)| = {mean_err:.1e}",
            chi.p_value, chi.degrees_of_freedom
        ),
    )
}

fn ppp_limit() -> Outcome {
    let report = check_ppp_convergence(
        LAMBDA_P,
        M_BAR,
        &[20.0, 80.0, 320.0],
        &linspace(0.0, 160.0, 200),
        PPP_GAP_THRESHOLD,
    )
    .unwrap();
    let gaps: Vec<String> = report
        .gaps
        .iter()
        .map(|g| format!("{}: {:.4}", g.r_d, g.contact_gap))
        .collect();
    let last = report.gaps.last().unwrap().contact_gap;
    outcome(
        report.contact_decreasing && last <= PPP_GAP_THRESHOLD,
        format!(
            "contact gaps [{}] (final threshold {PPP_GAP_THRESHOLD})",
            gaps.join(", ")
        ),
    )
}

fn figure2_ordering() -> Outcome {
    let report = check_figure2_ordering(
        LAMBDA_P,
        M_BAR,
        20.0,
        80.0,
        &linspace(0.0, 160.0, 200),
        DOMINANCE_TOL,
    )
    .unwrap();
    outcome(
        report.passed(),
        format!(
            "{} contact and {} nearest-neighbor violations on 200 radii",
            report.contact_violations.len(),
            report.nn_violations.len()
        ),
    )
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, workers: usize| -> (Vec<u8>, Vec<u8>) {
        let out = dir.path().join(name);
        let code = mcp_distance::cli::run([
            "mcp-distance",
            "simulate",
            "--quiet",
            "--seed",
            "7",
            "--samples",
            "10000",
            "--workers",
            &workers.to_string(),
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, 0, "simulate failed");
        let meta = dir.path().join(format!("{name}.meta.json"));
        (std::fs::read(out).unwrap(), std::fs::read(meta).unwrap())
    };
    let a = run("a.csv", 1);
    let b = run("b.csv", 1);
    let c = run("c.csv", 8);
    outcome(
        a == b && a == c,
        format!(
            "repeat identical: {}; workers 1 vs 8 identical: {} ({} bytes)",
            a == b,
            a == c,
            a.0.len()
        ),
    )
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (
            "kernel normalization",
            Duration::from_secs(5),
            kernel_normalization,
        ),
        (
            "closed-form lens mass",
            Duration::from_secs(10),
            lens_closed_form,
        ),
        (
            "contact CDF vs simulation",
            Duration::from_secs(60),
            contact_oracle,
        ),
        (
            "nearest-neighbor CDF vs simulation",
            Duration::from_secs(120),
            nn_oracle,
        ),
        ("stochastic dominance", Duration::from_secs(60), dominance),
        (
            "large-r palm collapse",
            Duration::from_secs(5),
            palm_collapse,
        ),
        (
            "size-biased cluster PMF",
            Duration::from_secs(30),
            size_biased_pmf,
        ),
        ("PPP limit", Duration::from_secs(60), ppp_limit),
        (
            "cluster-radius ordering",
            Duration::from_secs(30),
            figure2_ordering,
        ),
        ("determinism", Duration::from_secs(60), determinism),
    ];
    let mut failures = 0;
    for (i, (name, budget, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let passed = result.passed && elapsed <= *budget;
        if !passed {
            failures += 1;
        }
        println!(
            "{} {:>2}. {name}: {} [{:.2}s / {}s]",
            if passed { "PASS" } else { "FAIL" },
            i + 1,
            result.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
