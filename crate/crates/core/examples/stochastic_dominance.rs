//! The contact distance dominates both the nearest-neighbor distance and
//! the contact distance of a PPP with the same density.

use mcp_distance::validate::{check_dominance, DOMINANCE_TOL};
use mcp_distance::McpParams;

fn main() -> Result<(), mcp_distance::Error> {
    let grid: Vec<f64> = (0..200).map(|i| 160.0 * i as f64 / 199.0).collect();
    for (lambda_p, m_bar, r_d) in [(20e-6, 30.0, 40.0), (1e-4, 2.0, 10.0), (1e-6, 200.0, 300.0)] {
        let params = McpParams::new(lambda_p, m_bar, r_d)?;
        let report = check_dominance(&params, &grid, DOMINANCE_TOL)?;
        println!(
            "lambda_p = {lambda_p:e}, m = {m_bar}, r_d = {r_d}: {} violations",
            report.violations.len()
        );
    }

    // A PPP baseline with the wrong sign in the exponent is caught.
    let params = McpParams::new(20e-6, 30.0, 40.0)?;
    let flipped = |density: f64, r: f64| -(density * std::f64::consts::PI * r * r).exp_m1();
    let report =
        mcp_distance::validate::check_dominance_against(&params, &grid, DOMINANCE_TOL, flipped)?;
    let first = &report.violations[0];
    println!(
        "sign-flipped baseline: {} violations, first at r = {:.3} ({:?})",
        report.violations.len(),
        first.r,
        first.kind
    );
    Ok(())
}
