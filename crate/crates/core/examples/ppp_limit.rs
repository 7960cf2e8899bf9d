//! Sup-norm distance to the PPP CDF as the cluster radius grows.

use mcp_distance::validate::{check_ppp_convergence, PPP_GAP_THRESHOLD};

fn main() -> Result<(), mcp_distance::Error> {
    let grid: Vec<f64> = (0..200).map(|i| 160.0 * i as f64 / 199.0).collect();
    let radii = [10.0, 20.0, 40.0, 80.0, 160.0, 320.0, 640.0];
    let report = check_ppp_convergence(20e-6, 30.0, &radii, &grid, PPP_GAP_THRESHOLD)?;
    println!("  r_d   contact gap (at r)    nn gap (at r)");
    for g in &report.gaps {
        println!(
            "{:5.0}   {:.4} ({:5.1})        {:.4} ({:5.1})",
            g.r_d, g.contact_gap, g.contact_gap_r, g.nn_gap, g.nn_gap_r
        );
    }
    println!(
        "contact gaps strictly decreasing: {}",
        report.contact_decreasing
    );
    for w in &report.warnings {
        println!("warning: {w}");
    }
    Ok(())
}
