//! Contact-distance CDF next to the CDF of a PPP with the same density.

use mcp_distance::{MaternCdf, McpParams};

fn main() -> Result<(), mcp_distance::Error> {
    let params = McpParams::new(20e-6, 30.0, 40.0)?;
    let eval = MaternCdf::new(params);
    println!(
        "density = {:e} points per unit area",
        params.point_density()
    );
    println!("    r   contact      ppp");
    for r in (0..=8).map(|i| 20.0 * i as f64) {
        println!(
            "{r:5.0}   {:.6}   {:.6}",
            eval.contact_cdf(r)?,
            eval.ppp_cdf(r)
        );
    }
    Ok(())
}
