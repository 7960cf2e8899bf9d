//! Nearest-neighbor CDF as the contact survival times the probability that
//! the own cluster leaves the disk empty.

use mcp_distance::{MaternCdf, McpParams};

fn main() -> Result<(), mcp_distance::Error> {
    let eval = MaternCdf::new(McpParams::new(20e-6, 30.0, 40.0)?);
    println!("    r   contact surv   own-cluster factor   nn cdf");
    for r in [1.0, 2.5, 5.0, 10.0, 20.0, 40.0, 80.0] {
        println!(
            "{r:5.1}   {:.6}       {:.6e}         {:.6}",
            eval.contact_survival(r)?,
            eval.palm_factor(r)?,
            eval.nn_cdf(r)?
        );
    }

    // Past twice the cluster radius the own cluster is always covered.
    let small = MaternCdf::new(McpParams::new(20e-6, 2.0, 40.0)?);
    let ratio = small.nn_survival(100.0)? / small.contact_survival(100.0)?;
    println!(
        "\nm = 2, r = 100: survival ratio = {ratio:.15}, e^-2 = {:.15}",
        (-2.0f64).exp()
    );
    Ok(())
}
