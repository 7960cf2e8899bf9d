//! Conditional distance densities for one offspring and the lens mass they
//! integrate to.

use mcp_distance::kernels::{chi1, chi2, chi3, lens_mass, mu};
use mcp_distance::quadrature::integrate_adaptive;

fn main() -> Result<(), mcp_distance::Error> {
    let r_d = 1.0;

    // Cluster center inside the unit disk around the origin.
    let x = 0.5;
    println!(
        "x = {x}: chi1(0.3) = {:.6}, chi2(1.0) = {:.6}",
        chi1(0.3, x, r_d)?,
        chi2(1.0, x, r_d)?
    );
    let inner = integrate_adaptive(|z| chi1(z, x, r_d).unwrap(), 0.0, r_d - x, 1e-12, 1e-15)?;
    let outer = integrate_adaptive(|z| chi2(z, x, r_d).unwrap(), r_d - x, r_d + x, 1e-12, 1e-15)?;
    println!("  total mass = {:.15}", inner.value + outer.value);

    // Cluster center outside.
    let x = 1.5;
    let mass = integrate_adaptive(|z| chi3(z, x, r_d).unwrap(), x - r_d, x + r_d, 1e-12, 1e-15)?;
    println!(
        "x = {x}: chi3(1.5) = {:.6}, total mass = {:.15}",
        chi3(1.5, x, r_d)?,
        mass.value
    );

    println!("\n  r     x    lens mass");
    for (r, x) in [(0.3, 0.0), (1.0, 1.2), (2.0, 0.5), (3.0, 1.5), (0.2, 2.0)] {
        println!("{r:4.1}  {x:4.1}  {:.12}", lens_mass(r, x, r_d)?);
    }
    println!("\nmu(0.5, 0.6) = {:.12}", mu(0.5, 0.6, r_d)?);
    Ok(())
}
