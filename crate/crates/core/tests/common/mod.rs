//! Lens mass by direct quadrature of the conditional distance densities,
//! independent of the closed-form circle-intersection formula.

#![allow(dead_code)]

use mcp_distance::kernels::{chi1, chi2, chi3};
use mcp_distance::quadrature::integrate_adaptive;

const REL: f64 = 1e-13;
const ABS: f64 = 1e-15;

fn integral<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    integrate_adaptive(f, a, b, REL, ABS)
        .expect("oracle quadrature")
        .value
}

/// `P(‖y‖ ≤ r)` for `y` uniform on the disk of radius `r_d` centered at
/// distance `x` from the origin.
pub fn lens_by_quadrature(r: f64, x: f64, r_d: f64) -> f64 {
    if x <= r_d {
        let inner = r_d - x;
        integral(|z| chi1(z, x, r_d).unwrap(), 0.0, r.min(inner))
            + integral(|z| chi2(z, x, r_d).unwrap(), inner, r.min(r_d + x))
    } else {
        integral(|z| chi3(z, x, r_d).unwrap(), x - r_d, r.min(x + r_d))
    }
}

/// Total mass of the density over its support; 1 when normalized.
pub fn total_mass(x: f64, r_d: f64) -> f64 {
    lens_by_quadrature(x + r_d, x, r_d)
}
