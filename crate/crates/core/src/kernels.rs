//! Conditional distance densities of a single Matérn cluster and the
//! probability mass one cluster puts inside a ball around the origin.
//!
//! A cluster centered at distance `x` from the origin scatters its offspring
//! uniformly on a disk of radius `r_d`. The distance `z` from the origin to
//! one offspring then has one of three densities depending on where the
//! origin sits relative to the disk:
//!
//! * `chi1` on `[0, r_d - x]` when the origin is inside the disk (`x < r_d`),
//! * `chi2` on `[r_d - x, r_d + x]` for the same configuration,
//! * `chi3` on `[x - r_d, x + r_d]` when the origin is outside (`x > r_d`).
//!
//! `chi2` and `chi3` share one expression and differ only in their support;
//! both names are kept so callers state which configuration they mean.
//!
//! Integrating these densities up to a radius `r` gives the area of
//! `b(o, r) ∩ b(x, r_d)` divided by `π r_d²`, which [`lens_mass`] evaluates
//! in closed form.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{require_nonnegative, require_positive, Error, Result};

/// Relative slack applied to support boundaries so that values computed as
/// `r_d - x` and friends are not rejected over one ulp.
const SUPPORT_SLACK: f64 = 1e-12;

/// Parameters of a planar Matérn cluster process.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McpParams {
    /// Density of the parent (cluster center) process, points per unit area.
    lambda_p: f64,
    /// Mean number of offspring per cluster.
    m_bar: f64,
    /// Cluster radius.
    r_d: f64,
}

impl McpParams {
    pub fn new(lambda_p: f64, m_bar: f64, r_d: f64) -> Result<Self> {
        require_positive("lambda_p", lambda_p)?;
        require_positive("m_bar", m_bar)?;
        require_positive("r_d", r_d)?;
        Ok(Self {
            lambda_p,
            m_bar,
            r_d,
        })
    }

    pub fn lambda_p(&self) -> f64 {
        self.lambda_p
    }

    pub fn m_bar(&self) -> f64 {
        self.m_bar
    }

    pub fn r_d(&self) -> f64 {
        self.r_d
    }

    /// Density of offspring points, `m̄ λ_p`.
    pub fn point_density(&self) -> f64 {
        self.m_bar * self.lambda_p
    }

    /// Same process with a different cluster radius.
    pub fn with_r_d(&self, r_d: f64) -> Result<Self> {
        Self::new(self.lambda_p, self.m_bar, r_d)
    }
}

/// Distance `z` from the origin to an offspring point, paired with the
/// distance `x` from the origin to that offspring's cluster center.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialPair {
    pub z: f64,
    pub x: f64,
}

impl RadialPair {
    pub fn new(z: f64, x: f64) -> Result<Self> {
        require_nonnegative("z", z)?;
        require_nonnegative("x", x)?;
        Ok(Self { z, x })
    }

    /// Density of `z` given `x`, picking the branch that owns this pair.
    /// Zero outside the cluster's reach.
    pub fn density(&self, r_d: f64) -> Result<f64> {
        require_positive("r_d", r_d)?;
        let RadialPair { z, x } = *self;
        if x < r_d {
            if z <= r_d - x {
                chi1(z, x, r_d)
            } else if z <= r_d + x {
                chi2(z, x, r_d)
            } else {
                Ok(0.0)
            }
        } else if x > r_d {
            if z >= x - r_d && z <= x + r_d {
                chi3(z, x, r_d)
            } else {
                Ok(0.0)
            }
        } else {
            // x == r_d: the origin sits on the cluster boundary and the
            // Case 1 inner region is empty.
            if z > 0.0 && z <= 2.0 * r_d {
                Ok(arccos_density(z, x, r_d))
            } else {
                Ok(0.0)
            }
        }
    }
}

fn slack(r_d: f64) -> f64 {
    SUPPORT_SLACK * r_d
}

fn check_kernel_args(kernel: &'static str, z: f64, x: f64, r_d: f64) -> Result<()> {
    require_positive("r_d", r_d)?;
    if !(z.is_finite() && x.is_finite()) || z < 0.0 || x < 0.0 {
        return Err(Error::OutsideSupport { kernel, z, x, r_d });
    }
    Ok(())
}

/// Shared `chi2`/`chi3` expression with the arccos argument clamped.
fn arccos_density(z: f64, x: f64, r_d: f64) -> f64 {
    let cos_arg = (z * z + x * x - r_d * r_d) / (2.0 * z * x);
    2.0 * z / (PI * r_d * r_d) * cos_arg.clamp(-1.0, 1.0).acos()
}

/// Density of the offspring distance when the origin lies in the cluster and
/// `z ≤ r_d - x`: the ball `b(o, z)` is fully inside the cluster disk.
pub fn chi1(z: f64, x: f64, r_d: f64) -> Result<f64> {
    check_kernel_args("chi1", z, x, r_d)?;
    if x >= r_d || z > r_d - x + slack(r_d) {
        return Err(Error::OutsideSupport {
            kernel: "chi1",
            z,
            x,
            r_d,
        });
    }
    Ok(2.0 * z / (r_d * r_d))
}

/// Density of the offspring distance when the origin lies in the cluster and
/// `r_d - x ≤ z ≤ r_d + x`.
pub fn chi2(z: f64, x: f64, r_d: f64) -> Result<f64> {
    check_kernel_args("chi2", z, x, r_d)?;
    if x == 0.0 {
        return Err(Error::DegenerateCenter { kernel: "chi2" });
    }
    let eps = slack(r_d);
    if x >= r_d || z <= 0.0 || z < r_d - x - eps || z > r_d + x + eps {
        return Err(Error::OutsideSupport {
            kernel: "chi2",
            z,
            x,
            r_d,
        });
    }
    Ok(arccos_density(z, x, r_d))
}

/// Density of the offspring distance when the origin lies outside the
/// cluster (`x > r_d`), supported on `[x - r_d, x + r_d]`.
pub fn chi3(z: f64, x: f64, r_d: f64) -> Result<f64> {
    check_kernel_args("chi3", z, x, r_d)?;
    let eps = slack(r_d);
    if x <= r_d || z < x - r_d - eps || z > x + r_d + eps {
        return Err(Error::OutsideSupport {
            kernel: "chi3",
            z,
            x,
            r_d,
        });
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    Ok(arccos_density(z, x, r_d))
}

/// Probability that one offspring of a cluster centered at distance `x`
/// lands within distance `r` of the origin, i.e.
/// `|b(o, r) ∩ b(x, r_d)| / (π r_d²)`.
///
/// Always in `[0, 1]`, nondecreasing in `r`, nonincreasing in `x`.
pub fn lens_mass(r: f64, x: f64, r_d: f64) -> Result<f64> {
    require_nonnegative("r", r)?;
    require_nonnegative("x", x)?;
    require_positive("r_d", r_d)?;
    Ok(unit_lens_mass(r / r_d, x / r_d))
}

/// [`lens_mass`] with `r_d = 1` and no argument checks. `rho` and `u` are
/// the query radius and center distance in units of `r_d`.
pub(crate) fn unit_lens_mass(rho: f64, u: f64) -> f64 {
    if rho <= 0.0 || u >= rho + 1.0 {
        return 0.0;
    }
    if rho >= u + 1.0 {
        return 1.0;
    }
    if u + rho <= 1.0 {
        return rho * rho;
    }
    // Proper lens: 0 < u, |1 - rho| < u < 1 + rho.
    let heron = (-u + rho + 1.0) * (u + rho - 1.0) * (u - rho + 1.0) * (u + rho + 1.0);
    let half_chord = heron.max(0.0).sqrt() / (2.0 * u);
    // Signed distances from each center to the common chord.
    let from_origin = (u * u + (rho - 1.0) * (rho + 1.0)) / (2.0 * u);
    let from_center = (u * u + (1.0 - rho) * (1.0 + rho)) / (2.0 * u);
    let alpha = half_chord.atan2(from_origin);
    let beta = half_chord.atan2(from_center);
    let area = rho * rho * alpha + beta - u * half_chord;
    (area / PI).clamp(0.0, 1.0)
}

/// Mass of the reference point's own cluster inside `b(o, r)`, for a cluster
/// center at distance `x0 ≤ r_d`. This is [`lens_mass`] restricted to
/// centers that cover the origin.
pub fn mu(x0: f64, r: f64, r_d: f64) -> Result<f64> {
    require_nonnegative("x0", x0)?;
    require_positive("r_d", r_d)?;
    if x0 > r_d + slack(r_d) {
        return Err(Error::InvalidParameter {
            name: "x0",
            value: x0,
            reason: "own-cluster center must satisfy x0 <= r_d",
        });
    }
    lens_mass(r, x0.min(r_d), r_d)
}
