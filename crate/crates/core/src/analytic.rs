//! Contact-distance and nearest-neighbor-distance CDFs of the Matérn cluster
//! process, the density-matched PPP baseline, and the size-biased law of the
//! typical point's own cluster.
//!
//! Both CDFs are computed through their survival functions. With
//! `ρ = r / r_d` and `u = x / r_d` the void probability of `b(o, r)` is
//!
//! ```text
//! P(no point in b(o, r)) = exp(-2π λ_p r_d² J(ρ)),
//! J(ρ) = ∫_0^{ρ+1} (1 - exp(-m̄ L(ρ, u))) u du
//! ```
//!
//! where `L` is the lens mass of a unit cluster. The integrand vanishes for
//! `u ≥ ρ + 1`, so truncating there is exact. The typical point additionally
//! sees its own cluster, which survives with probability
//!
//! ```text
//! P_own(ρ) = ∫_0^1 exp(-m̄ L(ρ, u)) 2u du.
//! ```

use std::f64::consts::PI;
use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{require_nonnegative, require_positive, Error, Result};
use crate::kernels::{unit_lens_mass, McpParams};
use crate::quadrature::{integrate, QuadratureConfig};

/// Distance from the typical point to its own cluster center.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PalmGeometry {
    x0: f64,
    r_d: f64,
}

impl PalmGeometry {
    pub fn new(x0: f64, r_d: f64) -> Result<Self> {
        require_positive("r_d", r_d)?;
        require_nonnegative("x0", x0)?;
        if x0 > r_d {
            return Err(Error::InvalidParameter {
                name: "x0",
                value: x0,
                reason: "own-cluster center must satisfy x0 <= r_d",
            });
        }
        Ok(Self { x0, r_d })
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    /// Density `2 x0 / r_d²` of the own-cluster center distance.
    pub fn density(&self) -> f64 {
        2.0 * self.x0 / (self.r_d * self.r_d)
    }
}

/// Which CDF a series holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Distribution {
    Contact,
    NearestNeighbor,
    #[serde(rename = "ppp")]
    PppBaseline,
}

impl Distribution {
    pub const ALL: [Distribution; 3] = [
        Distribution::Contact,
        Distribution::NearestNeighbor,
        Distribution::PppBaseline,
    ];

    /// Column label used in CSV output.
    pub fn label(&self) -> &'static str {
        match self {
            Distribution::Contact => "contact",
            Distribution::NearestNeighbor => "nearest_neighbor",
            Distribution::PppBaseline => "ppp",
        }
    }
}

/// Evaluates the analytic CDFs for one parameter set at a fixed quadrature
/// tolerance.
#[derive(Debug, Clone, Copy)]
pub struct MaternCdf {
    params: McpParams,
    rel_tol: f64,
    max_intervals: usize,
}

impl MaternCdf {
    pub fn new(params: McpParams) -> Self {
        let quad = QuadratureConfig::default();
        Self {
            params,
            rel_tol: quad.rel_tol,
            max_intervals: quad.max_intervals,
        }
    }

    /// Sets the relative quadrature tolerance (default `1e-8`).
    pub fn with_tolerance(mut self, rel_tol: f64) -> Result<Self> {
        require_positive("rel_tol", rel_tol)?;
        self.rel_tol = rel_tol;
        Ok(self)
    }

    pub fn params(&self) -> &McpParams {
        &self.params
    }

    fn quad(&self, magnitude: f64) -> QuadratureConfig {
        QuadratureConfig {
            rel_tol: self.rel_tol,
            // Absolute floor well below the integral's known magnitude.
            abs_tol: (magnitude * self.rel_tol * 1e-3).max(1e-300),
            max_intervals: self.max_intervals,
        }
    }

    /// `2π λ_p r_d² J(r / r_d)`, the exponent of the void probability.
    pub fn contact_exponent(&self, r: f64) -> Result<f64> {
        require_nonnegative("r", r)?;
        if r == 0.0 {
            return Ok(0.0);
        }
        let (lambda_p, m_bar, r_d) = (
            self.params.lambda_p(),
            self.params.m_bar(),
            self.params.r_d(),
        );
        let rho = r / r_d;
        let integrand = |u: f64| -(-m_bar * unit_lens_mass(rho, u)).exp_m1() * u;
        // Kinks where the lens changes shape: |ρ - 1| (containment ends) and
        // ρ + 1 (disjoint); u = 1 separates the two cluster cases.
        let mut breaks = vec![0.0, (rho - 1.0).abs(), 1.0, rho + 1.0];
        breaks.sort_by(f64::total_cmp);
        // J ≤ m̄ ρ²/2 since 1 - e^{-t} ≤ t and the lens masses integrate to ρ²/2.
        let bound = (0.5 * m_bar * rho * rho).min(0.5 * (rho + 1.0) * (rho + 1.0));
        let j = integrate(integrand, &breaks, &self.quad(bound))
            .map_err(|e| e.at_radius(r))?
            .value;
        Ok(2.0 * PI * lambda_p * r_d * r_d * j)
    }

    /// `1 - F_C(r)`.
    pub fn contact_survival(&self, r: f64) -> Result<f64> {
        Ok((-self.contact_exponent(r)?).exp())
    }

    /// Contact-distance CDF `F_C(r)`.
    pub fn contact_cdf(&self, r: f64) -> Result<f64> {
        Ok(one_minus_exp_neg(self.contact_exponent(r)?))
    }

    /// Probability that none of the typical point's own-cluster siblings
    /// lies in `b(o, r)`.
    pub fn palm_factor(&self, r: f64) -> Result<f64> {
        require_nonnegative("r", r)?;
        if r == 0.0 {
            return Ok(1.0);
        }
        let (m_bar, r_d) = (self.params.m_bar(), self.params.r_d());
        let rho = r / r_d;
        let integrand = |u: f64| (-m_bar * unit_lens_mass(rho, u)).exp() * 2.0 * u;
        let kink = (1.0 - rho).abs();
        let breaks: Vec<f64> = if kink > 0.0 && kink < 1.0 {
            vec![0.0, kink, 1.0]
        } else {
            vec![0.0, 1.0]
        };
        // P_own ≥ e^{-m̄}.
        let floor = (-m_bar).exp();
        integrate(integrand, &breaks, &self.quad(floor))
            .map(|q| q.value.clamp(0.0, 1.0))
            .map_err(|e| e.at_radius(r))
    }

    /// `1 - F_N(r) = (1 - F_C(r)) · P_own(r)`.
    pub fn nn_survival(&self, r: f64) -> Result<f64> {
        Ok(self.contact_survival(r)? * self.palm_factor(r)?)
    }

    /// Nearest-neighbor-distance CDF `F_N(r)`.
    pub fn nn_cdf(&self, r: f64) -> Result<f64> {
        let exponent = self.contact_exponent(r)?;
        self.nn_cdf_from_exponent(r, exponent)
    }

    fn nn_cdf_from_exponent(&self, r: f64, contact_exponent: f64) -> Result<f64> {
        let palm = self.palm_factor(r)?;
        if palm == 0.0 {
            return Ok(1.0);
        }
        Ok(one_minus_exp_neg(contact_exponent - palm.ln()))
    }

    /// CDF of the contact distance of a PPP with the same point density.
    pub fn ppp_cdf(&self, r: f64) -> f64 {
        ppp_contact_cdf(self.params.point_density(), r)
    }

    /// Evaluates the requested series on `grid`, in parallel over grid
    /// points. Output does not depend on the thread count.
    pub fn curve(&self, grid: &[f64], which: &[Distribution]) -> Result<CdfCurve> {
        validate_grid(grid)?;
        let mut which: Vec<Distribution> = which.to_vec();
        which.sort();
        which.dedup();
        let need_exponent = which.contains(&Distribution::Contact)
            || which.contains(&Distribution::NearestNeighbor);

        let rows: Vec<Vec<f64>> = grid
            .par_iter()
            .map(|&r| -> Result<Vec<f64>> {
                let exponent = if need_exponent {
                    self.contact_exponent(r)?
                } else {
                    0.0
                };
                which
                    .iter()
                    .map(|d| match d {
                        Distribution::Contact => Ok(one_minus_exp_neg(exponent)),
                        Distribution::NearestNeighbor => self.nn_cdf_from_exponent(r, exponent),
                        Distribution::PppBaseline => Ok(self.ppp_cdf(r)),
                    })
                    .collect::<Result<Vec<f64>>>()
                    .map_err(|e| match e {
                        e @ Error::AtRadius { .. } => e,
                        e => e.at_radius(r),
                    })
            })
            .collect::<Result<_>>()?;

        let series = which
            .iter()
            .enumerate()
            .map(|(k, &distribution)| Series {
                distribution,
                values: rows.iter().map(|row| row[k]).collect(),
            })
            .collect();
        Ok(CdfCurve {
            params: self.params,
            grid: grid.to_vec(),
            series,
        })
    }
}

/// Contact-distance CDF at the default tolerance.
pub fn contact_cdf(params: &McpParams, r: f64) -> Result<f64> {
    MaternCdf::new(*params).contact_cdf(r)
}

/// Nearest-neighbor-distance CDF at the default tolerance.
pub fn nn_cdf(params: &McpParams, r: f64) -> Result<f64> {
    MaternCdf::new(*params).nn_cdf(r)
}

/// `1 - exp(-density · π r²)`. Returns NaN for invalid input.
pub fn ppp_contact_cdf(density: f64, r: f64) -> f64 {
    if !(density > 0.0) || !(r >= 0.0) {
        return f64::NAN;
    }
    one_minus_exp_neg(density * PI * r * r)
}

/// `1 - e^{-t}` without cancellation, and `+0` rather than `-0` at `t = 0`.
fn one_minus_exp_neg(t: f64) -> f64 {
    0.0 - (-t).exp_m1()
}

/// Law of the number of points in the typical point's own cluster,
/// `(ℓ / m̄) · Poisson(ℓ; m̄)`, which equals `Poisson(ℓ - 1; m̄)`.
/// Zero at `ℓ = 0` because that cluster contains the typical point.
pub fn cluster_size_pmf(m_bar: f64, ell: u64) -> f64 {
    if ell == 0 {
        return 0.0;
    }
    let k = (ell - 1) as f64;
    (k * m_bar.ln() - m_bar - ln_gamma(k + 1.0)).exp()
}

/// Batch evaluation on a strictly ascending grid.
pub fn cdf_curve(params: &McpParams, grid: &[f64], which: &[Distribution]) -> Result<CdfCurve> {
    MaternCdf::new(*params).curve(grid, which)
}

pub(crate) fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid("grid is empty".into()));
    }
    if let Some(bad) = grid.iter().find(|r| !(r.is_finite() && **r >= 0.0)) {
        return Err(Error::InvalidGrid(format!(
            "radius {bad} is not a finite nonnegative number"
        )));
    }
    if let Some(w) = grid.windows(2).find(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid(format!(
            "grid must be strictly ascending ({} followed by {})",
            w[0], w[1]
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Series {
    pub distribution: Distribution,
    pub values: Vec<f64>,
}

/// CDF values for one or more distributions on a common radial grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CdfCurve {
    pub params: McpParams,
    pub grid: Vec<f64>,
    pub series: Vec<Series>,
}

impl CdfCurve {
    pub fn values(&self, distribution: Distribution) -> Option<&[f64]> {
        self.series
            .iter()
            .find(|s| s.distribution == distribution)
            .map(|s| s.values.as_slice())
    }

    /// Header `r,<label>...` then one row per grid point.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        write!(out, "r")?;
        for s in &self.series {
            write!(out, ",{}", s.distribution.label())?;
        }
        writeln!(out)?;
        for (i, r) in self.grid.iter().enumerate() {
            write!(out, "{r}")?;
            for s in &self.series {
                write!(out, ",{}", s.values[i])?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}
