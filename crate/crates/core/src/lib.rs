//! Contact-distance and nearest-neighbor-distance distributions of the planar
//! Matérn cluster process (MCP), together with an independent Monte Carlo
//! simulator used to validate them.
//!
//! * [`kernels`]: conditional distance densities of one cluster and the
//!   closed-form mass a cluster puts inside a ball.
//! * [`quadrature`]: adaptive Gauss-Kronrod integration.
//! * [`analytic`]: the contact and nearest-neighbor CDFs, the PPP baseline
//!   and the size-biased own-cluster law.
//! * [`simulate`]: MCP realizations and empirical distance CDFs.
//! * [`validate`]: KS tests, stochastic dominance and PPP-limit checks.
//! * [`cli`]: the `mcp-distance` command line front end.
//!
//! ```
//! use mcp_distance::{analytic::MaternCdf, McpParams};
//!
//! let params = McpParams::new(20e-6, 30.0, 40.0)?;
//! let cdf = MaternCdf::new(params);
//! let (contact, nn) = (cdf.contact_cdf(30.0)?, cdf.nn_cdf(30.0)?);
//! assert!(nn >= contact);
//! # Ok::<(), mcp_distance::Error>(())
//! ```

// `!(x > 0.0)` style guards are used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod cli;
mod error;
pub mod kernels;
pub mod quadrature;
pub mod simulate;
pub mod validate;

pub use analytic::{CdfCurve, Distribution, MaternCdf};
pub use error::{Error, Result};
pub use kernels::McpParams;
pub use simulate::{EmpiricalCdf, SimulationConfig};
