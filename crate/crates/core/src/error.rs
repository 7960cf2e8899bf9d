use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// A kernel was evaluated outside its support; usually the caller
    /// picked the wrong branch.
    #[error("{kernel}: z = {z}, x = {x} lies outside the support for r_d = {r_d}")]
    OutsideSupport {
        kernel: &'static str,
        z: f64,
        x: f64,
        r_d: f64,
    },

    #[error("{kernel}: degenerate cluster center x = 0 (use chi1, the whole disk is Case 1)")]
    DegenerateCenter { kernel: &'static str },

    #[error(
        "quadrature did not converge after {intervals} intervals: \
         estimate {estimate:e} with error bound {error_estimate:e}"
    )]
    NonConvergence {
        estimate: f64,
        error_estimate: f64,
        intervals: usize,
    },

    /// Wraps a pointwise failure with the radius it happened at.
    #[error("at r = {radius}: {source}")]
    AtRadius {
        radius: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("expected {expected:e} points exceeds the sampler cap of {cap:e}")]
    ResourceCap { expected: f64, cap: f64 },

    #[error("r = {r} lies in the censored region beyond r_max = {r_max}")]
    Censored { r: f64, r_max: f64 },
}

impl Error {
    pub(crate) fn at_radius(self, radius: f64) -> Self {
        Error::AtRadius {
            radius,
            source: Box::new(self),
        }
    }

    /// True for numerical failures (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::NonConvergence { .. } | Error::ResourceCap { .. } => true,
            Error::AtRadius { source, .. } => source.is_numerical(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and > 0",
        })
    }
}

pub(crate) fn require_nonnegative(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and >= 0",
        })
    }
}
