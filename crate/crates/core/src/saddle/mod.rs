//! Multi-precision model of compositions of power-like maps: jets, the chain
//! quantities `F_i, Z_i, μ_{iq}, 𝒟^(l)`, and the numerical probes built on them.

mod chain;
mod double_cycle;
mod jet;
mod model;
mod probes;

use num_rational::BigRational;
use rug::Float;
use thiserror::Error;

use crate::recurrence::RecurrenceError;

pub use chain::{chain, ChainResult};
pub use double_cycle::{double_cycle_family_probe, DoubleCyclePoint, DoubleCycleReport, NEWTON_TOLERANCE};
pub use jet::Jet;
pub use model::{jet_of_map, random_model, ModelError, PolycycleModel, RandomModel, SaddleModel, DEFAULT_PRECISION_BITS};
pub use probes::{
    divergence_probe_n1, eval_float, geometric_grid, identity_check, identity_check_with, mu_limit_probe, mu_target, richardson, DivergenceReport,
    IdentityReport, IdentityRow, MuLimitReport,
};

#[derive(Debug, Error)]
pub enum SaddleError {
    #[error("domain error at stage {stage}: {message}")]
    Stage { stage: usize, message: String },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("precision exhausted: {0}; rerun with a larger precision_bits")]
    Precision(String),
    #[error("Newton iteration did not converge at x0 = {x0}: residuals {residuals:?}")]
    Newton { x0: String, residuals: [f64; 2] },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Recurrence(#[from] RecurrenceError),
}

impl SaddleError {
    pub(crate) fn domain(message: impl Into<String>) -> Self {
        SaddleError::Domain(message.into())
    }

    pub(crate) fn at_stage(stage: usize, message: impl Into<String>) -> Self {
        SaddleError::Stage {
            stage,
            message: message.into(),
        }
    }

    pub(crate) fn with_stage(self, stage: usize) -> Self {
        match self {
            SaddleError::Domain(message) => SaddleError::Stage { stage, message },
            other => other,
        }
    }
}

/// Rounds an exact rational to a float of the given precision.
pub fn to_float(r: &BigRational, prec: u32) -> Float {
    let q = rug::Rational::from(rug::Rational::parse(r.to_string()).expect("rational renders parseably"));
    Float::with_val(prec, &q)
}

/// Decimal rendering with every significant digit of the float's precision.
pub fn float_string(x: &Float) -> String {
    x.to_string_radix(10, None)
}

#[cfg(test)]
mod tests;
