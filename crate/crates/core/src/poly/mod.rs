//! Exact sparse multivariate polynomials over the rationals.

mod factored;
mod json;
mod monomial;
mod mpoly;
mod pretty;
mod space;
mod symmetric;
mod univariate;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

pub use factored::Factored;
pub use json::{PolyJson, SpaceJson, TermJson};
pub use monomial::Monomial;
pub use mpoly::MPoly;
pub use space::{Block, BlockKind, Var, VariableSpace};
pub use symmetric::{elementary_symmetric, power_sum};
pub use univariate::UniPoly;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("invalid variable space: {0}")]
    InvalidSpace(String),
    #[error("variable {0} is not in the space")]
    UnknownVariable(String),
    #[error("polynomials live in different variable spaces")]
    SpaceMismatch,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("division is not exact")]
    NotDivisible,
    #[error("empty input")]
    Empty,
    #[error("malformed polynomial JSON: {0}")]
    Json(String),
}

/// `n / d` as a rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<BigRational, PolyError> {
    let s = s.trim();
    let r = match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| PolyError::Json(format!("bad rational {s:?}")))?;
            let d: BigInt = d.trim().parse().map_err(|_| PolyError::Json(format!("bad rational {s:?}")))?;
            if d == BigInt::from(0) {
                return Err(PolyError::Json(format!("zero denominator in {s:?}")));
            }
            BigRational::new(n, d)
        }
        None => BigRational::from_integer(s.parse().map_err(|_| PolyError::Json(format!("bad rational {s:?}")))?),
    };
    Ok(r)
}
