//! Solvability of the homogeneous systems `Q_{m,1} = .. = Q_{m,m} = 0` and their
//! eliminants for `m ≤ 3`.

mod eliminants;
mod newton;
mod resultant;
mod system;
mod zeroset;

use thiserror::Error;

use crate::poly::PolyError;
use crate::recurrence::RecurrenceError;

pub use eliminants::{eliminant_n2, eliminant_n3, eliminant_n4, Eliminant, EliminantN4};
pub use newton::{newton_no_common_zero, NewtonDerivation, NewtonStep};
pub use resultant::{determinant, sylvester_matrix, sylvester_resultant};
pub use system::{has_nontrivial_zero, has_nontrivial_zero_with, HomSystem, Strategy};
pub use zeroset::{compare_predicates, random_rational, zero_set_compare, Disagreement, Point, Pool, ZeroSetReport};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EliminationError {
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Recurrence(#[from] RecurrenceError),
}
