//! Exact checks of the quadratic and differential identities satisfied by the
//! volume map.

mod balancing;
mod dichotomy;
mod differential;
mod euler;
mod parseval;

use itertools::Itertools;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::complex::{CellSet, ComplexError, LatticeComplex};
use crate::scalar::{FiniteField, ScalarError};
use crate::volume::VolumeError;

pub use balancing::check_balancing;
pub use dichotomy::{half_points, isotropy_dichotomy, pairing_kernel};
pub use differential::{check_differential, differential_instances, DifferentialInstance};
pub use euler::{check_euler, EulerMode};
pub use parseval::{
    check_parseval_char2, check_parseval_char_p, check_parseval_general, parseval_char2_terms, row_compositions,
};

/// Largest number of summands any identity check will enumerate.
pub const TERM_BUDGET: u64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IdentityError {
    #[error("identity needs characteristic {expected}, field has {got}")]
    Characteristic { expected: u64, got: u64 },
    #[error("parity: {0}")]
    Parity(String),
    #[error("not admissible: {0}")]
    NotAdmissible(String),
    #[error("{0} terms exceed the budget of {TERM_BUDGET}")]
    Budget(u64),
    #[error(transparent)]
    Volume(#[from] VolumeError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Outcome of one identity instance; `pass` iff `left == right` in the field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub identity: String,
    pub instance: String,
    pub left: String,
    pub right: String,
    pub pass: bool,
    pub retries: u32,
}

impl IdentityReport {
    pub fn from_values<F: FiniteField>(identity: &str, instance: String, left: F, right: F) -> Self {
        IdentityReport {
            identity: identity.to_string(),
            instance,
            left: left.to_hex(),
            right: right.to_hex(),
            pass: left == right,
            retries: 0,
        }
    }

    pub fn with_retries(mut self, retries: u32) -> Self {
        self.retries = retries;
        self
    }
}

/// All ordered `len`-tuples of indices below `n`.
pub fn tuples(n: usize, len: usize) -> Box<dyn Iterator<Item = Vec<usize>>> {
    if len == 0 {
        return Box::new(std::iter::once(Vec::new()));
    }
    Box::new((0..len).map(|_| 0..n).multi_cartesian_product())
}

pub(crate) fn check_budget(count: u64) -> Result<(), IdentityError> {
    if count > TERM_BUDGET {
        Err(IdentityError::Budget(count))
    } else {
        Ok(())
    }
}

/// Cells containing every listed height-1 element together with `start`.
pub(crate) fn common_cells(cx: &LatticeComplex, start: CellSet, points: &[usize]) -> CellSet {
    let l1 = cx.layer(1);
    points.iter().fold(start, |acc, &p| acc.intersection(l1.cells[p]))
}

pub fn point_label(cx: &LatticeComplex, h: u32, idx: usize) -> String {
    let p = &cx.layer(h).points[idx];
    format!("({})@{h}", p.iter().map(i64::to_string).join(","))
}

pub(crate) fn require_char<F: FiniteField>(p: u64) -> Result<(), IdentityError> {
    if F::CHARACTERISTIC != p {
        return Err(IdentityError::Characteristic { expected: p, got: F::CHARACTERISTIC });
    }
    Ok(())
}
