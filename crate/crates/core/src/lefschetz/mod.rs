//! Rank and anisotropy checks on generic Artinian reductions.

mod anisotropy;
mod inequalities;
mod pyramid;
mod rank;
mod tuples;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{AlgebraError, Element, GradedPiece};
use crate::complex::ComplexError;
use crate::scalar::{FieldStream, FiniteField, LinAlgError};
use crate::volume::VolumeError;

pub use anisotropy::{check_anisotropy, check_hall_laman_element};
pub use inequalities::{hstar_inequality_report, is_m_vector, Inequality, InequalityInput};
pub use pyramid::{check_pyramid_lemma, PyramidReport};
pub use rank::{
    check_level_lefschetz, check_relative_lefschetz, check_sphere_lefschetz, linear_form_power, quotient_dims,
    RankReport,
};
pub use tuples::{check_partition_of_unity, interior_tuples};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LefschetzError {
    #[error("degree {k} is outside the admissible range 0..={max}")]
    Degree { k: u32, max: u32 },
    #[error("{0}")]
    Shape(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Linear(#[from] LinAlgError),
    #[error(transparent)]
    Volume(#[from] VolumeError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Result of a randomized trial loop; `pass` iff no counterexample was found.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrialReport {
    pub property: String,
    pub instance: String,
    pub trials: usize,
    pub skipped: usize,
    pub failures: usize,
    pub pass: bool,
}

impl TrialReport {
    fn new(property: &str, instance: String, trials: usize, skipped: usize, failures: usize) -> Self {
        TrialReport { property: property.into(), instance, trials, skipped, failures, pass: failures == 0 }
    }
}

/// A uniformly random class of the piece, lifted to its basis monomials;
/// `None` when the piece is zero.
pub fn random_class<F: FiniteField>(piece: &GradedPiece<F>, stream: &mut FieldStream) -> Option<Element<F>> {
    if piece.dim() == 0 {
        return None;
    }
    loop {
        let c: Vec<F> = stream.sample_vec(piece.dim());
        if c.iter().any(|x| !x.is_zero()) {
            return Some(piece.lift(&c));
        }
    }
}
