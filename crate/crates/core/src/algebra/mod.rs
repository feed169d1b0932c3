//! The l.s.o.p. matrix and the graded pieces of Artinian reductions of
//! `k[X]` and `k[X, Y]`.

mod element;
mod piece;
mod theta;

use thiserror::Error;

pub use element::Element;
pub use piece::{hilbert_dims, mult_operator, natural_map, GradedPiece};
pub use theta::{random_linear_form, Theta, ThetaError, ThetaMode};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("Θ is {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    ThetaShape { rows: usize, cols: usize, expected_rows: usize, expected_cols: usize },
    #[error("element of height {height} is not in the space")]
    NotInSpace { height: u32 },
    #[error("height {got} where {expected} was expected")]
    HeightMismatch { got: u32, expected: u32 },
    #[error("vector of length {got}, expected {expected}")]
    Length { got: usize, expected: usize },
    #[error("relation pivot in column {0} is not invertible")]
    NoInvertiblePivot(usize),
    #[error(transparent)]
    Theta(#[from] ThetaError),
}
