//! Lattice polytopes, their cones, faces and flags, and the predicates and
//! constructions built on them.

mod constructions;
pub mod intlin;
mod polytope;
mod predicates;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use constructions::{dilate, pyramid, sublattice_view, SublatticeView};
pub use polytope::{Face, Facet, Flag, Polytope};
pub use predicates::{interior_generation_height, is_idp, is_reflexive, IdpReport};

pub type LatticePoint = Vec<i64>;

/// A lattice point of `cone(P)`: `point ∈ height·P`.
///
/// Ordered by height first, then lexicographically by coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ConeElement {
    pub height: u32,
    pub point: LatticePoint,
}

impl ConeElement {
    pub fn new(point: LatticePoint, height: u32) -> Self {
        ConeElement { height, point }
    }

    pub fn origin(ambient: usize) -> Self {
        ConeElement { height: 0, point: vec![0; ambient] }
    }

    pub fn add(&self, other: &ConeElement) -> ConeElement {
        ConeElement { height: self.height + other.height, point: intlin::add(&self.point, &other.point) }
    }

    /// `self - other`, if the height stays nonnegative.
    pub fn checked_sub(&self, other: &ConeElement) -> Option<ConeElement> {
        let height = self.height.checked_sub(other.height)?;
        Some(ConeElement { height, point: intlin::sub(&self.point, &other.point) })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("polytope needs at least one vertex")]
    Empty,
    #[error("points have inconsistent dimensions")]
    Ragged,
    #[error("at most 64 distinct input points are supported, got {0}")]
    TooManyPoints(usize),
    #[error("coordinate {0} exceeds the supported bound")]
    CoordinateBound(i64),
    #[error("polytope of dimension {dim} is not full dimensional in ambient dimension {ambient}")]
    NotFullDimensional { dim: usize, ambient: usize },
    #[error("vertex {0:?} is not in the coarse lattice")]
    NotCoarse(LatticePoint),
    #[error("{0}")]
    Scale(String),
}

/// Polytope input record: `{"name": .., "vertices": [[..], ..], "coarsen": N}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolytopeSpec {
    pub name: String,
    pub vertices: Vec<LatticePoint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coarsen: Option<i64>,
}

impl PolytopeSpec {
    pub fn build(&self) -> Result<Polytope, GeometryError> {
        Polytope::new(&self.name, self.vertices.clone())
    }
}
