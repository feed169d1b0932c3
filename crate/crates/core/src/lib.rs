//! Semigroup algebras of lattice polytopes and lattice complexes, their
//! generic Artinian reductions over finite fields, and the normalized volume map.

pub mod scalar;
pub mod geometry;
pub mod complex;
pub mod algebra;
pub mod volume;
pub mod identities;
pub mod lefschetz;
pub mod ehrhart;
pub mod corpus;
pub mod suite;
