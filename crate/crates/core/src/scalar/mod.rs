//! Scalar arithmetic: finite fields, univariate rational functions over them,
//! truncated multivariate jets, and exact linear solving over all three.

mod gf2;
mod gfp;
mod jet;
pub mod linalg;
mod rational;
mod sample;

use std::fmt::Debug;
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;
use thiserror::Error;

pub use gf2::{Gf2, Gf2_128, Gf2_32, Gf2_64};
pub use gfp::{Gf3, Gf3_32, Gf5, Gf5_32, GfPk};
pub use jet::{JetScalar, JetShape, VarTag};
pub use linalg::{determinant, linear_solve, LinAlgError, Matrix, SolveOutcome};
pub use rational::UniRational;
pub use sample::FieldStream;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("unknown jet variable {0:?}")]
    UnknownVariable(VarTag),
    #[error("derivative order {order} is not below the characteristic {characteristic}")]
    OrderTooHigh { order: u32, characteristic: u64 },
    #[error("multi-index exceeds the jet caps")]
    OutsideCaps,
}

/// Commutative ring element with exact arithmetic.
///
/// `inverse` returns `None` for non-units; over a field that is exactly zero,
/// over jets it is every element with vanishing constant term.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn inverse(&self) -> Option<Self>;
    /// Image of an integer under the unique ring map from `Z`.
    fn from_int(n: i64) -> Self;

    fn is_unit(&self) -> bool {
        self.inverse().is_some()
    }

    fn square(&self) -> Self {
        self.clone() * self.clone()
    }
}

/// A finite field `GF(p^k)` with a fixed polynomial-basis representation.
pub trait FiniteField: Scalar + Copy + Eq + Hash {
    const CHARACTERISTIC: u64;
    const DEGREE: u32;

    /// Stable identifier of the field and its modulus, recorded in reports.
    fn modulus_id() -> &'static str;

    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Lowercase hex of the coefficient vector, leading coefficient first.
    fn to_hex(&self) -> String;

    /// Field element whose coordinate vector is the base-`p` expansion of `n`.
    fn from_index(n: u128) -> Self;

    fn pow(self, mut e: u128) -> Self {
        let mut base = self;
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    fn frobenius(self) -> Self {
        self.pow(Self::CHARACTERISTIC as u128)
    }

    /// `p^k` when it fits in a `u128`.
    fn order() -> Option<u128> {
        (Self::CHARACTERISTIC as u128).checked_pow(Self::DEGREE)
    }
}

/// `a / b` for any scalar, `None` if `b` is not a unit.
pub fn checked_div<S: Scalar>(a: S, b: &S) -> Option<S> {
    b.inverse().map(|inv| a * inv)
}
