//! Exact Ehrhart counting, the h*-vector, and the algebraic cross-check.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{hilbert_dims, AlgebraError, Theta};
use crate::complex::{LatticeComplex, Space};
use crate::geometry::Polytope;
use crate::scalar::{FieldStream, FiniteField};

/// Most candidate points a single count may scan.
pub const SCAN_BUDGET: u128 = 100_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EhrhartError {
    #[error("scanning {0} candidates exceeds the budget")]
    Budget(u128),
    #[error("interpolant disagrees with the count at i = {0}")]
    Verification(u32),
    #[error("h*_{0} is negative")]
    Negative(usize),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HStarVector {
    pub coeffs: Vec<u64>,
    /// Index of the last nonzero coefficient.
    pub degree: usize,
}

/// `E_P(i) = #(iP ∩ Z^d)`.
pub fn count_points(p: &Polytope, i: u32) -> Result<u64, EhrhartError> {
    let scan = p.scan_size(i);
    if scan > SCAN_BUDGET {
        return Err(EhrhartError::Budget(scan));
    }
    Ok(p.lattice_points(i).len() as u64)
}

pub fn counts(p: &Polytope, upto: u32) -> Result<Vec<u64>, EhrhartError> {
    (0..=upto).map(|i| count_points(p, i)).collect()
}

/// Coefficients (constant first) of the degree-`dim P` interpolant of the
/// counts at `0..=dim P`, verified at the next three dilations.
pub fn ehrhart_polynomial(p: &Polytope) -> Result<Vec<BigRational>, EhrhartError> {
    let d = p.dim() as u32;
    let e = counts(p, d + 3)?;
    let nodes: Vec<BigRational> = (0..=d).map(|i| BigRational::from_integer(BigInt::from(i))).collect();
    let mut coeffs = vec![BigRational::zero(); d as usize + 1];
    for (a, xa) in nodes.iter().enumerate() {
        // Lagrange basis polynomial for node a, built by repeated multiplication.
        let mut basis = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for (b, xb) in nodes.iter().enumerate() {
            if a == b {
                continue;
            }
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (k, c) in basis.iter().enumerate() {
                next[k + 1] += c.clone();
                next[k] -= c * xb;
            }
            basis = next;
            denom *= xa - xb;
        }
        let scale = BigRational::from_integer(BigInt::from(e[a])) / denom;
        for (k, c) in basis.iter().enumerate() {
            coeffs[k] += c * &scale;
        }
    }
    for i in d + 1..=d + 3 {
        if evaluate(&coeffs, i) != BigRational::from_integer(BigInt::from(e[i as usize])) {
            return Err(EhrhartError::Verification(i));
        }
    }
    Ok(coeffs)
}

pub fn evaluate(coeffs: &[BigRational], i: u32) -> BigRational {
    let x = BigRational::from_integer(BigInt::from(i));
    coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * &x + c)
}

/// `h*_k = Σ_i (−1)^i C(d+1, i) E(k − i)` for `k = 0..=d`.
pub fn hstar(p: &Polytope) -> Result<HStarVector, EhrhartError> {
    let d = p.dim();
    let e = counts(p, d as u32)?;
    let mut coeffs = Vec::with_capacity(d + 1);
    for k in 0..=d {
        let mut acc: i128 = 0;
        for i in 0..=k {
            let term = binomial(d as i128 + 1, i as i128) * e[k - i] as i128;
            acc += if i % 2 == 0 { term } else { -term };
        }
        if acc < 0 {
            return Err(EhrhartError::Negative(k));
        }
        coeffs.push(acc as u64);
    }
    let degree = coeffs.iter().rposition(|&c| c != 0).unwrap_or(0);
    Ok(HStarVector { coeffs, degree })
}

/// `dim A^k(∂P)` for `k = 0..=dim P` under a generic Θ.
pub fn a_polynomial<F: FiniteField>(p: &Polytope, stream: &mut FieldStream) -> Result<Vec<usize>, EhrhartError> {
    let sphere = Arc::new(LatticeComplex::boundary_complex(p));
    let theta = Theta::<F>::generic(&sphere, stream);
    Ok(hilbert_dims(&Space::ring(sphere), &theta, p.dim() as u32)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossValidation {
    pub hstar: Vec<u64>,
    /// `dim A^k(P)`, `k = 0..=d+1`.
    pub ring_dims: Vec<usize>,
    /// `dim A^k(P,∂P)`, `k = 0..=d+1`.
    pub pair_dims: Vec<usize>,
    pub pass: bool,
}

/// `dim A^k(P) = h*_k` and `dim A^k(P,∂P) = h*_{d+1−k}` for `k = 0..=d+1`.
pub fn cross_validate<F: FiniteField>(p: &Polytope, stream: &mut FieldStream) -> Result<CrossValidation, EhrhartError> {
    let h = hstar(p)?;
    let d = p.dim();
    let cx = Arc::new(LatticeComplex::from_polytope(p, true));
    let theta = Theta::<F>::generic(&cx, stream);
    let ring_dims = hilbert_dims(&Space::ring(cx.clone()), &theta, d as u32 + 1)?;
    let pair_dims = hilbert_dims(&Space::relative(cx), &theta, d as u32 + 1)?;
    let at = |k: usize| h.coeffs.get(k).map_or(0, |&c| c as usize);
    let pass = (0..=d + 1).all(|k| ring_dims[k] == at(k) && pair_dims[k] == at(d + 1 - k));
    Ok(CrossValidation { hstar: h.coeffs, ring_dims, pair_dims, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Gf2_64;

    fn poly(v: Vec<Vec<i64>>) -> Polytope {
        Polytope::new("p", v).unwrap()
    }

    fn int(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn segment() {
        let p = poly(vec![vec![0], vec![2]]);
        assert_eq!(counts(&p, 2).unwrap(), vec![1, 3, 5]);
        assert_eq!(ehrhart_polynomial(&p).unwrap(), vec![int(1), int(2)]);
        assert_eq!(hstar(&p).unwrap().coeffs, vec![1, 1]);
    }

    #[test]
    fn cube_polynomial() {
        let p = poly(itertools::Itertools::multi_cartesian_product((0..3).map(|_| [-1i64, 1])).collect());
        // (2i+1)^3 = 8i^3 + 12i^2 + 6i + 1
        assert_eq!(ehrhart_polynomial(&p).unwrap(), vec![int(1), int(6), int(12), int(8)]);
        assert_eq!(hstar(&p).unwrap().coeffs, vec![1, 23, 23, 1]);
    }

    #[test]
    fn point_and_reeve() {
        assert_eq!(ehrhart_polynomial(&poly(vec![vec![3, 4]])).unwrap(), vec![int(1)]);
        let reeve = poly(vec![vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 2]]);
        assert_eq!(hstar(&reeve).unwrap(), HStarVector { coeffs: vec![1, 0, 1, 0], degree: 2 });
    }

    #[test]
    fn square_cross_check() {
        let p = poly(vec![vec![-1, -1], vec![1, -1], vec![-1, 1], vec![1, 1]]);
        let cv = cross_validate::<Gf2_64>(&p, &mut FieldStream::new(1)).unwrap();
        assert!(cv.pass, "{cv:?}");
        assert_eq!(cv.hstar, vec![1, 6, 1]);
        let a = a_polynomial::<Gf2_64>(&p, &mut FieldStream::new(2)).unwrap();
        assert_eq!(a, vec![1, 6, 1]);
    }
}
