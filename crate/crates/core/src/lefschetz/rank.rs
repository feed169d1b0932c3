use serde::Serialize;

use super::LefschetzError;
use crate::algebra::{mult_operator, natural_map, Element, GradedPiece, Theta};
use crate::complex::{LatticeComplex, Space};
use crate::scalar::{FiniteField, Matrix};

/// Rank of one multiplication map against an externally known expectation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankReport {
    pub map: String,
    pub k: u32,
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
    pub expected: usize,
    pub pass: bool,
}

/// `ℓ^e` for `ℓ = Σ_j ℓ_j x_j`.
pub fn linear_form_power<F: FiniteField>(ell: &[F], e: u32, cx: &LatticeComplex) -> Element<F> {
    Element::linear(ell).pow(e, cx)
}

fn rank_of<F: FiniteField>(m: &Matrix<F>) -> Result<usize, LefschetzError> {
    if m.rows() == 0 || m.cols() == 0 {
        return Ok(0);
    }
    Ok(m.rank()?)
}

/// `A^k(P,∂P) --ℓ^{d+1-2k}--> A^{d+1-k}(P,∂P) → A^{d+1-k}(P)`; passes when
/// both sides have dimension `expected` and the composite is invertible.
pub fn check_relative_lefschetz<F: FiniteField>(
    pair: &Space,
    theta: &Theta<F>,
    ell: &[F],
    k: u32,
    expected: usize,
) -> Result<RankReport, LefschetzError> {
    let top = pair.top_degree();
    if 2 * k > top {
        return Err(LefschetzError::Degree { k, max: top / 2 });
    }
    let ring = Space::ring(pair.complex.clone());
    let src = GradedPiece::new(pair, theta, k)?;
    let mid = GradedPiece::new(pair, theta, top - k)?;
    let dst = GradedPiece::new(&ring, theta, top - k)?;
    let power = linear_form_power(ell, top - 2 * k, &pair.complex);
    let mult = mult_operator(&src, &power, &mid)?;
    let nat = natural_map(&mid, &dst)?;
    let composite = if mid.dim() == 0 { Matrix::zeros(dst.dim(), src.dim()) } else { nat.mul(&mult) };
    let rank = rank_of(&composite)?;
    let pass = src.dim() == expected && dst.dim() == expected && rank == expected;
    Ok(RankReport {
        map: format!("{}: A^{k}(rel) -l^{}-> A^{}(ring)", pair.describe(), top - 2 * k, top - k),
        k,
        source_dim: src.dim(),
        target_dim: dst.dim(),
        rank,
        expected,
        pass,
    })
}

/// `A^k(P) --ℓ^{d+1-j-2k}--> A^{d+1-j-k}(P)` is injective: rank `= expected = h*_k`.
pub fn check_level_lefschetz<F: FiniteField>(
    ring: &Space,
    theta: &Theta<F>,
    ell: &[F],
    j: u32,
    k: u32,
    expected: usize,
) -> Result<RankReport, LefschetzError> {
    let top = ring.top_degree();
    if j > top || 2 * k > top - j {
        return Err(LefschetzError::Degree { k, max: top.saturating_sub(j) / 2 });
    }
    let e = top - j - 2 * k;
    let src = GradedPiece::new(ring, theta, k)?;
    let dst = GradedPiece::new(ring, theta, k + e)?;
    let m = mult_operator(&src, &linear_form_power(ell, e, &ring.complex), &dst)?;
    let rank = rank_of(&m)?;
    Ok(RankReport {
        map: format!("{}: A^{k} -l^{e}-> A^{} (j={j})", ring.describe(), k + e),
        k,
        source_dim: src.dim(),
        target_dim: dst.dim(),
        rank,
        expected,
        pass: src.dim() == expected && rank == expected,
    })
}

/// `A^k(X) --ℓ^{top-2k}--> A^{top-k}(X)` for a sphere; both sides must have
/// dimension `expected` and the map must be invertible.
pub fn check_sphere_lefschetz<F: FiniteField>(
    sphere: &Space,
    theta: &Theta<F>,
    ell: &[F],
    k: u32,
    expected: usize,
) -> Result<RankReport, LefschetzError> {
    let top = sphere.top_degree();
    if 2 * k > top {
        return Err(LefschetzError::Degree { k, max: top / 2 });
    }
    let src = GradedPiece::new(sphere, theta, k)?;
    let dst = GradedPiece::new(sphere, theta, top - k)?;
    let m = mult_operator(&src, &linear_form_power(ell, top - 2 * k, &sphere.complex), &dst)?;
    let rank = rank_of(&m)?;
    Ok(RankReport {
        map: format!("{}: A^{k} -l^{}-> A^{}", sphere.describe(), top - 2 * k, top - k),
        k,
        source_dim: src.dim(),
        target_dim: dst.dim(),
        rank,
        expected,
        pass: src.dim() == expected && dst.dim() == expected && rank == expected,
    })
}

/// `dim (A/ℓA)^i = dim A^i − rank(ℓ: A^{i−1} → A^i)` for `i = 0..=imax`.
pub fn quotient_dims<F: FiniteField>(
    space: &Space,
    theta: &Theta<F>,
    ell: &[F],
    imax: u32,
) -> Result<Vec<usize>, LefschetzError> {
    let form = Element::linear(ell);
    let mut prev = GradedPiece::new(space, theta, 0)?;
    let mut out = vec![prev.dim()];
    for i in 1..=imax {
        let cur = GradedPiece::new(space, theta, i)?;
        let r = rank_of(&mult_operator(&prev, &form, &cur)?)?;
        out.push(cur.dim() - r);
        prev = cur;
    }
    Ok(out)
}
