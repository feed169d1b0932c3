use std::collections::BTreeSet;

use super::{check_budget, common_cells, require_char, tuples, IdentityError, IdentityReport};
use crate::algebra::{Element, GradedPiece};
use crate::complex::{CellSet, Space};
use crate::geometry::intlin;
use crate::scalar::{linear_solve, FiniteField, Matrix, SolveOutcome};
use crate::volume::VolumeFunctional;

/// Layer indices of the elements `x_{F/2}` at height `(d+1)/2`, for `F` an
/// ordered `(d+1)`-tuple of height-1 elements in a common cell.
pub fn half_points(space: &Space) -> Result<Vec<usize>, IdentityError> {
    let cx = &space.complex;
    let top = space.top_degree();
    if !top.is_multiple_of(2) {
        return Err(IdentityError::Parity(format!("d+1 = {top} is odd")));
    }
    let l1 = cx.layer(1);
    check_budget((l1.len() as u64).saturating_pow(top))?;
    let mut out = BTreeSet::new();
    for f in tuples(l1.len(), top as usize) {
        if common_cells(cx, CellSet(u64::MAX), &f).0 == 0 {
            continue;
        }
        let sum = f.iter().fold(vec![0; cx.ambient_dim()], |acc, &p| intlin::add(&acc, &l1.points[p]));
        if let Some(h) = cx.half_point(&sum, top)? {
            out.insert(h);
        }
    }
    Ok(out.into_iter().collect())
}

/// Basis of the classes `u ∈ A^{(d+1)/2}` with `u · x_{F/2} = 0` for every
/// half point, lifted to representatives.
pub fn pairing_kernel<F: FiniteField>(
    vf: &VolumeFunctional<F>,
    piece: &GradedPiece<F>,
) -> Result<Vec<Element<F>>, IdentityError> {
    let cx = &vf.space.complex;
    let halves = half_points(&vf.space)?;
    let basis = piece.basis_monomials();
    if basis.is_empty() {
        return Ok(Vec::new());
    }
    if halves.is_empty() {
        return Ok((0..basis.len()).map(|i| piece.lift(&unit::<F>(basis.len(), i))).collect());
    }
    let k = piece.degree();
    let m = Matrix::from_fn(halves.len(), basis.len(), |r, c| {
        let prod = Element::monomial(k, basis[c]).mul(&Element::monomial(k, halves[r]), cx);
        vf.volume_of(&prod).expect("top degree product")
    });
    let zero = vec![F::zero(); halves.len()];
    match linear_solve(&m, &zero, true).map_err(crate::volume::VolumeError::from)? {
        SolveOutcome::Unique(_) => Ok(Vec::new()),
        SolveOutcome::Underdetermined { kernel, .. } => Ok(kernel.iter().map(|v| piece.lift(v)).collect()),
    }
}

fn unit<F: FiniteField>(n: usize, i: usize) -> Vec<F> {
    (0..n).map(|j| if i == j { F::one() } else { F::zero() }).collect()
}

/// `u` pairs nontrivially with some half point exactly when `u² ≠ 0`.
pub fn isotropy_dichotomy<F: FiniteField>(
    vf: &VolumeFunctional<F>,
    u: &Element<F>,
) -> Result<IdentityReport, IdentityError> {
    require_char::<F>(2)?;
    let cx = &vf.space.complex;
    let top = vf.degree();
    let halves = half_points(&vf.space)?;
    let k = top / 2;
    if u.height != k {
        return Err(IdentityError::NotAdmissible(format!("u has degree {}, expected {k}", u.height)));
    }
    let mut paired = false;
    for &h in &halves {
        if !vf.volume_of(&u.mul(&Element::monomial(k, h), cx))?.is_zero() {
            paired = true;
            break;
        }
    }
    let square = vf.volume_of(&u.mul(u, cx))?;
    Ok(IdentityReport {
        identity: "dichotomy".into(),
        instance: format!("{} deg(u)={k} terms(u)={} half_points={}", vf.space.describe(), u.terms.len(), halves.len()),
        left: format!("paired={paired}"),
        right: format!("square_nonzero={}", !square.is_zero()),
        pass: paired != square.is_zero(),
        retries: 0,
    })
}
