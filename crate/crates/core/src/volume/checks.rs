use std::sync::Arc;

use super::{solve_volume, CellFlag, VolumeError, VolumeFunctional};
use crate::algebra::Theta;
use crate::complex::{LatticeComplex, Space};
use crate::geometry::{LatticePoint, Polytope};
use crate::scalar::{FiniteField, Scalar, UniRational};

/// Normalization sums `Σ det(Θ|σ) vol(x_σ)` for each given flag.
pub fn check_flag_independence<S: Scalar>(
    vf: &VolumeFunctional<S>,
    theta: &Theta<S>,
    flags: &[CellFlag],
) -> Result<Vec<(CellFlag, S)>, VolumeError> {
    flags.iter().map(|f| Ok((f.clone(), vf.normalization_sum(theta, f)?))).collect()
}

#[derive(Clone, Debug)]
pub struct LocalityReport {
    pub cell: usize,
    pub compared: usize,
    pub mismatches: Vec<LatticePoint>,
}

impl LocalityReport {
    pub fn holds(&self) -> bool {
        self.compared > 0 && self.mismatches.is_empty()
    }
}

/// Compares `vol_X` with `vol_{(Δ, ∂Δ)}` on the interior monomials of a cell
/// `Δ` of `X`, with `Θ` restricted and the flag taken inside `Δ`.
pub fn check_locality<S: Scalar>(
    x: &Space,
    theta: &Theta<S>,
    delta: &Polytope,
) -> Result<LocalityReport, VolumeError> {
    let cx = &x.complex;
    let cell = cx
        .cells()
        .iter()
        .position(|c| c.polytope.vertices() == delta.vertices())
        .ok_or_else(|| VolumeError::Locality(delta.name().to_string()))?;
    let flag = cx.cells()[cell].polytope.default_flag();
    let vol_x = solve_volume(x, theta, Some(&CellFlag { cell, flag: flag.clone() }))?;

    let dcx = Arc::new(LatticeComplex::from_polytope(delta, true));
    let dspace = Space::relative(dcx.clone());
    let dtheta = theta.restrict(cx, &dcx).map_err(|e| VolumeError::Locality(e.to_string()))?;
    let vol_d = solve_volume(&dspace, &dtheta, Some(&CellFlag { cell: 0, flag }))?;

    let top = dspace.top_degree();
    let layer = dcx.layer(top);
    let mut mismatches = Vec::new();
    for (&m, v) in vol_d.monomials.iter().zip(&vol_d.values) {
        let p = &layer.points[m];
        if vol_x.value_at(p) != *v {
            mismatches.push(p.clone());
        }
    }
    Ok(LocalityReport { cell, compared: vol_d.monomials.len(), mismatches })
}

/// `vol` over `k(t)` for `Θ` with the columns in `v` scaled by `t`.
#[derive(Clone, Debug)]
pub struct DeformedVolume<F: FiniteField> {
    pub functional: VolumeFunctional<UniRational<F>>,
    /// Value at `t = 0` per top monomial, `None` at a pole.
    pub at_zero: Vec<Option<F>>,
}

impl<F: FiniteField> DeformedVolume<F> {
    pub fn has_poles(&self) -> bool {
        self.at_zero.iter().any(Option::is_none)
    }

    pub fn value_at_zero(&self, point: &[i64]) -> Option<F> {
        let top = self.functional.degree();
        let idx = self.functional.space.complex.layer(top).find(point)?;
        match self.functional.monomials.iter().position(|&m| m == idx) {
            Some(i) => self.at_zero[i],
            None => Some(F::zero()),
        }
    }
}

pub fn deformed_volume<F: FiniteField>(
    space: &Space,
    theta: &Theta<F>,
    v: &[usize],
    flag: Option<&CellFlag>,
) -> Result<DeformedVolume<F>, VolumeError> {
    let scaled = theta.t_scaled(v);
    let functional = solve_volume(space, &scaled, flag)?;
    let at_zero = functional.values.iter().map(|r| r.eval(F::zero())).collect();
    Ok(DeformedVolume { functional, at_zero })
}
