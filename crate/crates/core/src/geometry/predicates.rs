use std::collections::HashSet;

use super::intlin;
use super::{ConeElement, GeometryError, LatticePoint, Polytope};

/// Outcome of the bounded IDP check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdpReport {
    pub certified_to: u32,
    /// Least cone point that is not a sum of a lower point and a height-1 point.
    pub witness: Option<ConeElement>,
}

impl IdpReport {
    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }
}

/// Checks that every cone point of height `2..=certify_height` splits off a
/// height-1 point. Default bound is `dim + 1`.
pub fn is_idp(p: &Polytope, certify_height: Option<u32>) -> IdpReport {
    let bound = certify_height.unwrap_or(p.dim() as u32 + 1);
    let ones = p.lattice_points(1);
    for h in 2..=bound {
        let lower = p.lattice_points(h - 1);
        let below: HashSet<&LatticePoint> = lower.iter().collect();
        for x in p.lattice_points(h).iter() {
            if !ones.iter().any(|q| below.contains(&intlin::sub(x, q))) {
                return IdpReport { certified_to: bound, witness: Some(ConeElement::new(x.clone(), h)) };
            }
        }
    }
    IdpReport { certified_to: bound, witness: None }
}

/// The interior point `p` at height 1 with `int(k+1)·P = p + k·P` for `k ≤ d+1`.
pub fn is_reflexive(p: &Polytope) -> Result<Option<LatticePoint>, GeometryError> {
    if !p.is_full_dimensional() {
        return Err(GeometryError::NotFullDimensional { dim: p.dim(), ambient: p.ambient_dim() });
    }
    let int1 = p.relative_interior_points(1);
    if int1.len() != 1 {
        return Ok(None);
    }
    let c = &int1[0];
    for k in 0..=p.dim() as u32 + 1 {
        let shifted: Vec<LatticePoint> = p.lattice_points(k).iter().map(|x| intlin::add(x, c)).collect();
        let mut shifted = shifted;
        shifted.sort();
        if *p.relative_interior_points(k + 1) != shifted {
            return Ok(None);
        }
    }
    Ok(Some(c.clone()))
}

/// Minimal generators of the interior ideal up to `bound` (default `dim + 1`)
/// and the largest height among them; `None` if no interior point appears.
pub fn interior_generation_height(
    p: &Polytope,
    bound: Option<u32>,
) -> Result<Option<(u32, Vec<ConeElement>)>, GeometryError> {
    if !p.is_full_dimensional() {
        return Err(GeometryError::NotFullDimensional { dim: p.dim(), ambient: p.ambient_dim() });
    }
    let bound = bound.unwrap_or(p.dim() as u32 + 1);
    let mut gens = Vec::new();
    for h in 1..=bound {
        for x in p.relative_interior_points(h).iter() {
            let decomposes = (1..h).any(|c| {
                let lower = p.relative_interior_points(h - c);
                p.lattice_points(c).iter().any(|q| lower.binary_search(&intlin::sub(x, q)).is_ok())
            });
            if !decomposes {
                gens.push(ConeElement::new(x.clone(), h));
            }
        }
    }
    Ok(gens.iter().map(|g| g.height).max().map(|j| (j, gens)))
}
