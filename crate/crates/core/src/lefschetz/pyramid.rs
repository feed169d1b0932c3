use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use super::LefschetzError;
use crate::algebra::{hilbert_dims, Theta};
use crate::complex::{LatticeComplex, Space};
use crate::scalar::{FieldStream, FiniteField};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PyramidReport {
    pub instance: String,
    /// `dim A^m(Ψ)` for `m = 0..=d+2`.
    pub base_dims: Vec<usize>,
    /// `dim A^m(pyr X, pyr Y)`.
    pub cone_dims: Vec<usize>,
    /// `dim A^m(pyr X, X ∪ pyr Y)`.
    pub pyramid_dims: Vec<usize>,
    /// Whether `x ↦ x·x_apex` maps the module monomials of `(pyr X, pyr Y)` at
    /// height `m` onto those of `(pyr X, X ∪ pyr Y)` at height `m+1`.
    pub apex_bijection: Vec<bool>,
    pub pass: bool,
}

/// Both parts of the pyramid lemma for `Ψ = (X, Y)`, with a pyramid-special
/// Θ extending a generic Θ on `X`.
pub fn check_pyramid_lemma<F: FiniteField>(
    psi: &Arc<LatticeComplex>,
    stream: &mut FieldStream,
) -> Result<PyramidReport, LefschetzError> {
    let base = Space::relative(psi.clone());
    let cone = Arc::new(psi.cone());
    let pyr = Arc::new(psi.pyramid());
    let theta = Theta::<F>::generic(psi, stream);
    let special = theta.pyramid_special(psi, &cone, stream).map_err(crate::algebra::AlgebraError::from)?;
    let mmax = base.top_degree() + 1;

    let base_dims = hilbert_dims(&base, &theta, mmax)?;
    let cone_dims = hilbert_dims(&Space::relative(cone.clone()), &special, mmax)?;
    let pyramid_dims = hilbert_dims(&Space::relative(pyr.clone()), &special, mmax + 1)?;

    let apex_col = cone.layer(1).find(&apex(psi.ambient_dim())).expect("apex is a height-1 element");
    let apex_bijection = (0..=mmax)
        .map(|m| {
            let (src, dst) = (cone.layer(m), pyr.layer(m + 1));
            let image: BTreeSet<usize> = src
                .module
                .iter()
                .filter_map(|&i| cone.multiply(1, apex_col, m, i))
                .filter(|&i| !dst.in_boundary[i])
                .collect();
            image.len() == src.module.len() && image == dst.module.iter().copied().collect()
        })
        .collect::<Vec<bool>>();

    let shifted_ok = (0..=mmax as usize).all(|m| base_dims[m] == pyramid_dims[m + 1]) && pyramid_dims[0] == 0;
    let pass = base_dims == cone_dims && shifted_ok && apex_bijection.iter().all(|&b| b);
    Ok(PyramidReport {
        instance: base.describe(),
        base_dims,
        cone_dims,
        pyramid_dims,
        apex_bijection,
        pass,
    })
}

fn apex(ambient: usize) -> Vec<i64> {
    let mut v = vec![0; ambient + 1];
    v[ambient] = 1;
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Polytope;
    use crate::scalar::Gf2_64;

    #[test]
    fn segment_both_ways() {
        let seg = Polytope::new("seg", vec![vec![0], vec![2]]).unwrap();
        for relative in [false, true] {
            let psi = Arc::new(LatticeComplex::from_polytope(&seg, relative));
            let r = check_pyramid_lemma::<Gf2_64>(&psi, &mut FieldStream::new(5)).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }
}
