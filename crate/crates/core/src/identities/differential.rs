use super::{check_budget, common_cells, point_label, require_char, tuples, IdentityError, IdentityReport};
use crate::algebra::{Element, Theta};
use crate::complex::{CellSet, Space};
use crate::geometry::intlin;
use crate::scalar::{FiniteField, JetScalar};
use crate::volume::{solve_volume, VolumeFunctional};

/// `F` differentiates `θ_{i, F_i}` in every row `i`; `σ` lists positions of
/// `F`; `G` is the height-`k` element with `2·ΣG = Σ(F∖σ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferentialInstance {
    pub f: Vec<usize>,
    pub sigma: Vec<usize>,
    pub g: usize,
    pub k: u32,
    /// Whether `Σσ` is an element of the module, so `u` may come from the ring.
    pub sigma_interior: bool,
}

impl DifferentialInstance {
    pub fn sigma_points(&self) -> Vec<usize> {
        self.sigma.iter().map(|&i| self.f[i]).collect()
    }
}

/// Every admissible `(F, σ, G)` with `|σ| = j`: all of `F` in one cell and
/// `Σ(F∖σ)` divisible by two.
pub fn differential_instances(space: &Space, j: usize) -> Result<Vec<DifferentialInstance>, IdentityError> {
    let cx = &space.complex;
    let rows = cx.krull_dim();
    if j > rows || !(rows - j).is_multiple_of(2) {
        return Err(IdentityError::Parity(format!("|F| = {rows} and |σ| = {j}")));
    }
    let k = ((rows - j) / 2) as u32;
    let l1 = cx.layer(1);
    check_budget((l1.len() as u64).saturating_pow(rows as u32))?;
    let subsets: Vec<Vec<usize>> = itertools::Itertools::combinations(0..rows, j).collect();
    let mut out = Vec::new();
    for f in tuples(l1.len(), rows) {
        if common_cells(cx, CellSet(u64::MAX), &f).0 == 0 {
            continue;
        }
        for sigma in &subsets {
            let rest = (0..rows).filter(|i| !sigma.contains(i));
            let sum = rest.fold(vec![0; cx.ambient_dim()], |acc, i| intlin::add(&acc, &l1.points[f[i]]));
            let Some(g) = cx.half_point(&sum, 2 * k)? else { continue };
            let sig_sum = sigma.iter().fold(vec![0; cx.ambient_dim()], |acc, &i| intlin::add(&acc, &l1.points[f[i]]));
            let sigma_interior = j > 0
                && cx.layer(j as u32).find(&sig_sum).is_some_and(|s| space.contains(j as u32, s));
            out.push(DifferentialInstance { f: f.clone(), sigma: sigma.clone(), g, k, sigma_interior });
        }
    }
    Ok(out)
}

/// `∂_F vol(x_σ u²) = vol(x_σ u x_G)²` in characteristic 2, the left side read
/// off a volume solve over jets in the variables `θ_{i,F_i}`.
pub fn check_differential<F: FiniteField>(
    base: &VolumeFunctional<F>,
    theta: &Theta<F>,
    inst: &DifferentialInstance,
    u: &Element<F>,
) -> Result<IdentityReport, IdentityError> {
    require_char::<F>(2)?;
    let space = &base.space;
    let cx = &space.complex;
    if inst.f.len() != cx.krull_dim() || inst.f.len() != inst.sigma.len() + 2 * inst.k as usize {
        return Err(IdentityError::Parity(format!("|F| = {}, |σ| = {}, |G| = {}", inst.f.len(), inst.sigma.len(), inst.k)));
    }
    if u.height != inst.k {
        return Err(IdentityError::NotAdmissible(format!("u has degree {}, expected {}", u.height, inst.k)));
    }
    if !inst.sigma_interior && !u.terms.iter().all(|(i, _)| space.contains(inst.k, *i)) {
        return Err(IdentityError::NotAdmissible("u leaves the module and Σσ is not interior".into()));
    }
    let vars: Vec<(usize, usize)> = inst.f.iter().enumerate().map(|(i, &c)| (i, c)).collect();
    let jt = theta.jet_lifted(&vars, &vec![1; vars.len()]).map_err(crate::algebra::AlgebraError::from)?;
    let jvf = solve_volume(space, &jt, Some(&base.flag))?;

    let x_sigma = inst
        .sigma_points()
        .iter()
        .fold(Element::<F>::one(cx), |acc, &p| acc.mul(&Element::monomial(1, p), cx));
    let ju = u.map(|&c| JetScalar::constant(c));
    let jx = x_sigma.map(|&c| JetScalar::constant(c));
    let target = jx.mul(&ju.mul(&ju, cx), cx);
    let lhs_jet = jvf.volume_of(&target)?;
    let exps: Vec<((usize, usize), u32)> = vars.iter().map(|&v| (v, 1)).collect();
    let lhs = if lhs_jet.shape().is_some() { lhs_jet.coefficient(&exps)? } else { F::zero() };

    let xg = Element::monomial(inst.k, inst.g);
    let r = base.volume_of(&x_sigma.mul(&u.mul(&xg, cx), cx))?;
    let labels: Vec<String> = inst.f.iter().map(|&p| point_label(cx, 1, p)).collect();
    let instance = format!(
        "{} F=[{}] sigma={:?} G={} terms(u)={}",
        space.describe(),
        labels.join(" "),
        inst.sigma,
        point_label(cx, inst.k, inst.g),
        u.terms.len()
    );
    Ok(IdentityReport::from_values("differential", instance, lhs, r * r))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::complex::LatticeComplex;
    use crate::geometry::Polytope;
    use crate::scalar::{FieldStream, Gf2_64};
    use crate::volume::generic_volume;

    #[test]
    fn segment_instances() {
        let p = Polytope::new("seg", vec![vec![0], vec![2]]).unwrap();
        let s = Space::relative(Arc::new(LatticeComplex::from_polytope(&p, true)));
        let even = differential_instances(&s, 0).unwrap();
        // F = (a, b) with a + b even.
        assert_eq!(even.len(), 5);
        let full = differential_instances(&s, 2).unwrap();
        assert_eq!(full.len(), 9);
        assert!(differential_instances(&s, 1).is_err());

        let (th, vf, _) = generic_volume::<Gf2_64>(&s, &FieldStream::new(2), None).unwrap();
        let one = s.complex.layer(1).find(&[1]).unwrap();
        let u = Element::monomial(1, one);
        for inst in &even {
            assert!(check_differential(&vf, &th, inst, &u).unwrap().pass);
        }
        for inst in full.iter().filter(|i| i.sigma_interior) {
            let r = check_differential(&vf, &th, inst, &Element::one(&s.complex)).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }
}
