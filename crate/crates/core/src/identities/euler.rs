use serde::Serialize;

use super::{check_budget, point_label, row_compositions, tuples, IdentityError, IdentityReport};
use crate::algebra::{AlgebraError, Theta};
use crate::complex::Space;
use crate::scalar::FiniteField;
use crate::volume::{solve_volume, CellFlag};

/// How `∂_z` is read for a monomial `z = θ^β`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EulerMode {
    /// Ordinary mixed partials `∂^β`, sign `(-1)^{rows}`.
    Literal,
    /// Divided derivatives `∂^β / β!`, sign `(-1)^{rows·(p-1)}`.
    Hasse,
}

/// `f = ± Σ_z z ∂_z f` for every top-degree volume value `f`, where `z` runs
/// over the monomials in `θ` of degree `p − 1` in each row.
pub fn check_euler<F: FiniteField>(
    space: &Space,
    theta: &Theta<F>,
    flag: Option<&CellFlag>,
    mode: EulerMode,
) -> Result<Vec<IdentityReport>, IdentityError> {
    let p = F::CHARACTERISTIC as u32;
    let (rows, cols) = (theta.rows(), theta.cols());
    let per_row = row_compositions(cols, p - 1);
    check_budget((per_row.len() as u64).saturating_pow(rows as u32))?;
    let vars: Vec<(usize, usize)> = (0..rows).flat_map(|i| (0..cols).map(move |j| (i, j))).collect();
    let caps = vec![p - 1; vars.len()];
    let jt = theta.jet_lifted(&vars, &caps).map_err(AlgebraError::from)?;
    let jvf = solve_volume(space, &jt, flag)?;

    let sign_exp = match mode {
        EulerMode::Literal => rows as u32,
        EulerMode::Hasse => rows as u32 * (p - 1),
    };
    let sign = if sign_exp % 2 == 0 { F::one() } else { -F::one() };
    let cx = &space.complex;
    let mut out = Vec::with_capacity(jvf.monomials.len());
    for (&m, f) in jvf.monomials.iter().zip(&jvf.values) {
        let mut rhs = F::zero();
        for choice in tuples(per_row.len(), rows) {
            let mut z = F::one();
            let mut exps = Vec::new();
            for (i, &c) in choice.iter().enumerate() {
                for (j, &e) in per_row[c].iter().enumerate() {
                    if e > 0 {
                        z = z * theta.entry(i, j).pow(e as u128);
                        exps.push(((i, j), e));
                    }
                }
            }
            let d = match (f.shape(), mode) {
                (None, _) => F::zero(),
                (Some(_), EulerMode::Literal) => f.partial(&exps)?,
                (Some(_), EulerMode::Hasse) => f.coefficient(&exps)?,
            };
            rhs = rhs + z * d;
        }
        let instance = format!(
            "{} p={p} mode={mode:?} monomial={}",
            space.describe(),
            point_label(cx, jvf.degree(), m)
        );
        out.push(IdentityReport::from_values("euler", instance, f.constant_term(), sign * rhs));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::complex::LatticeComplex;
    use crate::geometry::Polytope;
    use crate::scalar::{FieldStream, Gf2_64, Gf3_32};

    fn seg() -> Space {
        let p = Polytope::new("seg", vec![vec![0], vec![2]]).unwrap();
        Space::relative(Arc::new(LatticeComplex::from_polytope(&p, true)))
    }

    #[test]
    fn characteristic_two_both_readings() {
        let s = seg();
        let th = Theta::<Gf2_64>::generic(&s.complex, &mut FieldStream::new(1));
        for mode in [EulerMode::Literal, EulerMode::Hasse] {
            let reports = check_euler(&s, &th, None, mode).unwrap();
            assert_eq!(reports.len(), 3);
            assert!(reports.iter().all(|r| r.pass));
        }
    }

    #[test]
    fn characteristic_three_divided_derivatives() {
        let s = seg();
        let th = Theta::<Gf3_32>::generic(&s.complex, &mut FieldStream::new(2));
        let reports = check_euler(&s, &th, None, EulerMode::Hasse).unwrap();
        assert!(reports.iter().all(|r| r.pass), "{reports:?}");
    }
}
