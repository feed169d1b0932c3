use std::collections::BTreeSet;

use super::{random_class, LefschetzError, TrialReport};
use crate::algebra::{Element, GradedPiece, Theta};
use crate::complex::Space;
use crate::geometry::{intlin, LatticePoint, Polytope};
use crate::identities::tuples as ordered_tuples;
use crate::scalar::{FieldStream, FiniteField};

/// Ordered `j`-tuples of lattice points of `P`, repetitions allowed, not all
/// contained in one facet.
pub fn interior_tuples(p: &Polytope, j: usize) -> Vec<Vec<LatticePoint>> {
    let pts = p.lattice_points(1);
    let on: Vec<u64> = pts
        .iter()
        .map(|x| {
            p.facets()
                .iter()
                .enumerate()
                .filter(|(_, f)| intlin::dot(&f.normal, x) == f.offset)
                .fold(0u64, |m, (i, _)| m | 1 << i)
        })
        .collect();
    ordered_tuples(pts.len(), j)
        .filter(|t| t.iter().fold(u64::MAX, |m, &i| m & on[i]) == 0)
        .map(|t| t.iter().map(|&i| pts[i].clone()).collect())
        .collect()
}

/// For random nonzero `u ∈ A^t(P)` some `σ ∈ I_j(P)` has `u·x_σ ≠ 0` in
/// `A^{t+j}(P,∂P)`.
pub fn check_partition_of_unity<F: FiniteField>(
    pair: &Space,
    theta: &Theta<F>,
    j: u32,
    t: u32,
    trials: usize,
    stream: &mut FieldStream,
) -> Result<TrialReport, LefschetzError> {
    let cx = &pair.complex;
    let [cell] = cx.cells() else {
        return Err(LefschetzError::Shape("partition of unity needs a single polytope".into()));
    };
    if j + t > pair.top_degree() {
        return Err(LefschetzError::Degree { k: t, max: pair.top_degree() - j });
    }
    let layer = cx.layer(j);
    let sums: BTreeSet<usize> = interior_tuples(&cell.polytope, j as usize)
        .iter()
        .map(|tup| {
            let s = tup.iter().fold(vec![0; cx.ambient_dim()], |a, x| intlin::add(&a, x));
            layer.find(&s).expect("sum of lattice points is a cone element")
        })
        .collect();
    let ring = Space::ring(cx.clone());
    let src = GradedPiece::new(&ring, theta, t)?;
    let dst = GradedPiece::new(pair, theta, t + j)?;
    let (mut skipped, mut failures) = (0, 0);
    for _ in 0..trials {
        let Some(u) = random_class(&src, stream) else {
            skipped += 1;
            continue;
        };
        let mut hit = false;
        for &s in &sums {
            if !dst.is_zero_class(&u.mul(&Element::monomial(j, s), cx))? {
                hit = true;
                break;
            }
        }
        failures += usize::from(!hit);
    }
    let instance = format!("{} j={j} t={t} sigma_sums={}", pair.describe(), sums.len());
    Ok(TrialReport::new("partition-of-unity", instance, trials, skipped, failures))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::complex::LatticeComplex;
    use crate::scalar::Gf2_64;

    #[test]
    fn tuples_of_squares() {
        let unit = Polytope::new("u", vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
        assert!(interior_tuples(&unit, 1).is_empty());
        let pairs = interior_tuples(&unit, 2);
        // Opposite corners in either order.
        assert_eq!(pairs.len(), 4);
        assert!(pairs.iter().all(|t| intlin::add(&t[0], &t[1]) == vec![1, 1]));
        let big = Polytope::new("b", vec![vec![-1, -1], vec![1, -1], vec![-1, 1], vec![1, 1]]).unwrap();
        assert_eq!(interior_tuples(&big, 1), vec![vec![vec![0, 0]]]);
    }

    #[test]
    fn unit_square_partition() {
        let unit = Polytope::new("u", vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
        let c = Arc::new(LatticeComplex::from_polytope(&unit, true));
        let mut s = FieldStream::new(4);
        let th = Theta::<Gf2_64>::generic(&c, &mut s);
        let r = check_partition_of_unity(&Space::relative(c), &th, 2, 1, 100, &mut s).unwrap();
        assert!(r.pass, "{r:?}");
    }
}
