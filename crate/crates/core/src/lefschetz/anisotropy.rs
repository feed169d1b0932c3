use super::{random_class, LefschetzError, TrialReport};
use crate::algebra::{Element, GradedPiece, Theta};
use crate::complex::Space;
use crate::scalar::{FieldStream, FiniteField};

/// For `trials` random nonzero `u ∈ A^k(X,∂X)`: `m·u² ≠ 0` (with `m = 1` when
/// absent). Trials with `m·u = 0` are skipped.
pub fn check_anisotropy<F: FiniteField>(
    pair: &Space,
    theta: &Theta<F>,
    k: u32,
    m: Option<&Element<F>>,
    trials: usize,
    stream: &mut FieldStream,
) -> Result<super::TrialReport, LefschetzError> {
    let cx = &pair.complex;
    let s = m.map_or(0, |m| m.height);
    if 2 * k + s > pair.top_degree() {
        return Err(LefschetzError::Degree { k, max: (pair.top_degree() - s) / 2 });
    }
    let src = GradedPiece::new(pair, theta, k)?;
    let mid = GradedPiece::new(pair, theta, k + s)?;
    let dst = GradedPiece::new(pair, theta, 2 * k + s)?;
    let (mut skipped, mut failures) = (0, 0);
    for _ in 0..trials {
        let Some(u) = random_class(&src, stream) else {
            skipped += 1;
            continue;
        };
        let mu = match m {
            Some(m) => m.mul(&u, cx),
            None => u.clone(),
        };
        if mid.is_zero_class(&mu)? {
            skipped += 1;
            continue;
        }
        if dst.is_zero_class(&mu.mul(&u, cx))? {
            failures += 1;
        }
    }
    let instance = format!("{} k={k} m_degree={s} dim={}", pair.describe(), src.dim());
    Ok(TrialReport::new("anisotropy", instance, trials, skipped, failures))
}

/// `m·u ≠ 0` implies `m·u²·ℓ^{d+1−s−2k} ≠ 0`, for one given `u`.
pub fn check_hall_laman_element<F: FiniteField>(
    pair: &Space,
    theta: &Theta<F>,
    m: &Element<F>,
    ell: &[F],
    u: &Element<F>,
) -> Result<TrialReport, LefschetzError> {
    let cx = &pair.complex;
    let (k, s, top) = (u.height, m.height, pair.top_degree());
    if 2 * k + s > top {
        return Err(LefschetzError::Degree { k, max: (top - s) / 2 });
    }
    let mu = m.mul(u, cx);
    let mid = GradedPiece::new(pair, theta, k + s)?;
    let instance = format!("{} k={k} s={s} power={}", pair.describe(), top - s - 2 * k);
    if mid.is_zero_class(&mu)? {
        return Ok(TrialReport::new("hall-laman", instance, 1, 1, 0));
    }
    let value = mu.mul(u, cx).mul(&super::linear_form_power(ell, top - s - 2 * k, cx), cx);
    let dst = GradedPiece::new(pair, theta, top)?;
    let failures = usize::from(dst.is_zero_class(&value)?);
    Ok(TrialReport::new("hall-laman", instance, 1, 0, failures))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::complex::LatticeComplex;
    use crate::geometry::Polytope;
    use crate::scalar::Gf2_64;

    #[test]
    fn reflexive_square() {
        let p = Polytope::new("sq", vec![vec![-1, -1], vec![1, -1], vec![-1, 1], vec![1, 1]]).unwrap();
        let c = Arc::new(LatticeComplex::from_polytope(&p, true));
        let pair = Space::relative(c.clone());
        let mut s = FieldStream::new(3);
        let th = Theta::<Gf2_64>::generic(&c, &mut s);
        let r = check_anisotropy(&pair, &th, 1, None, 50, &mut s).unwrap();
        assert!(r.pass && r.skipped == 0, "{r:?}");
        let origin = Element::monomial(1, c.layer(1).find(&[0, 0]).unwrap());
        let r = check_anisotropy(&pair, &th, 1, Some(&origin), 20, &mut s).unwrap();
        assert!(r.pass, "{r:?}");

        let ell: Vec<Gf2_64> = s.sample_vec(9);
        let one = Element::one(&c);
        let r = check_hall_laman_element(&pair, &th, &origin, &ell, &one).unwrap();
        assert_eq!((r.skipped, r.failures), (0, 0));
    }
}
