use std::sync::Arc;

use lefschetz_core::complex::{LatticeComplex, Space};
use lefschetz_core::ehrhart::{counts, cross_validate, ehrhart_polynomial, evaluate, hstar};
use lefschetz_core::geometry::Polytope;
use lefschetz_core::identities::{check_balancing, check_parseval_char2};
use lefschetz_core::scalar::{linear_solve, FieldStream, FiniteField, Scalar, Gf2_128, Gf2_64, Gf3_32, Gf5_32, Matrix, SolveOutcome};
use lefschetz_core::suite::{load_fixtures, run_verify, Identity, RunConfig};
use lefschetz_core::volume::generic_volume;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

#[allow(clippy::eq_op)]
fn field_laws<F: FiniteField>(seed: u64) {
    let mut s = FieldStream::new(seed);
    let (a, b, c): (F, F, F) = (s.sample(), s.sample(), s.sample());
    assert_eq!((a + b) * c, a * c + b * c);
    assert_eq!(a * (b * c), (a * b) * c);
    assert_eq!(a - a, F::zero());
    assert_eq!((a + b).frobenius(), a.frobenius() + b.frobenius());
    if !a.is_zero() {
        assert_eq!(a * a.inverse().unwrap(), F::one());
    }
    assert_eq!(F::from_int(F::CHARACTERISTIC as i64), F::zero());
}

/// Convex hull by monotone chain, counter-clockwise, collinear points dropped.
fn hull(mut pts: Vec<[i64; 2]>) -> Vec<[i64; 2]> {
    pts.sort();
    pts.dedup();
    let cross = |o: [i64; 2], a: [i64; 2], b: [i64; 2]| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let mut lower: Vec<[i64; 2]> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<[i64; 2]> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Twice the area and the number of interior lattice points (Pick).
fn pick(h: &[[i64; 2]]) -> (i64, i64) {
    let n = h.len();
    let twice_area: i64 = (0..n).map(|i| h[i][0] * h[(i + 1) % n][1] - h[(i + 1) % n][0] * h[i][1]).sum();
    let boundary: i64 = (0..n)
        .map(|i| num_integer::gcd((h[(i + 1) % n][0] - h[i][0]).abs(), (h[(i + 1) % n][1] - h[i][1]).abs()))
        .sum();
    (twice_area, (twice_area - boundary + 2) / 2)
}

fn polygon() -> impl Strategy<Value = Vec<[i64; 2]>> {
    prop::collection::vec([-2i64..=2, -2i64..=2], 3..7).prop_filter("full dimensional", |pts| hull(pts.clone()).len() >= 3)
}

fn build(pts: &[[i64; 2]]) -> Polytope {
    Polytope::new("random", pts.iter().map(|p| p.to_vec()).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fields_obey_ring_laws(seed in any::<u64>()) {
        field_laws::<Gf2_64>(seed);
        field_laws::<Gf2_128>(seed);
        field_laws::<Gf3_32>(seed);
        field_laws::<Gf5_32>(seed);
    }

    #[test]
    fn solver_inverts_random_systems(seed in any::<u64>(), n in 1usize..7) {
        let mut s = FieldStream::new(seed);
        let m = Matrix::<Gf2_64>::from_fn(n, n, |_, _| s.sample());
        let x: Vec<Gf2_64> = s.sample_vec(n);
        let rhs = m.mul_vec(&x);
        match linear_solve(&m, &rhs, false) {
            Ok(SolveOutcome::Unique(y)) => prop_assert_eq!(y, x),
            Ok(SolveOutcome::Underdetermined { particular, .. }) => prop_assert_eq!(m.mul_vec(&particular), rhs),
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn polygon_hstar_invariants(pts in polygon()) {
        let p = build(&pts);
        let h = hstar(&p).unwrap().coeffs;
        let (twice_area, interior) = pick(&hull(pts));
        prop_assert_eq!(h[0], 1);
        prop_assert_eq!(h.iter().sum::<u64>() as i64, twice_area);
        prop_assert_eq!(h[2] as i64, interior);
        let e = counts(&p, 5).unwrap();
        let poly = ehrhart_polynomial(&p).unwrap();
        for (i, c) in e.iter().enumerate() {
            prop_assert_eq!(evaluate(&poly, i as u32), BigRational::from_integer(BigInt::from(*c)));
        }
    }

    #[test]
    fn polygon_algebra_matches_hstar(pts in polygon(), seed in any::<u64>()) {
        let cv = cross_validate::<Gf2_64>(&build(&pts), &mut FieldStream::new(seed)).unwrap();
        prop_assert!(cv.pass, "{:?}", cv);
    }

    #[test]
    fn polygon_volume_identities(pts in polygon(), seed in 0u64..1000) {
        let p = build(&pts);
        let space = Space::relative(Arc::new(LatticeComplex::from_polytope(&p, true)));
        let (theta, vf, _) = generic_volume::<Gf2_64>(&space, &FieldStream::new(seed), None).unwrap();
        prop_assert_eq!(vf.normalization_sum(&theta, &vf.flag).unwrap(), Gf2_64::one());
        prop_assert!(check_balancing(&vf, &theta).unwrap().pass);
        for &a in vf.monomials.iter().take(4) {
            let r = check_parseval_char2(&vf, &theta, a).unwrap();
            prop_assert!(r.pass, "{:?}", r);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn reports_are_reproducible(seed in any::<u64>()) {
        let inputs = load_fixtures(&["segment", "triangle-2"]).unwrap();
        let cfg = RunConfig { seed, trials: 2, ..RunConfig::default() };
        let a = run_verify(Identity::Balancing, &inputs, &cfg).unwrap().to_json();
        let b = run_verify(Identity::Balancing, &inputs, &cfg).unwrap().to_json();
        prop_assert_eq!(a, b);
    }
}
