//! The jet-based left side of the differential identity on [0,2], checked
//! against Cramer's rule over polynomials in the two differentiated entries.

mod common;

use std::sync::Arc;

use common::{cramer_disagreements, Oracle, F};
use lefschetz_core::algebra::Theta;
use lefschetz_core::complex::{LatticeComplex, Space};
use lefschetz_core::geometry::Polytope;
use lefschetz_core::scalar::{FieldStream, Scalar};

#[test]
fn jet_left_side_matches_cramer() {
    let bad = cramer_disagreements(0..20);
    assert!(bad.is_empty(), "{bad:#?}");
}

#[test]
fn oracle_self_check() {
    // The jet-free part: the oracle's solution satisfies its own balancing rows.
    let seg = Polytope::new("segment", vec![vec![0], vec![2]]).unwrap();
    let space = Space::relative(Arc::new(LatticeComplex::from_polytope(&seg, true)));
    let l1 = space.complex.layer(1);
    let col = [0i64, 1, 2].map(|p| l1.find(&[p]).unwrap());
    let theta = Theta::<F>::generic(&space.complex, &mut FieldStream::new(5));
    let o = Oracle::new(&theta, &col, 0, 0);
    for i in 0..2 {
        let sum = (0..3).fold(F::zero(), |acc, p| acc + *theta.entry(i, col[p]) * o.value(p as i64 + 1));
        assert!(sum.is_zero());
    }
}
