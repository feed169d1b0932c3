//! Cramer's rule over polynomials in two differentiated entries of Θ on [0,2].

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::ops::Range;
use std::sync::Arc;

use lefschetz_core::algebra::{Element, Theta};
use lefschetz_core::complex::{LatticeComplex, Space};
use lefschetz_core::geometry::Polytope;
use lefschetz_core::identities::{check_differential, differential_instances};
use lefschetz_core::scalar::{FieldStream, FiniteField, Gf2_64, Scalar};
use lefschetz_core::volume::generic_volume;

pub type F = Gf2_64;

/// Polynomial in `s, t` (shifts of the two differentiated entries).
#[derive(Clone, Debug, Default, PartialEq)]
struct Poly(BTreeMap<(u32, u32), F>);

impl Poly {
    fn constant(c: F) -> Poly {
        Poly::term(c, 0, 0)
    }

    fn term(c: F, i: u32, j: u32) -> Poly {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert((i, j), c);
        }
        Poly(m)
    }

    fn coeff(&self, i: u32, j: u32) -> F {
        self.0.get(&(i, j)).copied().unwrap_or_else(F::zero)
    }

    fn add(&self, o: &Poly) -> Poly {
        let mut m = self.0.clone();
        for (k, v) in &o.0 {
            let e = m.entry(*k).or_insert_with(F::zero);
            *e = *e + *v;
        }
        m.retain(|_, v| !v.is_zero());
        Poly(m)
    }

    fn mul(&self, o: &Poly) -> Poly {
        let mut out = Poly::default();
        for (&(a, b), x) in &self.0 {
            for (&(c, d), y) in &o.0 {
                out = out.add(&Poly::term(*x * *y, a + c, b + d));
            }
        }
        out
    }
}

fn det3(m: &[[Poly; 3]; 3]) -> Poly {
    // Characteristic 2: every sign is +1.
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    perms.iter().fold(Poly::default(), |acc, p| acc.add(&m[0][p[0]].mul(&m[1][p[1]]).mul(&m[2][p[2]])))
}

/// Coefficient of `s·t` in the expansion of `n / d` at the origin.
fn st_coefficient(n: &Poly, d: &Poly) -> F {
    let inv = d.coeff(0, 0).inverse().expect("base point is not a pole");
    let c00 = n.coeff(0, 0) * inv;
    let c10 = (n.coeff(1, 0) - c00 * d.coeff(1, 0)) * inv;
    let c01 = (n.coeff(0, 1) - c00 * d.coeff(0, 1)) * inv;
    (n.coeff(1, 1) - c00 * d.coeff(1, 1) - c10 * d.coeff(0, 1) - c01 * d.coeff(1, 0)) * inv
}

pub struct Oracle {
    /// `(numerator, denominator)` of `vol` at interior points 1, 2, 3 of `[0,4]`.
    vol: Vec<(Poly, Poly)>,
}

impl Oracle {
    /// `Θ` with `θ_{0,a} = base + s` and `θ_{1,b} = base + t`. The system is the
    /// two balancing rows anchored at the interior point 1 and the normalization
    /// over the flag starting at the vertex 2 (the solver uses vertex 0).
    pub fn new(theta: &Theta<F>, col: &[usize; 3], a: usize, b: usize) -> Oracle {
        let entry = |i: usize, p: usize| -> Poly {
            let base = Poly::constant(*theta.entry(i, col[p]));
            match (i, p) {
                (0, p) if p == a => base.add(&Poly::term(F::one(), 1, 0)),
                (1, p) if p == b => base.add(&Poly::term(F::one(), 0, 1)),
                _ => base,
            }
        };
        let bracket = |p: usize, q: usize| entry(0, p).mul(&entry(1, q)).add(&entry(0, q).mul(&entry(1, p)));
        let m = [
            [entry(0, 0), entry(0, 1), entry(0, 2)],
            [entry(1, 0), entry(1, 1), entry(1, 2)],
            [Poly::default(), bracket(2, 0), bracket(2, 1)],
        ];
        let d = det3(&m);
        let vol = (0..3)
            .map(|c| {
                let mut mc = m.clone();
                for (r, row) in mc.iter_mut().enumerate() {
                    row[c] = Poly::constant(if r == 2 { F::one() } else { F::zero() });
                }
                (det3(&mc), d.clone())
            })
            .collect();
        Oracle { vol }
    }

    /// `∂_s ∂_t` of `vol(x_q)` at height 2.
    pub fn mixed(&self, q: i64) -> F {
        match q {
            1..=3 => {
                let (n, d) = &self.vol[(q - 1) as usize];
                st_coefficient(n, d)
            }
            _ => F::zero(),
        }
    }

    pub fn value(&self, q: i64) -> F {
        match q {
            1..=3 => {
                let (n, d) = &self.vol[(q - 1) as usize];
                n.coeff(0, 0) * d.coeff(0, 0).inverse().unwrap()
            }
            _ => F::zero(),
        }
    }
}

/// Every admissible differential instance on [0,2] at the given seeds; one
/// message per disagreement between the jet solver and the oracle.
pub fn cramer_disagreements(seeds: Range<u64>) -> Vec<String> {
    let seg = Polytope::new("segment", vec![vec![0], vec![2]]).unwrap();
    let space = Space::relative(Arc::new(LatticeComplex::from_polytope(&seg, true)));
    let l1 = space.complex.layer(1);
    let col = [0i64, 1, 2].map(|p| l1.find(&[p]).unwrap());
    let coord = |c: usize| l1.points[c][0];
    let even = differential_instances(&space, 0).unwrap();
    let full = differential_instances(&space, 2).unwrap();
    assert_eq!((even.len(), full.len()), (5, 9));

    let mut bad = Vec::new();
    for seed in seeds {
        let (theta, vf, _) = generic_volume::<F>(&space, &FieldStream::new(seed), None).unwrap();
        let mut s = FieldStream::new(1000 + seed);
        let c: F = s.sample_nonzero();
        for inst in even.iter().chain(full.iter().filter(|i| i.sigma_interior)) {
            let (a, b) = (coord(inst.f[0]) as usize, coord(inst.f[1]) as usize);
            let oracle = Oracle::new(&theta, &col, a, b);
            for q in 1..=3 {
                if oracle.value(q) != vf.value_at(&[q]) {
                    bad.push(format!("seed {seed}: solver and oracle disagree at {q}"));
                }
            }
            let (u, lhs) = if inst.k == 1 {
                // u = c·x_1, u² = c²·x_2.
                (Element::monomial(1, col[1]).scale(&c), c * c * oracle.mixed(2))
            } else {
                (Element::one(&space.complex).scale(&c), c * c * oracle.mixed((a + b) as i64))
            };
            let report = check_differential(&vf, &theta, inst, &u).unwrap();
            if report.left != lhs.to_hex() || !report.pass {
                bad.push(format!("seed {seed} F=({a},{b}) sigma={:?}: {report:?}", inst.sigma));
            }
        }
    }
    bad
}
