use lefschetz_core::corpus::fixture;
use lefschetz_core::ehrhart::{counts, ehrhart_polynomial, evaluate, hstar};
use lefschetz_core::geometry::{is_reflexive, Polytope};
use num_bigint::BigInt;
use num_rational::BigRational;

/// `a·x <= b` rows, written out by hand, plus a scan box for the unit dilate.
struct Halfspaces {
    rows: Vec<(Vec<i64>, i64)>,
    lo: Vec<i64>,
    hi: Vec<i64>,
}

impl Halfspaces {
    fn count(&self, i: i64, strict: bool) -> u64 {
        let d = self.lo.len();
        let mut n = 0;
        let mut x: Vec<i64> = self.lo.iter().map(|l| l * i).collect();
        loop {
            let inside = self.rows.iter().all(|(a, b)| {
                let lhs: i64 = a.iter().zip(&x).map(|(p, q)| p * q).sum();
                if strict { lhs < b * i } else { lhs <= b * i }
            });
            n += u64::from(inside);
            let mut k = 0;
            loop {
                if k == d {
                    return n;
                }
                x[k] += 1;
                if x[k] <= self.hi[k] * i {
                    break;
                }
                x[k] = self.lo[k] * i;
                k += 1;
            }
        }
    }
}

fn cube(d: usize, lo: i64, hi: i64) -> Halfspaces {
    let mut rows = Vec::new();
    for k in 0..d {
        let mut e = vec![0; d];
        e[k] = 1;
        rows.push((e.clone(), hi));
        rows.push((e.iter().map(|x| -x).collect(), -lo));
    }
    Halfspaces { rows, lo: vec![lo; d], hi: vec![hi; d] }
}

fn simplex(d: usize, scale: i64) -> Halfspaces {
    let mut rows: Vec<(Vec<i64>, i64)> = (0..d)
        .map(|k| {
            let mut e = vec![0; d];
            e[k] = -1;
            (e, 0)
        })
        .collect();
    rows.push((vec![1; d], scale));
    Halfspaces { rows, lo: vec![0; d], hi: vec![scale; d] }
}

/// conv{0, e1, e2, (1,1,r)}: facets z >= 0, z <= r·x, z <= r·y, r·x + r·y - z <= r.
fn reeve(r: i64) -> Halfspaces {
    Halfspaces {
        rows: vec![
            (vec![0, 0, -1], 0),
            (vec![-r, 0, 1], 0),
            (vec![0, -r, 1], 0),
            (vec![r, r, -1], r),
        ],
        lo: vec![0, 0, 0],
        hi: vec![1, 1, r],
    }
}

fn oracle(name: &str) -> Halfspaces {
    match name {
        "segment" => cube(1, 0, 2),
        "simplex-1" => simplex(1, 1),
        "simplex-2" => simplex(2, 1),
        "simplex-3" => simplex(3, 1),
        "unit-square" => cube(2, 0, 1),
        "unit-cube" => cube(3, 0, 1),
        "reflexive-square" => cube(2, -1, 1),
        "reflexive-cube" => cube(3, -1, 1),
        "triangle-2" | "coarsen-triangle" => simplex(2, 2),
        "reeve-2" => reeve(2),
        "reeve-3" => reeve(3),
        _ => unreachable!(),
    }
}

const NAMES: &[&str] = &[
    "segment",
    "simplex-1",
    "simplex-2",
    "simplex-3",
    "unit-square",
    "unit-cube",
    "reflexive-square",
    "reflexive-cube",
    "triangle-2",
    "coarsen-triangle",
    "reeve-2",
    "reeve-3",
];

fn poly(name: &str) -> Polytope {
    fixture(name).unwrap().polytope().unwrap().clone()
}

fn binomial(n: i64, k: i64) -> i64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn counts_match_halfspace_scan() {
    for name in NAMES {
        let p = poly(name);
        let h = oracle(name);
        let got = counts(&p, p.dim() as u32 + 3).unwrap();
        let want: Vec<u64> = (0..=p.dim() as i64 + 3).map(|i| h.count(i, false)).collect();
        assert_eq!(got, want, "{name}");
    }
}

#[test]
fn hstar_matches_transform_of_oracle_counts() {
    for name in NAMES {
        let p = poly(name);
        let d = p.dim() as i64;
        let e: Vec<i64> = (0..=d).map(|i| oracle(name).count(i, false) as i64).collect();
        let want: Vec<u64> = (0..=d)
            .map(|k| (0..=k).map(|i| (-1i64).pow(i as u32) * binomial(d + 1, i) * e[(k - i) as usize]).sum::<i64>() as u64)
            .collect();
        assert_eq!(hstar(&p).unwrap().coeffs, want, "{name}");
    }
}

#[test]
fn hand_values() {
    let table: &[(&str, &[u64])] = &[
        ("segment", &[1, 1]),
        ("unit-square", &[1, 1, 0]),
        ("reflexive-square", &[1, 6, 1]),
        ("reflexive-cube", &[1, 23, 23, 1]),
        ("reeve-2", &[1, 0, 1, 0]),
        ("simplex-1", &[1, 0]),
        ("simplex-2", &[1, 0, 0]),
        ("simplex-3", &[1, 0, 0, 0]),
    ];
    for (name, h) in table {
        assert_eq!(hstar(&poly(name)).unwrap().coeffs, h.to_vec(), "{name}");
    }
}

#[test]
fn interior_and_volume_invariants() {
    // Normalized volumes d!·vol, computed by hand.
    let volumes: &[(&str, u64)] = &[
        ("segment", 2),
        ("simplex-3", 1),
        ("unit-square", 2),
        ("unit-cube", 6),
        ("reflexive-square", 8),
        ("reflexive-cube", 48),
        ("triangle-2", 4),
        ("reeve-2", 2),
        ("reeve-3", 3),
    ];
    for (name, vol) in volumes {
        let p = poly(name);
        let h = hstar(&p).unwrap();
        assert_eq!(h.coeffs[0], 1);
        assert_eq!(h.coeffs.iter().sum::<u64>(), *vol, "{name}");
        let interior = oracle(name).count(1, true);
        assert_eq!(h.coeffs[p.dim()], interior, "{name}");
    }
}

#[test]
fn reflexive_iff_palindromic_on_corpus() {
    for name in NAMES {
        let p = poly(name);
        let h = hstar(&p).unwrap().coeffs;
        let palindromic = h.iter().eq(h.iter().rev());
        assert_eq!(is_reflexive(&p).unwrap().is_some(), palindromic, "{name}");
    }
}

#[test]
fn polynomial_closed_forms() {
    let int = |n: i64| BigRational::from_integer(BigInt::from(n));
    let seg = ehrhart_polynomial(&poly("segment")).unwrap();
    assert_eq!(seg, vec![int(1), int(2)]);
    let cube = ehrhart_polynomial(&poly("reflexive-cube")).unwrap();
    for i in 0..8u32 {
        assert_eq!(evaluate(&cube, i), int((2 * i as i64 + 1).pow(3)));
    }
    // (i+1)(i+2)(i+3)/6 for the standard 3-simplex.
    let s3 = ehrhart_polynomial(&poly("simplex-3")).unwrap();
    for i in 0..8i64 {
        assert_eq!(evaluate(&s3, i as u32), int((i + 1) * (i + 2) * (i + 3) / 6));
    }
}
