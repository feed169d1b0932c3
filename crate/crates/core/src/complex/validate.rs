use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::Serialize;

use super::{Cell, LatticeComplex};
use crate::geometry::LatticePoint;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ComplexKind {
    Sphere,
    Ball,
    /// Some ridge lies in more than two cells, or cells differ in dimension.
    Irregular,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub kind: ComplexKind,
    pub violations: Vec<String>,
    /// For balls: the boundary subcomplex is exactly the down-closure of the
    /// ridges lying in a single cell.
    pub boundary_matches_topology: bool,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty() && self.kind != ComplexKind::Irregular
    }
}

/// Global ids of a cell's faces, keyed by the cell's vertex bitmask.
fn face_ids(x: &LatticeComplex, cell: &Cell, mask: u64) -> BTreeSet<usize> {
    let coords = x.point_coords();
    cell.polytope
        .vertices()
        .iter()
        .enumerate()
        .filter(|(k, _)| mask >> k & 1 == 1)
        .map(|(_, v)| cell.ids.iter().copied().find(|&i| coords[i] == *v).expect("vertex has an id"))
        .collect()
}

fn is_face(x: &LatticeComplex, cell: &Cell, ids: &BTreeSet<usize>) -> bool {
    cell.polytope.faces().iter().any(|f| face_ids(x, cell, f.mask) == *ids)
}

pub(super) fn validate(x: &LatticeComplex) -> ValidationReport {
    let mut violations = Vec::new();
    let coords = x.point_coords();

    let distinct: HashSet<&LatticePoint> = coords.iter().collect();
    if distinct.len() != coords.len() {
        violations.push("two point ids share coordinates".to_string());
    }

    for (ci, cell) in x.cells().iter().chain(x.boundary()).enumerate() {
        if cell.polytope.vertices().len() != cell.ids.len() {
            violations.push(format!("cell {ci} lists points that are not vertices"));
        }
    }

    let cells = x.cells();
    for a in 0..cells.len() {
        for b in a + 1..cells.len() {
            let (ca, cb) = (&cells[a], &cells[b]);
            let common: BTreeSet<usize> = ca.ids.iter().filter(|i| cb.ids.contains(i)).copied().collect();
            if !common.is_empty() && !(is_face(x, ca, &common) && is_face(x, cb, &common)) {
                violations.push(format!("cells {a} and {b} meet in {common:?}, which is not a common face"));
                continue;
            }
            'heights: for h in 1..=2 {
                for p in ca.polytope.lattice_points(h).iter() {
                    if !cb.polytope.contains(p, h) {
                        continue;
                    }
                    let in_a = face_ids(x, ca, ca.polytope.carrier(p, h));
                    let in_b = face_ids(x, cb, cb.polytope.carrier(p, h));
                    if !in_a.is_subset(&common) || !in_b.is_subset(&common) {
                        violations.push(format!(
                            "cells {a} and {b} share the point {p:?} at height {h} outside their common face"
                        ));
                        break 'heights;
                    }
                }
            }
        }
    }

    for (bi, b) in x.boundary().iter().enumerate() {
        let ids: BTreeSet<usize> = b.ids.iter().copied().collect();
        if !cells.iter().any(|c| ids.iter().all(|i| c.ids.contains(i)) && is_face(x, c, &ids)) {
            violations.push(format!("boundary cell {bi} is not a face of any cell"));
        }
    }

    let dims: BTreeSet<usize> = cells.iter().map(|c| c.polytope.dim()).collect();
    if dims.len() > 1 {
        violations.push(format!("cells have mixed dimensions {dims:?}"));
        return ValidationReport { kind: ComplexKind::Irregular, violations, boundary_matches_topology: false };
    }
    let n = x.dim();

    let mut ridges: BTreeMap<BTreeSet<usize>, Vec<usize>> = BTreeMap::new();
    for (ci, c) in cells.iter().enumerate() {
        if n == 0 {
            break;
        }
        for f in c.polytope.faces_of_dim(n - 1) {
            ridges.entry(face_ids(x, c, f.mask)).or_default().push(ci);
        }
    }
    let max_degree = ridges.values().map(Vec::len).max().unwrap_or(0);
    let kind = if max_degree > 2 {
        violations.push("a ridge lies in more than two cells".to_string());
        ComplexKind::Irregular
    } else if ridges.values().all(|v| v.len() == 2) {
        ComplexKind::Sphere
    } else {
        ComplexKind::Ball
    };

    // connectivity of the dual graph
    let mut seen = vec![false; cells.len()];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(c) = stack.pop() {
        for owners in ridges.values().filter(|o| o.contains(&c)) {
            for &o in owners {
                if !seen[o] {
                    seen[o] = true;
                    stack.push(o);
                }
            }
        }
    }
    if seen.iter().any(|s| !s) {
        violations.push("cells are not connected through ridges".to_string());
    }

    let free: BTreeSet<BTreeSet<usize>> =
        ridges.iter().filter(|(_, o)| o.len() == 1).map(|(k, _)| k.clone()).collect();
    let listed: BTreeSet<BTreeSet<usize>> = x.boundary().iter().map(|b| b.ids.iter().copied().collect()).collect();
    let boundary_matches_topology = free == listed;

    ValidationReport { kind, violations, boundary_matches_topology }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{pyramid, Polytope};

    fn poly(v: &[&[i64]]) -> Polytope {
        Polytope::new("t", v.iter().map(|x| x.to_vec()).collect()).unwrap()
    }

    #[test]
    fn square_boundary_is_sphere() {
        let sq = poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let r = LatticeComplex::boundary_complex(&sq).validate();
        assert!(r.is_valid(), "{r:?}");
        assert_eq!(r.kind, ComplexKind::Sphere);
        let r = LatticeComplex::boundary_complex(&pyramid(&sq)).validate();
        assert_eq!(r.kind, ComplexKind::Sphere);
    }

    #[test]
    fn pyramid_complex_is_ball() {
        let seg = poly(&[&[0], &[2]]);
        let x = LatticeComplex::from_polytope(&seg, true);
        let r = x.pyramid().validate();
        assert!(r.is_valid(), "{r:?}");
        assert_eq!(r.kind, ComplexKind::Ball);
        assert!(r.boundary_matches_topology);
        let open = LatticeComplex::from_polytope(&seg, false).pyramid().validate();
        assert!(open.is_valid());
        assert!(!open.boundary_matches_topology);
    }

    #[test]
    fn mismatched_edges_rejected() {
        let ids = (0..5).map(|i| i.to_string()).collect();
        let coords = vec![vec![0, 0], vec![2, 0], vec![0, 2], vec![1, 0], vec![0, -1]];
        let x = LatticeComplex::new("bad", ids, coords, vec![vec![0, 1, 2], vec![0, 3, 4]], vec![]).unwrap();
        let r = x.validate();
        assert!(!r.is_valid());
        assert!(r.violations.iter().any(|v| v.contains("outside their common face")), "{r:?}");
    }
}
