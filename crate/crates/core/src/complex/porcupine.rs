use std::collections::BTreeMap;

use super::{ComplexError, LatticeComplex};
use crate::geometry::{Face, GeometryError, LatticePoint, Polytope};

/// Chains `G_i ⊂ G_{i+1} ⊂ … ⊂ P` with consecutive dimensions, listed top down.
fn chains_down_to(p: &Polytope, i: usize) -> Vec<Vec<Face>> {
    let mut out = Vec::new();
    let mut chain = vec![p.whole().clone()];
    fn walk(p: &Polytope, i: usize, chain: &mut Vec<Face>, out: &mut Vec<Vec<Face>>) {
        let top = chain.last().unwrap().clone();
        if top.dim == i {
            out.push(chain.clone());
            return;
        }
        for f in p.faces_of_dim(top.dim - 1).filter(|f| top.contains(f)) {
            chain.push(f.clone());
            walk(p, i, chain, out);
            chain.pop();
        }
    }
    walk(p, i, &mut chain, &mut out);
    out
}

/// The `k`-th generation porcupine over `P` and its boundary sphere.
///
/// Each face `G` of `P` that serves as a pyramid base gets its own apex, a
/// fresh unit coordinate, so every cell is an iterated pyramid over a face
/// of `P` with unimodular apexes.
pub fn porcupine(p: &Polytope, k: usize) -> Result<(LatticeComplex, LatticeComplex), ComplexError> {
    let d = p.dim();
    if d > 2 {
        return Err(GeometryError::Scale(format!("porcupine limited to dimension <= 2, got {d}")).into());
    }
    if k == 0 || k > d + 1 {
        return Err(GeometryError::Scale(format!("generation {k} outside 1..={}", d + 1)).into());
    }
    let faces = p.faces().to_vec();
    let base_dim = p.ambient_dim();
    let ambient = base_dim + faces.len();
    let mut coords: Vec<LatticePoint> = p
        .vertices()
        .iter()
        .map(|v| {
            let mut c = v.clone();
            c.resize(ambient, 0);
            c
        })
        .collect();
    let mut ids: Vec<String> = (0..coords.len()).map(|i| format!("v{i}")).collect();
    let nv = coords.len();
    for (fi, f) in faces.iter().enumerate() {
        let mut c = vec![0; ambient];
        c[base_dim + fi] = 1;
        coords.push(c);
        ids.push(format!("a{}:{:?}", d - f.dim, f.vertices));
    }
    let apex_of = |f: &Face| nv + faces.iter().position(|g| g == f).unwrap();

    let lowest = (d + 1).saturating_sub(k);
    let mut cells = Vec::new();
    for i in (lowest..=d).rev() {
        for chain in chains_down_to(p, i) {
            let base = chain.last().unwrap();
            let mut v: Vec<usize> = base.vertices.clone();
            v.extend(chain.iter().map(apex_of));
            cells.push(v);
        }
    }

    let ball_open = LatticeComplex::new(&format!("porc{k}({})", p.name()), ids.clone(), coords.clone(), cells, vec![])?;
    let n = ball_open.dim();
    let mut ridges: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for c in ball_open.cells() {
        for f in c.polytope.faces_of_dim(n - 1) {
            let mut fid: Vec<usize> = f
                .vertices
                .iter()
                .map(|&vi| {
                    let v = &c.polytope.vertices()[vi];
                    c.ids.iter().copied().find(|&g| coords[g] == *v).unwrap()
                })
                .collect();
            fid.sort_unstable();
            *ridges.entry(fid).or_default() += 1;
        }
    }
    let free: Vec<Vec<usize>> = ridges.into_iter().filter(|(_, c)| *c == 1).map(|(r, _)| r).collect();
    let cells: Vec<Vec<usize>> = ball_open.cells().iter().map(|c| c.ids.clone()).collect();
    let ball = LatticeComplex::new(ball_open.name(), ids.clone(), coords.clone(), cells, free.clone())?;
    let sphere = LatticeComplex::new(&format!("∂{}", ball_open.name()), ids, coords, free, vec![])?;
    Ok((ball, sphere))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::ComplexKind;

    fn poly(v: &[&[i64]]) -> Polytope {
        Polytope::new("t", v.iter().map(|x| x.to_vec()).collect()).unwrap()
    }

    #[test]
    fn first_generation_is_pyramid() {
        let seg = poly(&[&[0], &[2]]);
        let (ball, sphere) = porcupine(&seg, 1).unwrap();
        assert_eq!(ball.cells().len(), 1);
        // boundary of a triangle: base plus two sides
        assert_eq!(sphere.cells().len(), 3);
        assert_eq!(sphere.validate().kind, ComplexKind::Sphere);
        assert!(sphere.cells().iter().any(|c| c.polytope.lattice_points(1).len() == 3));
    }

    #[test]
    fn second_generation_triangle() {
        let t = poly(&[&[0, 0], &[2, 0], &[0, 2]]);
        let (ball, sphere) = porcupine(&t, 2).unwrap();
        assert_eq!(ball.cells().len(), 4);
        let r = ball.validate();
        assert!(r.is_valid(), "{r:?}");
        assert_eq!(r.kind, ComplexKind::Ball);
        let s = sphere.validate();
        assert!(s.is_valid(), "{s:?}");
        assert_eq!(s.kind, ComplexKind::Sphere);
        // unimodular triangles {v, α0, α1_e} for each vertex-edge flag
        let unimodular = sphere
            .cells()
            .iter()
            .filter(|c| c.polytope.vertices().len() == 3 && c.polytope.lattice_points(1).len() == 3)
            .filter(|c| c.polytope.lattice_points(2).len() == 6)
            .count();
        assert!(unimodular >= 6);
        let (full, _) = porcupine(&t, 3).unwrap();
        assert_eq!(full.cells().len(), 1 + 3 + 6);
        assert!(full.validate().is_valid());
    }
}
