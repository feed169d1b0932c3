use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use itertools::Itertools;

use super::intlin::{self, dot, gcd_all, integer_kernel, pivot_columns, RationalSolver};
use super::{ConeElement, GeometryError, LatticePoint};

const COORD_BOUND: i64 = 1_000_000;

/// Inequality `normal · x <= offset` on `P`, so `normal · x <= h·offset` on `h·P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    pub normal: Vec<i64>,
    pub offset: i64,
    /// Vertices of `P` on the facet, as a bitmask over [`Polytope::vertices`].
    pub mask: u64,
}

/// A nonempty face, identified by its vertex set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Face {
    pub dim: usize,
    pub vertices: Vec<usize>,
    pub mask: u64,
}

impl Face {
    fn from_mask(mask: u64, dim: usize) -> Face {
        let vertices = (0..64).filter(|i| mask >> i & 1 == 1).collect();
        Face { dim, vertices, mask }
    }

    pub fn contains(&self, other: &Face) -> bool {
        other.mask & !self.mask == 0
    }
}

/// Full flag `τ_0 ⊂ τ_1 ⊂ … ⊂ τ_n = P`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flag {
    pub faces: Vec<Face>,
}

#[derive(Debug)]
pub struct Polytope {
    name: String,
    ambient: usize,
    dim: usize,
    vertices: Vec<LatticePoint>,
    /// Affine hull: `eq · x = h·rhs` at height `h`.
    hull_eqs: Vec<Vec<i64>>,
    hull_rhs: Vec<i64>,
    facets: Vec<Facet>,
    faces: Vec<Face>,
    free: Vec<usize>,
    bound: Vec<usize>,
    solver: Option<RationalSolver>,
    cache: Mutex<HashMap<(u32, bool), Arc<Vec<LatticePoint>>>>,
}

impl Clone for Polytope {
    fn clone(&self) -> Self {
        Polytope::new(&self.name, self.vertices.clone()).expect("rebuilding a valid polytope")
    }
}

impl PartialEq for Polytope {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.vertices == other.vertices
    }
}

fn affine_basis(points: &[LatticePoint]) -> Vec<Vec<i64>> {
    let mut basis: Vec<Vec<i64>> = Vec::new();
    let ambient = points[0].len();
    for p in &points[1..] {
        let d = intlin::sub(p, &points[0]);
        basis.push(d);
        if intlin::rank(&basis, ambient) < basis.len() {
            basis.pop();
        }
    }
    basis
}

impl Polytope {
    /// Convex hull of `points`; non-vertices are dropped.
    pub fn new(name: &str, points: Vec<LatticePoint>) -> Result<Polytope, GeometryError> {
        let pts: Vec<LatticePoint> = points.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let Some(first) = pts.first() else { return Err(GeometryError::Empty) };
        let ambient = first.len();
        if pts.iter().any(|p| p.len() != ambient) {
            return Err(GeometryError::Ragged);
        }
        if pts.len() > 64 {
            return Err(GeometryError::TooManyPoints(pts.len()));
        }
        if let Some(&c) = pts.iter().flatten().find(|c| c.abs() > COORD_BOUND) {
            return Err(GeometryError::CoordinateBound(c));
        }

        let basis = affine_basis(&pts);
        let dim = basis.len();
        let hull_eqs = if dim == 0 {
            (0..ambient).map(|i| (0..ambient).map(|j| i64::from(i == j)).collect()).collect()
        } else {
            integer_kernel(&basis, ambient)
        };
        let hull_rhs = hull_eqs.iter().map(|e| dot(e, first)).collect();

        let raw = raw_facets(&pts, &basis);
        // a point is a vertex iff the facets through it meet only in it
        let all = if pts.len() == 64 { u64::MAX } else { (1u64 << pts.len()) - 1 };
        let vertex_idx: Vec<usize> = (0..pts.len())
            .filter(|&i| {
                let meet = raw.iter().filter(|f| f.mask >> i & 1 == 1).fold(all, |m, f| m & f.mask);
                meet == 1u64 << i
            })
            .collect();
        let vertices: Vec<LatticePoint> = vertex_idx.iter().map(|&i| pts[i].clone()).collect();
        let facets: Vec<Facet> = raw
            .into_iter()
            .map(|f| {
                let mask = vertex_idx
                    .iter()
                    .enumerate()
                    .filter(|(_, &i)| f.mask >> i & 1 == 1)
                    .fold(0u64, |m, (j, _)| m | 1 << j);
                Facet { mask, ..f }
            })
            .collect();

        let faces = face_lattice(&vertices, &facets);
        let bound = pivot_columns(&hull_eqs, ambient);
        let free: Vec<usize> = (0..ambient).filter(|c| !bound.contains(c)).collect();
        let solver = if bound.is_empty() {
            None
        } else {
            let square: Vec<Vec<i64>> = hull_eqs.iter().map(|e| bound.iter().map(|&c| e[c]).collect()).collect();
            Some(RationalSolver::new(&square).expect("pivot columns give an invertible block"))
        };

        Ok(Polytope {
            name: name.to_string(),
            ambient,
            dim,
            vertices,
            hull_eqs,
            hull_rhs,
            facets,
            faces,
            free,
            bound,
            solver,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim == self.ambient
    }

    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// All nonempty faces including `P`, sorted by dimension then vertex set.
    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn whole(&self) -> &Face {
        self.faces.last().expect("P is a face of itself")
    }

    pub fn faces_of_dim(&self, k: usize) -> impl Iterator<Item = &Face> {
        self.faces.iter().filter(move |f| f.dim == k)
    }

    /// Is `x` in `h·P`?
    pub fn contains(&self, x: &[i64], h: u32) -> bool {
        self.in_hull(x, h) && self.facets.iter().all(|f| dot(&f.normal, x) <= h as i64 * f.offset)
    }

    /// Is `x` in the relative interior of `h·P` (so `h ≥ 1`)?
    pub fn contains_interior(&self, x: &[i64], h: u32) -> bool {
        h > 0 && self.in_hull(x, h) && self.facets.iter().all(|f| dot(&f.normal, x) < h as i64 * f.offset)
    }

    fn in_hull(&self, x: &[i64], h: u32) -> bool {
        x.len() == self.ambient
            && self.hull_eqs.iter().zip(&self.hull_rhs).all(|(e, &r)| dot(e, x) == h as i64 * r)
    }

    /// Smallest face of `P` whose cone contains `(x, h)`; `x` must lie in `h·P`.
    pub fn carrier(&self, x: &[i64], h: u32) -> u64 {
        let all = self.whole().mask;
        self.facets
            .iter()
            .filter(|f| dot(&f.normal, x) == h as i64 * f.offset)
            .fold(all, |m, f| m & f.mask)
    }

    /// Is `(x, h)` in the cone over `face`?
    pub fn face_contains(&self, face: &Face, x: &[i64], h: u32) -> bool {
        self.contains(x, h) && self.carrier(x, h) & !face.mask == 0
    }

    /// Lattice points of `h·P`, sorted.
    pub fn lattice_points(&self, h: u32) -> Arc<Vec<LatticePoint>> {
        self.cached(h, false)
    }

    /// Lattice points of the relative interior of `h·P`, sorted.
    pub fn relative_interior_points(&self, h: u32) -> Arc<Vec<LatticePoint>> {
        self.cached(h, true)
    }

    pub fn points_at_height(&self, h: u32) -> Vec<ConeElement> {
        self.lattice_points(h).iter().map(|p| ConeElement::new(p.clone(), h)).collect()
    }

    pub fn interior_points_at_height(&self, h: u32) -> Result<Vec<ConeElement>, GeometryError> {
        if !self.is_full_dimensional() {
            return Err(GeometryError::NotFullDimensional { dim: self.dim, ambient: self.ambient });
        }
        Ok(self.relative_interior_points(h).iter().map(|p| ConeElement::new(p.clone(), h)).collect())
    }

    /// Lattice points of `h·τ`.
    pub fn face_points(&self, face: &Face, h: u32) -> Vec<LatticePoint> {
        self.lattice_points(h)
            .iter()
            .filter(|x| self.carrier(x, h) & !face.mask == 0)
            .cloned()
            .collect()
    }

    /// Number of candidates the scan of `h·P` visits.
    pub fn scan_size(&self, h: u32) -> u128 {
        self.free
            .iter()
            .map(|&c| {
                let lo = self.vertices.iter().map(|v| v[c]).min().unwrap() as i128;
                let up = self.vertices.iter().map(|v| v[c]).max().unwrap() as i128;
                ((up - lo) * h as i128 + 1) as u128
            })
            .product()
    }

    fn cached(&self, h: u32, strict: bool) -> Arc<Vec<LatticePoint>> {
        if let Some(v) = self.cache.lock().unwrap().get(&(h, strict)) {
            return v.clone();
        }
        let v = Arc::new(self.enumerate(h, strict));
        self.cache.lock().unwrap().insert((h, strict), v.clone());
        v
    }

    /// Scans the free coordinates over the bounding box of `h·P` and solves
    /// for the rest on the affine hull.
    fn enumerate(&self, h: u32, strict: bool) -> Vec<LatticePoint> {
        if strict && h == 0 {
            return Vec::new();
        }
        let hi = h as i64;
        let ranges: Vec<(i64, i64)> = self
            .free
            .iter()
            .map(|&c| {
                let lo = self.vertices.iter().map(|v| v[c]).min().unwrap() * hi;
                let up = self.vertices.iter().map(|v| v[c]).max().unwrap() * hi;
                (lo, up)
            })
            .collect();
        let mut out = Vec::new();
        let mut cur: Vec<i64> = ranges.iter().map(|r| r.0).collect();
        loop {
            if let Some(x) = self.complete(&cur, h) {
                let ok = self.facets.iter().all(|f| {
                    let v = dot(&f.normal, &x);
                    if strict {
                        v < hi * f.offset
                    } else {
                        v <= hi * f.offset
                    }
                });
                if ok {
                    out.push(x);
                }
            }
            // odometer
            let mut i = 0;
            loop {
                if i == cur.len() {
                    out.sort();
                    return out;
                }
                if cur[i] < ranges[i].1 {
                    cur[i] += 1;
                    break;
                }
                cur[i] = ranges[i].0;
                i += 1;
            }
        }
    }

    fn complete(&self, free_vals: &[i64], h: u32) -> Option<LatticePoint> {
        let mut x = vec![0i64; self.ambient];
        for (&c, &v) in self.free.iter().zip(free_vals) {
            x[c] = v;
        }
        let Some(solver) = &self.solver else { return Some(x) };
        let rhs: Vec<i128> = self
            .hull_eqs
            .iter()
            .zip(&self.hull_rhs)
            .map(|(e, &r)| {
                let known: i128 = self.free.iter().map(|&c| e[c] as i128 * x[c] as i128).sum();
                h as i128 * r as i128 - known
            })
            .collect();
        let rest = solver.solve_integral(&rhs)?;
        for (&c, v) in self.bound.iter().zip(rest) {
            x[c] = v;
        }
        Some(x)
    }

    /// All full flags, in lexicographic order of their face sequences.
    pub fn full_flags(&self) -> Vec<Flag> {
        let mut out = Vec::new();
        let mut chain = vec![self.whole().clone()];
        self.extend_flags(&mut chain, &mut out);
        out.sort();
        out
    }

    fn extend_flags(&self, chain: &mut Vec<Face>, out: &mut Vec<Flag>) {
        let top = chain.last().unwrap().clone();
        if top.dim == 0 {
            let mut faces = chain.clone();
            faces.reverse();
            out.push(Flag { faces });
            return;
        }
        for f in self.faces.iter().filter(|f| f.dim + 1 == top.dim && top.contains(f)) {
            chain.push(f.clone());
            self.extend_flags(chain, out);
            chain.pop();
        }
    }

    /// The lexicographically least full flag.
    pub fn default_flag(&self) -> Flag {
        self.full_flags().into_iter().next().expect("every polytope has a flag")
    }

    pub fn vertex_points(&self, face: &Face) -> Vec<LatticePoint> {
        face.vertices.iter().map(|&i| self.vertices[i].clone()).collect()
    }
}

/// Facet inequalities over the input points, with masks over those points.
fn raw_facets(pts: &[LatticePoint], basis: &[Vec<i64>]) -> Vec<Facet> {
    let n = basis.len();
    if n == 0 {
        return Vec::new();
    }
    let mut out: Vec<Facet> = Vec::new();
    for subset in (0..pts.len()).combinations(n) {
        let s0 = &pts[subset[0]];
        let g: Vec<Vec<i64>> = subset[1..]
            .iter()
            .map(|&i| {
                let d = intlin::sub(&pts[i], s0);
                basis.iter().map(|w| dot(w, &d)).collect()
            })
            .collect();
        let ker = integer_kernel(&g, n);
        if ker.len() != 1 {
            continue;
        }
        let mut a = vec![0i64; s0.len()];
        for (lam, w) in ker[0].iter().zip(basis) {
            for (ai, wi) in a.iter_mut().zip(w) {
                *ai += lam * wi;
            }
        }
        let g = gcd_all(&a);
        a.iter_mut().for_each(|x| *x /= g);
        let b = dot(&a, s0);
        let vals: Vec<i64> = pts.iter().map(|p| dot(&a, p)).collect();
        let (above, below) = (vals.iter().any(|&v| v > b), vals.iter().any(|&v| v < b));
        let (a, b) = match (above, below) {
            (true, true) => continue,
            (true, false) => (a.iter().map(|x| -x).collect(), -b),
            _ => (a, b),
        };
        let mask = pts
            .iter()
            .enumerate()
            .filter(|(_, p)| dot(&a, p) == b)
            .fold(0u64, |m, (i, _)| m | 1 << i);
        if out.iter().all(|f| f.mask != mask) {
            out.push(Facet { normal: a, offset: b, mask });
        }
    }
    out.sort_by_key(|f| f.mask);
    out
}

fn face_lattice(vertices: &[LatticePoint], facets: &[Facet]) -> Vec<Face> {
    let all = if vertices.len() == 64 { u64::MAX } else { (1u64 << vertices.len()) - 1 };
    let mut masks: BTreeSet<u64> = facets.iter().map(|f| f.mask).collect();
    loop {
        let cur: Vec<u64> = masks.iter().copied().collect();
        let before = masks.len();
        for (i, &a) in cur.iter().enumerate() {
            for &b in &cur[i + 1..] {
                if a & b != 0 {
                    masks.insert(a & b);
                }
            }
        }
        if masks.len() == before {
            break;
        }
    }
    masks.insert(all);
    let mut faces: Vec<Face> = masks
        .into_iter()
        .map(|m| {
            let pts: Vec<LatticePoint> = (0..vertices.len()).filter(|i| m >> i & 1 == 1).map(|i| vertices[i].clone()).collect();
            Face::from_mask(m, affine_basis(&pts).len())
        })
        .collect();
    faces.sort();
    faces
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(v: &[&[i64]]) -> Polytope {
        Polytope::new("t", v.iter().map(|x| x.to_vec()).collect()).unwrap()
    }

    /// Membership in h·T₂ through the coordinates x = a·e1 + b·e2 + c·(1,1,2).
    fn reeve_count(h: i64) -> usize {
        let mut n = 0;
        for x in -1..=2 * h {
            for y in -1..=2 * h {
                for z in -1..=3 * h {
                    let c2 = z;
                    let (a2, b2) = (2 * x - c2, 2 * y - c2);
                    if a2 >= 0 && b2 >= 0 && c2 >= 0 && a2 + b2 + c2 <= 2 * h {
                        n += 1;
                    }
                }
            }
        }
        n
    }

    #[test]
    fn segment() {
        let p = poly(&[&[0], &[2]]);
        assert_eq!(p.facets().len(), 2);
        assert_eq!(p.lattice_points(1).len(), 3);
        assert_eq!(*p.lattice_points(2), vec![vec![0], vec![1], vec![2], vec![3], vec![4]]);
        assert_eq!(*p.relative_interior_points(1), vec![vec![1]]);
        assert_eq!(p.relative_interior_points(2).len(), 3);
        assert_eq!(p.full_flags().len(), 2);
    }

    #[test]
    fn reeve_simplex() {
        let p = poly(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[1, 1, 2]]);
        assert_eq!(p.facets().len(), 4);
        assert_eq!(p.lattice_points(1).len(), 4);
        for h in 0..4 {
            assert_eq!(p.lattice_points(h as u32).len(), reeve_count(h));
        }
    }

    #[test]
    fn redundant_points_dropped() {
        let p = poly(&[&[0, 0], &[2, 0], &[0, 2], &[1, 0], &[1, 1], &[0, 1]]);
        assert_eq!(p.vertices().len(), 3);
        assert_eq!(p.lattice_points(1).len(), 6);
    }

    #[test]
    fn square_faces_and_flags() {
        let p = poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(p.faces().len(), 9);
        assert_eq!(p.full_flags().len(), 8);
        assert!(p.relative_interior_points(1).is_empty());
        let t = poly(&[&[0, 0], &[1, 0], &[0, 1]]);
        assert_eq!(t.full_flags().len(), 6);
        for f in t.full_flags() {
            for (i, face) in f.faces.iter().enumerate() {
                assert_eq!(face.dim, i);
            }
        }
    }

    #[test]
    fn embedded_triangle() {
        // unimodular triangle in the plane x+y+z = 1
        let p = poly(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(p.dim(), 2);
        assert_eq!(p.facets().len(), 3);
        assert_eq!(p.lattice_points(2).len(), 6);
        assert_eq!(p.relative_interior_points(3).len(), 1);
        assert!(p.interior_points_at_height(3).is_err());
    }

    #[test]
    fn height_zero_is_origin() {
        let p = poly(&[&[1, 1], &[2, 3]]);
        assert_eq!(*p.lattice_points(0), vec![vec![0, 0]]);
        assert!(p.relative_interior_points(0).is_empty());
    }
}
