//! Lattice complexes: polytopal cells glued along common faces, a
//! down-closed boundary subcomplex, and the graded semigroup elements of
//! their cones.
//!
//! Every complex lives in one global lattice `Z^D`; points with equal
//! coordinates are identified. Cells are stored as polytopes over point ids.

mod porcupine;
mod validate;

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{intlin, ConeElement, GeometryError, LatticePoint, Polytope};

pub use porcupine::porcupine;
pub use validate::{ComplexKind, ValidationReport};

/// Heights above this are never materialized.
pub const MAX_HEIGHT: u32 = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("unknown point id {0:?}")]
    UnknownId(String),
    #[error("cell index {0} out of range")]
    CellIndex(usize),
    #[error("at most 64 maximal cells are supported, got {0}")]
    TooManyCells(usize),
    #[error("complex has no cells")]
    Empty,
    #[error("height {0} is odd")]
    OddHeight(u32),
    #[error("height {0} exceeds the supported maximum")]
    HeightBound(u32),
    #[error("invalid complex JSON: {0}")]
    Json(String),
}

/// Set of maximal cells, as a bitmask.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct CellSet(pub u64);

impl CellSet {
    pub fn meets(self, other: CellSet) -> bool {
        self.0 & other.0 != 0
    }

    pub fn intersection(self, other: CellSet) -> CellSet {
        CellSet(self.0 & other.0)
    }

    pub fn contains(self, cell: usize) -> bool {
        self.0 >> cell & 1 == 1
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |i| self.0 >> i & 1 == 1)
    }
}

#[derive(Clone, Debug)]
pub struct Cell {
    /// Point indices of the cell's vertices, sorted.
    pub ids: Vec<usize>,
    pub polytope: Polytope,
}

/// All semigroup elements of one height.
#[derive(Debug)]
pub struct Layer {
    pub height: u32,
    pub points: Vec<LatticePoint>,
    pub cells: Vec<CellSet>,
    pub in_boundary: Vec<bool>,
    /// Indices of elements outside every boundary cone.
    pub module: Vec<usize>,
    index: HashMap<LatticePoint, usize>,
}

impl Layer {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn find(&self, x: &[i64]) -> Option<usize> {
        self.index.get(x).copied()
    }
}

#[derive(Debug)]
pub struct LatticeComplex {
    name: String,
    ambient: usize,
    ids: Vec<String>,
    coords: Vec<LatticePoint>,
    cells: Vec<Cell>,
    boundary: Vec<Cell>,
    dim: usize,
    layers: Vec<OnceLock<Arc<Layer>>>,
}

impl Clone for LatticeComplex {
    fn clone(&self) -> Self {
        LatticeComplex::assemble(
            &self.name,
            self.ids.clone(),
            self.coords.clone(),
            self.cells.clone(),
            self.boundary.clone(),
        )
    }
}

/// Complex input record.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexSpec {
    #[serde(default)]
    pub name: String,
    pub points: BTreeMap<String, LatticePoint>,
    pub cells: Vec<CellSpec>,
    #[serde(default)]
    pub boundary_cells: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellSpec {
    pub vertices: Vec<String>,
}

fn make_cell(name: &str, coords: &[LatticePoint], mut ids: Vec<usize>) -> Result<Cell, ComplexError> {
    ids.sort_unstable();
    ids.dedup();
    let pts = ids.iter().map(|&i| coords[i].clone()).collect();
    Ok(Cell { ids, polytope: Polytope::new(name, pts)? })
}

impl LatticeComplex {
    /// Builds a complex from explicit cells over point indices. Listed cells
    /// whose id set lies inside another listed cell are not maximal and are
    /// dropped; `boundary` lists the maximal faces of the boundary subcomplex.
    pub fn new(
        name: &str,
        ids: Vec<String>,
        coords: Vec<LatticePoint>,
        cells: Vec<Vec<usize>>,
        boundary: Vec<Vec<usize>>,
    ) -> Result<LatticeComplex, ComplexError> {
        if cells.is_empty() {
            return Err(ComplexError::Empty);
        }
        let ambient = coords.first().map_or(0, Vec::len);
        if coords.iter().any(|c| c.len() != ambient) {
            return Err(GeometryError::Ragged.into());
        }
        let mut sets: Vec<Vec<usize>> = cells
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c.dedup();
                c
            })
            .collect();
        sets.dedup();
        let subset = |a: &[usize], b: &[usize]| a.len() < b.len() && a.iter().all(|x| b.contains(x));
        let maximal: Vec<Vec<usize>> =
            sets.iter().filter(|c| !sets.iter().any(|o| subset(c, o))).cloned().collect();
        if maximal.len() > 64 {
            return Err(ComplexError::TooManyCells(maximal.len()));
        }
        let cells = maximal
            .into_iter()
            .enumerate()
            .map(|(i, c)| make_cell(&format!("{name}#{i}"), &coords, c))
            .collect::<Result<Vec<_>, _>>()?;
        let boundary = boundary
            .into_iter()
            .enumerate()
            .map(|(i, c)| make_cell(&format!("{name}#b{i}"), &coords, c))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::assemble(name, ids, coords, cells, boundary))
    }

    fn assemble(
        name: &str,
        ids: Vec<String>,
        coords: Vec<LatticePoint>,
        cells: Vec<Cell>,
        boundary: Vec<Cell>,
    ) -> LatticeComplex {
        let ambient = coords.first().map_or(0, Vec::len);
        let dim = cells.iter().map(|c| c.polytope.dim()).max().unwrap_or(0);
        LatticeComplex {
            name: name.to_string(),
            ambient,
            ids,
            coords,
            cells,
            boundary,
            dim,
            layers: (0..=MAX_HEIGHT).map(|_| OnceLock::new()).collect(),
        }
    }

    /// `P` as a one-cell complex, with `∂P` as boundary when `relative`.
    pub fn from_polytope(p: &Polytope, relative: bool) -> LatticeComplex {
        let coords = p.vertices().to_vec();
        let ids = (0..coords.len()).map(|i| i.to_string()).collect();
        let boundary = if relative {
            p.facets()
                .iter()
                .map(|f| {
                    let ids: Vec<usize> = (0..coords.len()).filter(|i| f.mask >> i & 1 == 1).collect();
                    make_cell("facet", &coords, ids).expect("facet of a valid polytope")
                })
                .collect()
        } else {
            Vec::new()
        };
        let cell = Cell { ids: (0..coords.len()).collect(), polytope: p.clone() };
        Self::assemble(p.name(), ids, coords, vec![cell], boundary)
    }

    /// The facets of `P` glued along their common faces; no boundary.
    pub fn boundary_complex(p: &Polytope) -> LatticeComplex {
        let coords = p.vertices().to_vec();
        let ids = (0..coords.len()).map(|i| i.to_string()).collect();
        let cells = p
            .facets()
            .iter()
            .map(|f| {
                let ids: Vec<usize> = (0..coords.len()).filter(|i| f.mask >> i & 1 == 1).collect();
                make_cell("facet", &coords, ids).expect("facet of a valid polytope")
            })
            .collect();
        Self::assemble(&format!("∂{}", p.name()), ids, coords, cells, Vec::new())
    }

    /// `(pyr X, X ∪ pyr Y)` with the apex `e_{D+1}`.
    pub fn pyramid(&self) -> LatticeComplex {
        self.coned(true)
    }

    /// `(pyr X, pyr Y)` with the apex `e_{D+1}`.
    pub fn cone(&self) -> LatticeComplex {
        self.coned(false)
    }

    fn coned(&self, with_base: bool) -> LatticeComplex {
        let mut coords: Vec<LatticePoint> = self
            .coords
            .iter()
            .map(|c| {
                let mut c = c.clone();
                c.push(0);
                c
            })
            .collect();
        let mut apex = vec![0; self.ambient + 1];
        apex[self.ambient] = 1;
        let a = coords.len();
        coords.push(apex);
        let mut ids = self.ids.clone();
        ids.push("apex".to_string());
        let cone = |c: &Cell| {
            let mut v = c.ids.clone();
            v.push(a);
            make_cell("pyr", &coords, v).expect("pyramid of a valid cell")
        };
        let cells = self.cells.iter().map(cone).collect();
        let mut boundary: Vec<Cell> = Vec::new();
        if with_base {
            boundary.extend(self.cells.iter().map(|c| make_cell("base", &coords, c.ids.clone()).expect("base cell")));
        }
        boundary.extend(self.boundary.iter().map(cone));
        Self::assemble(&format!("pyr({})", self.name), ids, coords, cells, boundary)
    }

    /// Same cells and points, no boundary.
    pub fn without_boundary(&self) -> LatticeComplex {
        Self::assemble(&self.name, self.ids.clone(), self.coords.clone(), self.cells.clone(), Vec::new())
    }

    pub fn from_spec(spec: &ComplexSpec) -> Result<LatticeComplex, ComplexError> {
        let ids: Vec<String> = spec.points.keys().cloned().collect();
        let coords: Vec<LatticePoint> = spec.points.values().cloned().collect();
        let lookup = |s: &String| ids.iter().position(|x| x == s).ok_or_else(|| ComplexError::UnknownId(s.clone()));
        let listed = spec
            .cells
            .iter()
            .map(|c| c.vertices.iter().map(lookup).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let boundary = spec
            .boundary_cells
            .iter()
            .map(|&i| listed.get(i).cloned().ok_or(ComplexError::CellIndex(i)))
            .collect::<Result<Vec<_>, _>>()?;
        LatticeComplex::new(&spec.name, ids, coords, listed, boundary)
    }

    pub fn from_json(text: &str) -> Result<LatticeComplex, ComplexError> {
        let spec: ComplexSpec = serde_json::from_str(text).map_err(|e| ComplexError::Json(e.to_string()))?;
        Self::from_spec(&spec)
    }

    pub fn to_spec(&self) -> ComplexSpec {
        let points = self.ids.iter().cloned().zip(self.coords.iter().cloned()).collect();
        let name_of = |c: &Cell| CellSpec { vertices: c.ids.iter().map(|&i| self.ids[i].clone()).collect() };
        let mut cells: Vec<CellSpec> = self.cells.iter().map(name_of).collect();
        let boundary_cells = (cells.len()..cells.len() + self.boundary.len()).collect();
        cells.extend(self.boundary.iter().map(name_of));
        ComplexSpec { name: self.name.clone(), points, cells, boundary_cells }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// Dimension of the complex, the largest cell dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Krull dimension of the face ring, the number of rows of `Θ`.
    pub fn krull_dim(&self) -> usize {
        self.dim + 1
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn boundary(&self) -> &[Cell] {
        &self.boundary
    }

    pub fn has_boundary(&self) -> bool {
        !self.boundary.is_empty()
    }

    pub fn point_ids(&self) -> &[String] {
        &self.ids
    }

    pub fn point_coords(&self) -> &[LatticePoint] {
        &self.coords
    }

    pub fn validate(&self) -> ValidationReport {
        validate::validate(self)
    }

    pub fn layer(&self, h: u32) -> Arc<Layer> {
        assert!(h <= MAX_HEIGHT, "height {h} exceeds {MAX_HEIGHT}");
        self.layers[h as usize].get_or_init(|| Arc::new(self.build_layer(h))).clone()
    }

    fn build_layer(&self, h: u32) -> Layer {
        let mut owners: BTreeMap<LatticePoint, u64> = BTreeMap::new();
        for (ci, cell) in self.cells.iter().enumerate() {
            for x in cell.polytope.lattice_points(h).iter() {
                *owners.entry(x.clone()).or_default() |= 1 << ci;
            }
        }
        let points: Vec<LatticePoint> = owners.keys().cloned().collect();
        let cells = owners.values().map(|&m| CellSet(m)).collect();
        let in_boundary: Vec<bool> =
            points.iter().map(|x| self.boundary.iter().any(|b| b.polytope.contains(x, h))).collect();
        let module = (0..points.len()).filter(|&i| !in_boundary[i]).collect();
        let index = points.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        Layer { height: h, points, cells, in_boundary, module, index }
    }

    /// Semigroup elements of height `j`.
    pub fn u_height(&self, j: u32) -> Vec<ConeElement> {
        self.layer(j).points.iter().map(|p| ConeElement::new(p.clone(), j)).collect()
    }

    /// Elements of height `j` outside the boundary subcomplex.
    pub fn u_height_interior(&self, j: u32) -> Vec<ConeElement> {
        let l = self.layer(j);
        l.module.iter().map(|&i| ConeElement::new(l.points[i].clone(), j)).collect()
    }

    /// Index of the product of two elements in the layer of height `h1 + h2`,
    /// or `None` when they share no cell.
    pub fn multiply(&self, h1: u32, i1: usize, h2: u32, i2: usize) -> Option<usize> {
        let (a, b) = (self.layer(h1), self.layer(h2));
        if !a.cells[i1].meets(b.cells[i2]) {
            return None;
        }
        let sum = intlin::add(&a.points[i1], &b.points[i2]);
        let idx = self.layer(h1 + h2).find(&sum);
        debug_assert!(idx.is_some(), "product inside a common cell must be an element");
        idx
    }

    /// Sum of the arguments if they all lie in a common cell cone.
    pub fn monomial_sum(&self, args: &[ConeElement]) -> Option<ConeElement> {
        let mut common = CellSet(u64::MAX);
        let mut acc = ConeElement::origin(self.ambient);
        for e in args {
            let i = self.layer(e.height).find(&e.point)?;
            common = common.intersection(self.layer(e.height).cells[i]);
            acc = acc.add(e);
        }
        (common.0 != 0).then_some(acc)
    }

    /// `(x/p, h/p)` as an element index at height `h/p`, if it is a lattice
    /// point of some cell cone. Errors when `p` does not divide `h`.
    pub fn divide_point(&self, x: &[i64], h: u32, p: u32) -> Result<Option<usize>, ComplexError> {
        if !h.is_multiple_of(p) {
            return Err(ComplexError::OddHeight(h));
        }
        if x.iter().any(|c| c % p as i64 != 0) {
            return Ok(None);
        }
        let y: LatticePoint = x.iter().map(|c| c / p as i64).collect();
        Ok(self.layer(h / p).find(&y))
    }

    pub fn half_point(&self, x: &[i64], h: u32) -> Result<Option<usize>, ComplexError> {
        self.divide_point(x, h, 2)
    }
}

/// A complex read as a ring `k[X]` or as the module `k[X, Y]`.
#[derive(Clone, Debug)]
pub struct Space {
    pub complex: Arc<LatticeComplex>,
    pub relative: bool,
}

impl Space {
    pub fn ring(complex: Arc<LatticeComplex>) -> Space {
        Space { complex, relative: false }
    }

    pub fn relative(complex: Arc<LatticeComplex>) -> Space {
        Space { complex, relative: true }
    }

    /// Layer indices of the monomial basis at height `h`.
    pub fn basis(&self, h: u32) -> Vec<usize> {
        let l = self.complex.layer(h);
        if self.relative {
            l.module.clone()
        } else {
            (0..l.len()).collect()
        }
    }

    pub fn contains(&self, h: u32, idx: usize) -> bool {
        !self.relative || !self.complex.layer(h).in_boundary[idx]
    }

    /// Top degree of the Artinian reduction.
    pub fn top_degree(&self) -> u32 {
        self.complex.krull_dim() as u32
    }

    pub fn describe(&self) -> String {
        if self.relative && self.complex.has_boundary() {
            format!("({}, boundary)", self.complex.name())
        } else {
            self.complex.name().to_string()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(v: &[&[i64]]) -> Polytope {
        Polytope::new("t", v.iter().map(|x| x.to_vec()).collect()).unwrap()
    }

    #[test]
    fn square_boundary_layers() {
        let sq = poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let x = LatticeComplex::boundary_complex(&sq);
        assert_eq!(x.cells().len(), 4);
        assert_eq!(x.u_height(1).len(), 4);
        assert_eq!(x.u_height(0).len(), 1);
        // each edge has 3 points at height 2, corners shared
        assert_eq!(x.u_height(2).len(), 4 * 3 - 4);
        let l1 = x.layer(1);
        let a = l1.find(&[0, 0]).unwrap();
        let b = l1.find(&[1, 1]).unwrap();
        let c = l1.find(&[1, 0]).unwrap();
        assert_eq!(x.multiply(1, a, 1, b), None);
        assert!(x.multiply(1, a, 1, c).is_some());
    }

    #[test]
    fn segment_pair() {
        let seg = poly(&[&[0], &[2]]);
        let x = LatticeComplex::from_polytope(&seg, true);
        assert_eq!(x.u_height_interior(2).len(), 3);
        assert_eq!(x.u_height_interior(0).len(), 0);
        assert_eq!(LatticeComplex::from_polytope(&seg, false).u_height_interior(0).len(), 1);
        assert_eq!(x.half_point(&[2], 2).unwrap(), Some(1));
        assert_eq!(x.half_point(&[3], 2).unwrap(), None);
        assert!(x.half_point(&[3], 3).is_err());
        let sq = LatticeComplex::from_polytope(&poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]), false);
        assert_eq!(sq.half_point(&[1, 1], 2).unwrap(), None);
    }

    #[test]
    fn json_round_trip() {
        let sq = poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let x = LatticeComplex::from_polytope(&sq, true);
        let text = serde_json::to_string(&x.to_spec()).unwrap();
        let y = LatticeComplex::from_json(&text).unwrap();
        assert_eq!(y.cells().len(), 1);
        assert_eq!(y.boundary().len(), 4);
        assert_eq!(y.u_height_interior(3).len(), x.u_height_interior(3).len());
        assert!(LatticeComplex::from_json("").is_err());
    }
}
