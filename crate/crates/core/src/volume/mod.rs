//! The normalized volume map on the top degree of an Artinian reduction.
//!
//! `vol` is the unique functional on `A^{d+1}` satisfying the balancing
//! identities `Σ_j θ_{ij} vol(x_A x_j) = 0` together with the normalization
//! `Σ_{σ coherent} det(Θ|σ) vol(x_σ) = 1` for a full flag of one cell.

mod checks;

use std::collections::HashMap;

use thiserror::Error;

use crate::algebra::{Element, Theta};
use crate::complex::{LatticeComplex, Space};
use crate::geometry::{intlin, Flag};
use crate::scalar::{linear_solve, FieldStream, FiniteField, LinAlgError, Matrix, Scalar, SolveOutcome};

pub use checks::{check_flag_independence, check_locality, deformed_volume, DeformedVolume, LocalityReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VolumeError {
    #[error("Θ is {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    ThetaShape { rows: usize, cols: usize, expected_rows: usize, expected_cols: usize },
    #[error("cell {0} does not exist")]
    NoCell(usize),
    #[error("coherent sum {0:?} is not a top-degree element of the space")]
    CoherentOutside(Vec<i64>),
    #[error("all coherent determinants vanish at this specialization")]
    DegenerateNormalization,
    #[error("balancing system has a {0}-dimensional solution space; re-seed")]
    RankDeficient(usize),
    #[error("normalization row lies in the span of the balancing rows")]
    Contradiction,
    #[error("no point of the subcomplex matches cell {0}")]
    Locality(String),
    #[error(transparent)]
    Linear(#[from] LinAlgError),
}

/// A full flag of one maximal cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellFlag {
    pub cell: usize,
    pub flag: Flag,
}

impl CellFlag {
    /// The lexicographically least flag of the first cell.
    pub fn default_for(cx: &LatticeComplex) -> CellFlag {
        CellFlag { cell: 0, flag: cx.cells()[0].polytope.default_flag() }
    }

    pub fn all_for(cx: &LatticeComplex, cell: usize) -> Vec<CellFlag> {
        cx.cells()[cell].polytope.full_flags().into_iter().map(|flag| CellFlag { cell, flag }).collect()
    }
}

/// Coherent tuples `(a_0, …, a_d)` of height-1 layer indices:
/// `a_0 ∈ τ_0` and `a_i ∈ τ_i ∖ τ_{i-1}`.
pub fn coherent_sets(cx: &LatticeComplex, cf: &CellFlag) -> Result<Vec<Vec<usize>>, VolumeError> {
    let cell = cx.cells().get(cf.cell).ok_or(VolumeError::NoCell(cf.cell))?;
    let l1 = cx.layer(1);
    let mut levels: Vec<Vec<usize>> = Vec::new();
    let mut prev: Vec<usize> = Vec::new();
    for face in &cf.flag.faces {
        let pts: Vec<usize> = cell
            .polytope
            .face_points(face, 1)
            .iter()
            .map(|p| l1.find(p).expect("cell points are height-1 elements"))
            .collect();
        levels.push(pts.iter().copied().filter(|p| !prev.contains(p)).collect());
        prev = pts;
    }
    let mut out: Vec<Vec<usize>> = vec![Vec::new()];
    for level in &levels {
        out = out
            .into_iter()
            .flat_map(|t| {
                level.iter().map(move |&a| {
                    let mut t = t.clone();
                    t.push(a);
                    t
                })
            })
            .collect();
    }
    Ok(out)
}

/// `u = Σ_σ det(Θ|σ) x_σ`, as an element of height `d+1`.
pub fn km_normalization<S: Scalar>(
    cx: &LatticeComplex,
    theta: &Theta<S>,
    cf: &CellFlag,
) -> Result<Element<S>, VolumeError> {
    let top = cx.krull_dim() as u32;
    let l1 = cx.layer(1);
    let lt = cx.layer(top);
    let mut terms = Vec::new();
    for sigma in coherent_sets(cx, cf)? {
        let sum = sigma.iter().fold(vec![0; cx.ambient_dim()], |acc, &a| intlin::add(&acc, &l1.points[a]));
        let idx = lt.find(&sum).ok_or_else(|| VolumeError::CoherentOutside(sum.clone()))?;
        terms.push((idx, theta.minor(&sigma)));
    }
    Ok(Element::collect(top, terms))
}

/// The solved volume functional.
#[derive(Clone, Debug)]
pub struct VolumeFunctional<S> {
    pub space: Space,
    pub flag: CellFlag,
    /// Layer indices of the top-degree monomials of the space.
    pub monomials: Vec<usize>,
    pub values: Vec<S>,
    pub balancing_rows: usize,
    pub balancing_rank: usize,
    index: HashMap<usize, usize>,
}

impl<S: Scalar> VolumeFunctional<S> {
    pub fn degree(&self) -> u32 {
        self.space.top_degree()
    }

    /// `vol(x_m)` for a layer index at the top height; zero off the space.
    pub fn value(&self, idx: usize) -> S {
        self.index.get(&idx).map_or_else(S::zero, |&i| self.values[i].clone())
    }

    pub fn value_at(&self, point: &[i64]) -> S {
        match self.space.complex.layer(self.degree()).find(point) {
            Some(i) => self.value(i),
            None => S::zero(),
        }
    }

    /// Linear extension; only top-degree elements are accepted.
    pub fn volume_of(&self, e: &Element<S>) -> Result<S, VolumeError> {
        if e.height != self.degree() {
            return Err(VolumeError::Linear(LinAlgError::Shape(format!(
                "element of height {} passed to vol of degree {}",
                e.height,
                self.degree()
            ))));
        }
        Ok(e.terms.iter().fold(S::zero(), |acc, (i, c)| acc + c.clone() * self.value(*i)))
    }

    /// `Σ_{σ coherent} det(Θ|σ) vol(x_σ)` for another flag.
    pub fn normalization_sum(&self, theta: &Theta<S>, cf: &CellFlag) -> Result<S, VolumeError> {
        let u = km_normalization(&self.space.complex, theta, cf)?;
        self.volume_of(&u)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> VolumeFunctional<T> {
        VolumeFunctional {
            space: self.space.clone(),
            flag: self.flag.clone(),
            monomials: self.monomials.clone(),
            values: self.values.iter().map(f).collect(),
            balancing_rows: self.balancing_rows,
            balancing_rank: self.balancing_rank,
            index: self.index.clone(),
        }
    }
}

/// Balancing rows `θ_i · x_A` for every height-`d` element `A` of the space,
/// over the top-degree monomials.
pub fn balancing_matrix<S: Scalar>(space: &Space, theta: &Theta<S>) -> Matrix<S> {
    let cx = &space.complex;
    let top = space.top_degree();
    let unknowns = space.basis(top);
    let col: HashMap<usize, usize> = unknowns.iter().enumerate().map(|(c, &m)| (m, c)).collect();
    let mut rows = Vec::new();
    for a in space.basis(top - 1) {
        for i in 0..theta.rows() {
            let mut row = vec![S::zero(); unknowns.len()];
            for (j, th) in theta.row(i).iter().enumerate() {
                if let Some(p) = cx.multiply(1, j, top - 1, a) {
                    let c = col[&p];
                    row[c] = row[c].clone() + th.clone();
                }
            }
            rows.push(row);
        }
    }
    if rows.is_empty() {
        return Matrix::zeros(0, unknowns.len());
    }
    Matrix::from_rows(rows)
}

pub fn solve_volume<S: Scalar>(
    space: &Space,
    theta: &Theta<S>,
    flag: Option<&CellFlag>,
) -> Result<VolumeFunctional<S>, VolumeError> {
    let cx = &space.complex;
    if theta.rows() != cx.krull_dim() || theta.cols() != cx.layer(1).len() {
        return Err(VolumeError::ThetaShape {
            rows: theta.rows(),
            cols: theta.cols(),
            expected_rows: cx.krull_dim(),
            expected_cols: cx.layer(1).len(),
        });
    }
    let cf = flag.cloned().unwrap_or_else(|| CellFlag::default_for(cx));
    let top = space.top_degree();
    let monomials = space.basis(top);
    let index: HashMap<usize, usize> = monomials.iter().enumerate().map(|(c, &m)| (m, c)).collect();
    let n = monomials.len();

    let bal = balancing_matrix(space, theta);
    let balancing_rank = if bal.rows() == 0 { 0 } else { bal.rank()? };
    let u = km_normalization(cx, theta, &cf)?;
    if u.is_zero() {
        return Err(VolumeError::DegenerateNormalization);
    }
    let mut km = vec![S::zero(); n];
    for (i, c) in &u.terms {
        let col = *index.get(i).ok_or_else(|| VolumeError::CoherentOutside(cx.layer(top).points[*i].clone()))?;
        km[col] = c.clone();
    }
    let mut rows: Vec<Vec<S>> = (0..bal.rows()).map(|r| bal.row(r).to_vec()).collect();
    rows.push(km);
    let mut rhs = vec![S::zero(); rows.len()];
    *rhs.last_mut().unwrap() = S::one();
    let values = match linear_solve(&Matrix::from_rows(rows), &rhs, true) {
        Ok(SolveOutcome::Unique(x)) => x,
        Ok(SolveOutcome::Underdetermined { kernel, .. }) => return Err(VolumeError::RankDeficient(kernel.len())),
        Err(LinAlgError::Inconsistent) => return Err(VolumeError::Contradiction),
        Err(e) => return Err(e.into()),
    };
    Ok(VolumeFunctional {
        space: space.clone(),
        flag: cf,
        monomials,
        values,
        balancing_rows: bal.rows(),
        balancing_rank,
        index,
    })
}

/// Attempts at a fresh specialization before a solve failure is reported.
pub const MAX_RESEEDS: u32 = 8;

/// Generic Θ from the stream and its volume map, re-seeding through forks of
/// the stream on rank deficiency or a degenerate normalization.
pub fn generic_volume<F: FiniteField>(
    space: &Space,
    stream: &FieldStream,
    flag: Option<&CellFlag>,
) -> Result<(Theta<F>, VolumeFunctional<F>, u32), VolumeError> {
    let mut last = None;
    for attempt in 0..=MAX_RESEEDS {
        let mut s = if attempt == 0 { stream.clone() } else { stream.fork(attempt as u64) };
        let theta = Theta::<F>::generic(&space.complex, &mut s);
        match solve_volume(space, &theta, flag) {
            Ok(vf) => return Ok((theta, vf, attempt)),
            Err(e @ (VolumeError::RankDeficient(_) | VolumeError::DegenerateNormalization)) => last = Some(e),
            Err(VolumeError::Linear(LinAlgError::NoInvertiblePivot(c))) => {
                last = Some(VolumeError::Linear(LinAlgError::NoInvertiblePivot(c)))
            }
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::geometry::Polytope;
    use crate::scalar::{Gf2_64, Gf5};

    fn pair(v: Vec<Vec<i64>>) -> Space {
        let p = Polytope::new("p", v).unwrap();
        Space::relative(Arc::new(LatticeComplex::from_polytope(&p, true)))
    }

    #[test]
    fn coherent_sets_of_segment_and_square() {
        let s = pair(vec![vec![0], vec![2]]);
        let cf = CellFlag::default_for(&s.complex);
        let sets = coherent_sets(&s.complex, &cf).unwrap();
        let l1 = s.complex.layer(1);
        let pts: Vec<Vec<i64>> = sets.iter().map(|t| t.iter().map(|&a| l1.points[a][0]).collect()).collect();
        assert_eq!(pts, vec![vec![0, 1], vec![0, 2]]);
        let sq = pair(vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]);
        for cf in CellFlag::all_for(&sq.complex, 0) {
            assert_eq!(coherent_sets(&sq.complex, &cf).unwrap().len(), 2);
        }
    }

    #[test]
    fn unimodular_prototype() {
        let s = pair(vec![vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        let mut st = FieldStream::new(11);
        let th = Theta::<Gf2_64>::generic(&s.complex, &mut st);
        let vf = solve_volume(&s, &th, None).unwrap();
        assert_eq!(vf.monomials.len(), 1);
        let det = th.minor(&[0, 1, 2, 3]);
        assert_eq!(vf.values[0] * det, Gf2_64::one());
    }

    #[test]
    fn odd_characteristic_segment() {
        let s = pair(vec![vec![0], vec![1]]);
        let th = Theta::<Gf5>::random(2, 2, &mut FieldStream::new(4));
        if th.minor(&[0, 1]).is_zero() {
            return;
        }
        let vf = solve_volume(&s, &th, None).unwrap();
        assert_eq!(vf.values[0] * th.minor(&[0, 1]), Gf5::one());
    }

    #[test]
    fn balancing_rank_is_one_short() {
        let s = pair(vec![vec![0], vec![2]]);
        let th = Theta::<Gf2_64>::generic(&s.complex, &mut FieldStream::new(12));
        let vf = solve_volume(&s, &th, None).unwrap();
        assert_eq!(vf.balancing_rank + 1, vf.monomials.len());
    }

    fn bracket(th: &Theta<Gf2_64>, a: usize, b: usize) -> Gf2_64 {
        *th.entry(0, a) * *th.entry(1, b) - *th.entry(0, b) * *th.entry(1, a)
    }

    #[test]
    fn segment_closed_forms() {
        let s = pair(vec![vec![1], vec![3]]);
        for seed in 0..4 {
            let th = Theta::<Gf2_64>::generic(&s.complex, &mut FieldStream::new(seed));
            let vf = solve_volume(&s, &th, None).unwrap();
            let (b12, b13, b23) = (bracket(&th, 0, 1), bracket(&th, 0, 2), bracket(&th, 1, 2));
            let want = b23 * (b13 * b13 + b12 * b23).inverse().unwrap();
            assert_eq!(vf.value_at(&[3]), want);
        }
        let q = pair(vec![vec![1], vec![2]]);
        let th = Theta::<Gf2_64>::generic(&q.complex, &mut FieldStream::new(9));
        let vf = solve_volume(&q, &th, None).unwrap();
        assert_eq!(vf.value_at(&[3]), bracket(&th, 0, 1).inverse().unwrap());
    }

    #[test]
    fn every_flag_normalizes_to_one() {
        let sq = pair(vec![vec![-1, -1], vec![1, -1], vec![-1, 1], vec![1, 1]]);
        let th = Theta::<Gf2_64>::generic(&sq.complex, &mut FieldStream::new(21));
        let vf = solve_volume(&sq, &th, None).unwrap();
        let flags = CellFlag::all_for(&sq.complex, 0);
        assert_eq!(flags.len(), 8);
        for (_, sum) in check_flag_independence(&vf, &th, &flags).unwrap() {
            assert_eq!(sum, Gf2_64::one());
        }
    }

    #[test]
    fn locality_on_pyramid_boundary() {
        let tri = Polytope::new("tri", vec![vec![0, 0], vec![2, 0], vec![0, 2]]).unwrap();
        let pyr = crate::geometry::pyramid(&tri);
        let x = Space::relative(Arc::new(LatticeComplex::boundary_complex(&pyr)));
        let th = Theta::<Gf2_64>::generic(&x.complex, &mut FieldStream::new(31));
        let base = Polytope::new("base", vec![vec![0, 0, 0], vec![2, 0, 0], vec![0, 2, 0]]).unwrap();
        let r = check_locality(&x, &th, &base).unwrap();
        assert!(r.compared > 0);
        assert!(r.holds(), "{:?}", r.mismatches);
    }

    #[test]
    fn coarsened_triangle_degenerates_to_one_point() {
        let tri = Polytope::new("tri", vec![vec![0, 0], vec![2, 0], vec![0, 2]]).unwrap();
        let s = Space::relative(Arc::new(LatticeComplex::from_polytope(&tri, true)));
        let l1 = s.complex.layer(1);
        let v: Vec<usize> = [[0, 1], [1, 0], [1, 1]].iter().map(|p| l1.find(p).unwrap()).collect();
        let q: Vec<usize> = [[0, 0], [2, 0], [0, 2]].iter().map(|p| l1.find(p).unwrap()).collect();
        let th = Theta::<Gf2_64>::generic(&s.complex, &mut FieldStream::new(41));
        let dv = deformed_volume(&s, &th, &v, None).unwrap();
        assert!(!dv.has_poles());
        let centre = dv.value_at_zero(&[2, 2]).unwrap();
        assert_eq!(centre * th.minor(&q), Gf2_64::one());
        let l3 = s.complex.layer(3);
        for &m in &dv.functional.monomials {
            if l3.points[m] != vec![2, 2] {
                assert_eq!(dv.value_at_zero(&l3.points[m]), Some(Gf2_64::zero()));
            }
        }
    }
}
