use std::collections::HashMap;

use super::{AlgebraError, Element, Theta};
use crate::complex::Space;
use crate::scalar::{Matrix, Scalar};

/// One graded piece `A^k` of the Artinian reduction of a space.
///
/// Relations `θ_i · m` are kept in row echelon form with leftmost pivots; the
/// quotient basis is the set of non-pivot monomials.
#[derive(Clone, Debug)]
pub struct GradedPiece<S> {
    space: Space,
    k: u32,
    monomials: Vec<usize>,
    column: HashMap<usize, usize>,
    /// Row with pivot `c`, stored from column `c` on, leading entry 1.
    rows: Vec<Option<Vec<S>>>,
    basis: Vec<usize>,
    relation_count: usize,
}

impl<S: Scalar> GradedPiece<S> {
    pub fn new(space: &Space, theta: &Theta<S>, k: u32) -> Result<Self, AlgebraError> {
        let cx = &space.complex;
        if theta.rows() != cx.krull_dim() || theta.cols() != cx.layer(1).len() {
            return Err(AlgebraError::ThetaShape {
                rows: theta.rows(),
                cols: theta.cols(),
                expected_rows: cx.krull_dim(),
                expected_cols: cx.layer(1).len(),
            });
        }
        let monomials = space.basis(k);
        let column: HashMap<usize, usize> = monomials.iter().enumerate().map(|(c, &m)| (m, c)).collect();
        let n = monomials.len();
        let mut piece = GradedPiece {
            space: space.clone(),
            k,
            monomials,
            column,
            rows: vec![None; n],
            basis: Vec::new(),
            relation_count: 0,
        };
        let mut rank = 0;
        if k > 0 && n > 0 {
            'outer: for m in space.basis(k - 1) {
                for i in 0..theta.rows() {
                    piece.relation_count += 1;
                    let mut v = vec![S::zero(); n];
                    for (j, th) in theta.row(i).iter().enumerate() {
                        if th.is_zero() {
                            continue;
                        }
                        if let Some(p) = cx.multiply(1, j, k - 1, m) {
                            let c = *piece.column.get(&p).ok_or(AlgebraError::NotInSpace { height: k })?;
                            v[c] = v[c].clone() + th.clone();
                        }
                    }
                    if piece.insert(v)? {
                        rank += 1;
                        if rank == n {
                            break 'outer;
                        }
                    }
                }
            }
        }
        piece.basis = (0..n).filter(|&c| piece.rows[c].is_none()).collect();
        Ok(piece)
    }

    fn reduce_in_place(&self, v: &mut [S]) {
        for c in 0..v.len() {
            if v[c].is_zero() {
                continue;
            }
            if let Some(row) = &self.rows[c] {
                let f = v[c].clone();
                for (t, r) in v[c..].iter_mut().zip(row) {
                    if !r.is_zero() {
                        *t = t.clone() - f.clone() * r.clone();
                    }
                }
            }
        }
    }

    /// Adds a relation; returns whether the rank grew.
    fn insert(&mut self, mut v: Vec<S>) -> Result<bool, AlgebraError> {
        self.reduce_in_place(&mut v);
        let Some(c) = v.iter().position(|x| !x.is_zero()) else { return Ok(false) };
        let inv = v[c].inverse().ok_or(AlgebraError::NoInvertiblePivot(c))?;
        let row: Vec<S> = v[c..].iter().map(|x| x.clone() * inv.clone()).collect();
        self.rows[c] = Some(row);
        Ok(true)
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn rank(&self) -> usize {
        self.monomials.len() - self.basis.len()
    }

    /// Layer indices of all monomials of the piece.
    pub fn monomials(&self) -> &[usize] {
        &self.monomials
    }

    pub fn relation_count(&self) -> usize {
        self.relation_count
    }

    /// Layer indices of the monomials forming the quotient basis.
    pub fn basis_monomials(&self) -> Vec<usize> {
        self.basis.iter().map(|&c| self.monomials[c]).collect()
    }

    /// Quotient coordinates of a vector over [`Self::monomials`].
    pub fn reduce(&self, v: &[S]) -> Result<Vec<S>, AlgebraError> {
        if v.len() != self.monomials.len() {
            return Err(AlgebraError::Length { got: v.len(), expected: self.monomials.len() });
        }
        let mut v = v.to_vec();
        self.reduce_in_place(&mut v);
        Ok(self.basis.iter().map(|&c| v[c].clone()).collect())
    }

    /// Quotient coordinates of an element of the space.
    pub fn coords(&self, e: &Element<S>) -> Result<Vec<S>, AlgebraError> {
        if e.height != self.k {
            return Err(AlgebraError::HeightMismatch { got: e.height, expected: self.k });
        }
        let mut v = vec![S::zero(); self.monomials.len()];
        for (i, c) in &e.terms {
            let col = *self.column.get(i).ok_or(AlgebraError::NotInSpace { height: self.k })?;
            v[col] = v[col].clone() + c.clone();
        }
        self.reduce(&v)
    }

    pub fn is_zero_class(&self, e: &Element<S>) -> Result<bool, AlgebraError> {
        Ok(self.coords(e)?.iter().all(Scalar::is_zero))
    }

    /// Representative on the basis monomials.
    pub fn lift(&self, coords: &[S]) -> Element<S> {
        Element::collect(self.k, self.basis.iter().zip(coords).map(|(&c, x)| (self.monomials[c], x.clone())))
    }
}

/// Matrix of `a ↦ multiplier · a` from `src` to `dst` in quotient coordinates.
pub fn mult_operator<S: Scalar>(
    src: &GradedPiece<S>,
    multiplier: &Element<S>,
    dst: &GradedPiece<S>,
) -> Result<Matrix<S>, AlgebraError> {
    if src.k + multiplier.height != dst.k {
        return Err(AlgebraError::HeightMismatch { got: src.k + multiplier.height, expected: dst.k });
    }
    let cx = &src.space.complex;
    let mut cols = Vec::with_capacity(src.dim());
    for m in src.basis_monomials() {
        let prod = multiplier.mul(&Element::monomial(src.k, m), cx);
        cols.push(dst.coords(&prod)?);
    }
    Ok(Matrix::from_fn(dst.dim(), src.dim(), |i, j| cols[j][i].clone()))
}

/// Matrix of the inclusion `A^k(X, Y) → A^k(X)` followed by reduction.
pub fn natural_map<S: Scalar>(pair: &GradedPiece<S>, ring: &GradedPiece<S>) -> Result<Matrix<S>, AlgebraError> {
    if pair.k != ring.k {
        return Err(AlgebraError::HeightMismatch { got: pair.k, expected: ring.k });
    }
    let cols = pair
        .basis_monomials()
        .into_iter()
        .map(|m| ring.coords(&Element::monomial(pair.k, m)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Matrix::from_fn(ring.dim(), pair.dim(), |i, j| cols[j][i].clone()))
}

/// `dim A^k` for `k = 0..=kmax`.
pub fn hilbert_dims<S: Scalar>(space: &Space, theta: &Theta<S>, kmax: u32) -> Result<Vec<usize>, AlgebraError> {
    (0..=kmax).map(|k| GradedPiece::new(space, theta, k).map(|p| p.dim())).collect()
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::complex::LatticeComplex;
    use crate::geometry::Polytope;
    use crate::scalar::{FieldStream, Gf2_64};

    fn spaces(v: Vec<Vec<i64>>) -> (Space, Space) {
        let p = Polytope::new("p", v).unwrap();
        (
            Space::ring(Arc::new(LatticeComplex::from_polytope(&p, false))),
            Space::relative(Arc::new(LatticeComplex::from_polytope(&p, true))),
        )
    }

    #[test]
    fn segment_pieces() {
        let (ring, pair) = spaces(vec![vec![0], vec![2]]);
        let th = Theta::<Gf2_64>::generic(&ring.complex, &mut FieldStream::new(5));
        let a1 = GradedPiece::new(&ring, &th, 1).unwrap();
        assert_eq!((a1.monomials().len(), a1.dim()), (3, 1));
        let a2 = GradedPiece::new(&ring, &th, 2).unwrap();
        assert_eq!((a2.monomials().len(), a2.dim()), (5, 0));
        let m2 = GradedPiece::new(&pair, &th, 2).unwrap();
        assert_eq!((m2.monomials().len(), m2.relation_count(), m2.dim()), (3, 2, 1));
        assert_eq!(hilbert_dims(&ring, &th, 2).unwrap(), vec![1, 1, 0]);
        assert_eq!(hilbert_dims(&pair, &th, 2).unwrap(), vec![0, 1, 1]);
    }

    #[test]
    fn relations_reduce_to_zero() {
        let (_, pair) = spaces(vec![vec![0], vec![2]]);
        let th = Theta::<Gf2_64>::generic(&pair.complex, &mut FieldStream::new(6));
        let m2 = GradedPiece::new(&pair, &th, 2).unwrap();
        let interior = pair.complex.layer(1).find(&[1]).unwrap();
        let rel = Element::linear(th.row(0)).mul(&Element::monomial(1, interior), &pair.complex);
        assert!(m2.is_zero_class(&rel).unwrap());
        let b = m2.basis_monomials()[0];
        assert_eq!(m2.coords(&Element::monomial(2, b)).unwrap(), vec![Gf2_64::one()]);
    }

    #[test]
    fn unit_operator_is_identity() {
        let (ring, _) = spaces(vec![vec![-1, -1], vec![1, -1], vec![-1, 1], vec![1, 1]]);
        let th = Theta::<Gf2_64>::generic(&ring.complex, &mut FieldStream::new(7));
        let a1 = GradedPiece::new(&ring, &th, 1).unwrap();
        assert_eq!(a1.dim(), 6);
        let one = Element::one(&ring.complex);
        assert_eq!(mult_operator(&a1, &one, &a1).unwrap(), Matrix::identity(6));
    }

    #[test]
    fn reflexive_square_pair_dims() {
        let (_, pair) = spaces(vec![vec![-1, -1], vec![1, -1], vec![-1, 1], vec![1, 1]]);
        let th = Theta::<Gf2_64>::generic(&pair.complex, &mut FieldStream::new(8));
        assert_eq!(hilbert_dims(&pair, &th, 3).unwrap(), vec![0, 1, 6, 1]);
    }
}
