use std::sync::Arc;

use thiserror::Error;

use crate::complex::LatticeComplex;
use crate::scalar::{
    determinant, FieldStream, FiniteField, JetScalar, JetShape, Matrix, Scalar, ScalarError, UniRational,
    VarTag,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ThetaMode {
    Generic,
    /// Base rows extended by zeros at the apex column, plus one extra row with
    /// a 1 at the apex.
    PyramidSpecial { apex_column: usize },
    /// Columns in the set are multiplied by `t`.
    TScaled(Vec<usize>),
    /// The listed entries carry a jet variable each.
    JetLifted(Vec<VarTag>),
    /// Built from a larger Θ by keeping the columns of a subcomplex.
    Restricted,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ThetaError {
    #[error("row count {got} does not match the Krull dimension {expected}")]
    RowCount { got: usize, expected: usize },
    #[error("point {0:?} of the target has no column in the source")]
    MissingColumn(Vec<i64>),
    #[error("entry ({0}, {1}) is outside the matrix")]
    Entry(usize, usize),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// The l.s.o.p. coefficient matrix: row `i` is `θ_i = Σ_j θ_{ij} x_j` over
/// the height-1 elements `j` of a complex, in layer order.
#[derive(Clone, Debug, PartialEq)]
pub struct Theta<S> {
    pub matrix: Matrix<S>,
    pub mode: ThetaMode,
}

impl<S: Scalar> Theta<S> {
    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.cols()
    }

    pub fn entry(&self, i: usize, j: usize) -> &S {
        &self.matrix[(i, j)]
    }

    pub fn row(&self, i: usize) -> &[S] {
        self.matrix.row(i)
    }

    /// `det(Θ|σ)` with columns in the given order.
    pub fn minor(&self, cols: &[usize]) -> S {
        assert_eq!(cols.len(), self.rows(), "minor needs one column per row");
        determinant(&Matrix::from_fn(self.rows(), cols.len(), |i, j| self.matrix[(i, cols[j])].clone()))
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Theta<T> {
        Theta {
            matrix: Matrix::from_fn(self.rows(), self.cols(), |i, j| f(&self.matrix[(i, j)])),
            mode: self.mode.clone(),
        }
    }

    /// Θ on a complex whose height-1 points are a subset of `from`'s.
    pub fn restrict(&self, from: &LatticeComplex, to: &LatticeComplex) -> Result<Theta<S>, ThetaError> {
        let (src, dst) = (from.layer(1), to.layer(1));
        let cols = dst
            .points
            .iter()
            .map(|p| src.find(p).ok_or_else(|| ThetaError::MissingColumn(p.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Theta {
            matrix: Matrix::from_fn(self.rows(), cols.len(), |i, j| self.matrix[(i, cols[j])].clone()),
            mode: ThetaMode::Restricted,
        })
    }
}

impl<F: FiniteField> Theta<F> {
    /// Uniform random entries; `krull_dim` rows over `complex`'s height-1 elements.
    pub fn generic(complex: &LatticeComplex, stream: &mut FieldStream) -> Theta<F> {
        Self::random(complex.krull_dim(), complex.layer(1).len(), stream)
    }

    pub fn random(rows: usize, cols: usize, stream: &mut FieldStream) -> Theta<F> {
        Theta { matrix: Matrix::from_fn(rows, cols, |_, _| stream.sample()), mode: ThetaMode::Generic }
    }

    /// Θ for `pyr X` extending the base Θ on `X`; the apex column is `e_last`.
    pub fn pyramid_special(
        &self,
        base: &LatticeComplex,
        pyr: &LatticeComplex,
        stream: &mut FieldStream,
    ) -> Result<Theta<F>, ThetaError> {
        if self.rows() != base.krull_dim() {
            return Err(ThetaError::RowCount { got: self.rows(), expected: base.krull_dim() });
        }
        let rows = self.rows() + 1;
        let (bl, pl) = (base.layer(1), pyr.layer(1));
        let mut apex = None;
        let mut src = Vec::with_capacity(pl.len());
        for p in &pl.points {
            let (last, head) = p.split_last().expect("pyramid points have a last coordinate");
            match (*last, bl.find(head)) {
                (0, Some(j)) => src.push(Some(j)),
                (1, _) if head.iter().all(|&c| c == 0) => {
                    apex = Some(src.len());
                    src.push(None);
                }
                _ => return Err(ThetaError::MissingColumn(p.clone())),
            }
        }
        let apex_column = apex.ok_or_else(|| ThetaError::MissingColumn(vec![]))?;
        let extra: Vec<F> = stream.sample_vec(pl.len());
        let matrix = Matrix::from_fn(rows, pl.len(), |i, j| match (src[j], i + 1 == rows) {
            (None, true) => F::one(),
            (None, false) => F::zero(),
            (Some(_), true) => extra[j],
            (Some(b), false) => self.matrix[(i, b)],
        });
        Ok(Theta { matrix, mode: ThetaMode::PyramidSpecial { apex_column } })
    }

    /// `θ_{ij}·t` on the columns in `v`, `θ_{ij}` elsewhere.
    pub fn t_scaled(&self, v: &[usize]) -> Theta<UniRational<F>> {
        let t = UniRational::<F>::t();
        let mut m = self.map(|&x| UniRational::constant(x));
        for i in 0..m.rows() {
            for &j in v {
                m.matrix[(i, j)] = m.matrix[(i, j)].clone() * t.clone();
            }
        }
        m.mode = ThetaMode::TScaled(v.to_vec());
        m
    }

    /// Lifts the listed entries to `θ_{ij} + ε_{ij}` with the given caps.
    pub fn jet_lifted(&self, vars: &[VarTag], caps: &[u32]) -> Result<Theta<JetScalar<F>>, ThetaError> {
        for &(i, j) in vars {
            if i >= self.rows() || j >= self.cols() {
                return Err(ThetaError::Entry(i, j));
            }
        }
        let shape: Arc<JetShape> = JetShape::new(vars.to_vec(), caps.to_vec());
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                let var = vars.contains(&(i, j)).then_some((i, j));
                out.push(JetScalar::lift(self.matrix[(i, j)], var, &shape)?);
            }
        }
        let mut it = out.into_iter();
        let matrix = Matrix::from_fn(self.rows(), self.cols(), |_, _| it.next().unwrap());
        Ok(Theta { matrix, mode: ThetaMode::JetLifted(vars.to_vec()) })
    }
}

/// A generic linear form `ℓ = Σ_j ℓ_j x_j`, sampled like a θ row.
pub fn random_linear_form<F: FiniteField>(complex: &LatticeComplex, stream: &mut FieldStream) -> Vec<F> {
    stream.sample_vec(complex.layer(1).len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Polytope;
    use crate::scalar::Gf2_64;

    fn seg() -> Polytope {
        Polytope::new("seg", vec![vec![0], vec![2]]).unwrap()
    }

    #[test]
    fn generic_shape() {
        let x = LatticeComplex::from_polytope(&seg(), false);
        let th = Theta::<Gf2_64>::generic(&x, &mut FieldStream::new(1));
        assert_eq!((th.rows(), th.cols()), (2, 3));
        let again = Theta::<Gf2_64>::generic(&x, &mut FieldStream::new(1));
        assert_eq!(th, again);
    }

    #[test]
    fn pyramid_apex_column() {
        let x = LatticeComplex::from_polytope(&seg(), false);
        let px = x.pyramid();
        let mut s = FieldStream::new(2);
        let th = Theta::<Gf2_64>::generic(&x, &mut s);
        let pt = th.pyramid_special(&x, &px, &mut s).unwrap();
        assert_eq!((pt.rows(), pt.cols()), (3, 4));
        let ThetaMode::PyramidSpecial { apex_column } = pt.mode else { panic!() };
        let col: Vec<Gf2_64> = (0..3).map(|i| *pt.entry(i, apex_column)).collect();
        assert_eq!(col, vec![Gf2_64::zero(), Gf2_64::zero(), Gf2_64::one()]);
    }

    #[test]
    fn t_scaling_vanishes_at_zero() {
        let x = LatticeComplex::from_polytope(&seg(), false);
        let th = Theta::<Gf2_64>::generic(&x, &mut FieldStream::new(3));
        let tt = th.t_scaled(&[2]);
        assert_eq!(tt.entry(0, 2).eval(Gf2_64::zero()), Some(Gf2_64::zero()));
        assert_eq!(tt.entry(1, 1).eval(Gf2_64::zero()), Some(*th.entry(1, 1)));
    }
}
