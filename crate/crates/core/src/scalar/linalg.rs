//! Dense exact linear algebra over any [`Scalar`].

use thiserror::Error;

use super::Scalar;

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        let n = rows.len();
        Matrix { rows: n, cols, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, x: &[S]) -> Vec<S> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    pub fn mul(&self, rhs: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.cols, rhs.rows);
        Matrix::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).fold(S::zero(), |acc, k| acc + self[(i, k)].clone() * rhs[(k, j)].clone())
        })
    }

    pub fn transpose(&self) -> Matrix<S> {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// Rank by forward elimination; entries must be zero or units.
    pub fn rank(&self) -> Result<usize, LinAlgError> {
        let mut m = self.clone();
        let mut zero_rhs = vec![S::zero(); self.rows];
        let pivots = eliminate(&mut m, &mut zero_rhs)?;
        Ok(pivots.len())
    }
}

impl<S> std::ops::Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> std::ops::IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinAlgError {
    #[error("inconsistent linear system")]
    Inconsistent,
    #[error("rank {rank} below column count {cols}")]
    RankDeficient { rank: usize, cols: usize },
    #[error("column {0} has nonzero entries but no invertible pivot")]
    NoInvertiblePivot(usize),
    #[error("dimension mismatch: {0}")]
    Shape(String),
}

#[derive(Clone, Debug, PartialEq)]
pub enum SolveOutcome<S> {
    Unique(Vec<S>),
    /// Solution set is `particular + span(kernel)`.
    Underdetermined { particular: Vec<S>, kernel: Vec<Vec<S>> },
}

impl<S> SolveOutcome<S> {
    pub fn unique(self) -> Option<Vec<S>> {
        match self {
            SolveOutcome::Unique(x) => Some(x),
            SolveOutcome::Underdetermined { .. } => None,
        }
    }
}

/// Gauss-Jordan elimination in place; returns pivot columns, one per pivot row.
///
/// The pivot in each column is the first remaining row whose entry is a unit.
fn eliminate<S: Scalar>(m: &mut Matrix<S>, rhs: &mut [S]) -> Result<Vec<usize>, LinAlgError> {
    let (rows, cols) = (m.rows, m.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let mut found = None;
        let mut saw_nonzero = false;
        for i in r..rows {
            let e = &m[(i, c)];
            if e.is_zero() {
                continue;
            }
            saw_nonzero = true;
            if let Some(inv) = e.inverse() {
                found = Some((i, inv));
                break;
            }
        }
        let Some((p, inv)) = found else {
            if saw_nonzero {
                return Err(LinAlgError::NoInvertiblePivot(c));
            }
            continue;
        };
        if p != r {
            for j in 0..cols {
                m.data.swap(p * cols + j, r * cols + j);
            }
            rhs.swap(p, r);
        }
        for j in c..cols {
            m[(r, j)] = m[(r, j)].clone() * inv.clone();
        }
        rhs[r] = rhs[r].clone() * inv;
        for i in 0..rows {
            if i == r || m[(i, c)].is_zero() {
                continue;
            }
            let f = m[(i, c)].clone();
            for j in c..cols {
                let v = m[(r, j)].clone();
                if !v.is_zero() {
                    m[(i, j)] = m[(i, j)].clone() - f.clone() * v;
                }
            }
            rhs[i] = rhs[i].clone() - f * rhs[r].clone();
        }
        pivots.push(c);
        r += 1;
    }
    Ok(pivots)
}

/// Solves `A x = b`.
///
/// With `want_kernel` false a rank-deficient system is an error; otherwise the
/// particular solution (free variables zero) and a kernel basis are returned.
pub fn linear_solve<S: Scalar>(
    a: &Matrix<S>,
    b: &[S],
    want_kernel: bool,
) -> Result<SolveOutcome<S>, LinAlgError> {
    if b.len() != a.rows {
        return Err(LinAlgError::Shape(format!("{} rows but rhs of length {}", a.rows, b.len())));
    }
    let mut m = a.clone();
    let mut rhs = b.to_vec();
    let pivots = eliminate(&mut m, &mut rhs)?;
    if rhs[pivots.len()..].iter().any(|x| !x.is_zero()) {
        return Err(LinAlgError::Inconsistent);
    }
    let cols = a.cols;
    let mut particular = vec![S::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        particular[c] = rhs[r].clone();
    }
    if pivots.len() == cols {
        return Ok(SolveOutcome::Unique(particular));
    }
    if !want_kernel {
        return Err(LinAlgError::RankDeficient { rank: pivots.len(), cols });
    }
    let mut kernel = Vec::new();
    let mut is_pivot = vec![false; cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![S::zero(); cols];
        v[free] = S::one();
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = -m[(r, free)].clone();
        }
        kernel.push(v);
    }
    Ok(SolveOutcome::Underdetermined { particular, kernel })
}

/// Determinant by the Leibniz expansion; division free, so valid over any
/// commutative ring. Intended for the small minors `det(Θ|σ)`.
pub fn determinant<S: Scalar>(m: &Matrix<S>) -> S {
    assert_eq!(m.rows, m.cols, "determinant of a non-square matrix");
    let n = m.rows;
    assert!(n <= 8, "Leibniz expansion limited to n <= 8");
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = S::zero();
    permute(&mut perm, 0, false, &mut |p, odd| {
        let term = p.iter().enumerate().fold(S::one(), |acc, (i, &j)| acc * m[(i, j)].clone());
        total = if odd { total.clone() - term } else { total.clone() + term };
    });
    total
}

fn permute(perm: &mut Vec<usize>, k: usize, odd: bool, f: &mut impl FnMut(&[usize], bool)) {
    if k == perm.len() {
        f(perm, odd);
        return;
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        permute(perm, k + 1, odd ^ (i != k), f);
        perm.swap(k, i);
    }
}
