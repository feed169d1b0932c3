//! Small exact rational linear algebra on integer input.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};

type Q = Ratio<i128>;

/// Reduced row echelon form; returns the matrix and its pivot columns.
fn rref(rows: &[Vec<i64>], ncols: usize) -> (Vec<Vec<Q>>, Vec<usize>) {
    let mut m: Vec<Vec<Q>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| Q::from_integer(x as i128)).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c];
                for j in 0..ncols {
                    let v = m[r][j];
                    m[i][j] -= f * v;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    (m, pivots)
}

/// Pivot columns of the row echelon form.
pub fn pivot_columns(rows: &[Vec<i64>], ncols: usize) -> Vec<usize> {
    if rows.is_empty() {
        return Vec::new();
    }
    rref(rows, ncols).1
}

pub fn rank(rows: &[Vec<i64>], ncols: usize) -> usize {
    if rows.is_empty() {
        return 0;
    }
    rref(rows, ncols).1.len()
}

/// Scales a rational vector to a primitive integer vector with the same direction.
fn primitive(v: &[Q]) -> Vec<i64> {
    let l = v.iter().fold(1i128, |acc, x| acc.lcm(x.denom()));
    let ints: Vec<i128> = v.iter().map(|x| (x * Q::from_integer(l)).to_integer()).collect();
    let g = ints.iter().fold(0i128, |acc, x| acc.gcd(x));
    let g = if g.is_zero() { 1 } else { g };
    ints.iter().map(|x| i64::try_from(x / g).expect("coordinate overflow")).collect()
}

/// Primitive integer basis of `{x : rows · x = 0}`.
pub fn integer_kernel(rows: &[Vec<i64>], ncols: usize) -> Vec<Vec<i64>> {
    if rows.is_empty() {
        return (0..ncols)
            .map(|i| (0..ncols).map(|j| i64::from(i == j)).collect())
            .collect();
    }
    let (m, pivots) = rref(rows, ncols);
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Q::zero(); ncols];
        v[free] = Q::one();
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = -m[r][free];
        }
        out.push(primitive(&v));
    }
    out
}

/// Solves `a x = b` for square invertible `a`, exactly.
#[derive(Debug)]
pub struct RationalSolver {
    inv: Vec<Vec<Q>>,
}

impl RationalSolver {
    pub fn new(a: &[Vec<i64>]) -> Option<Self> {
        let n = a.len();
        let aug: Vec<Vec<i64>> = a
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row = r.clone();
                row.extend((0..n).map(|j| i64::from(i == j)));
                row
            })
            .collect();
        let (m, pivots) = rref(&aug, 2 * n);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(RationalSolver { inv: m.into_iter().map(|r| r[n..].to_vec()).collect() })
    }

    /// The solution if it is integral.
    pub fn solve_integral(&self, b: &[i128]) -> Option<Vec<i64>> {
        self.inv
            .iter()
            .map(|row| {
                let s: Q = row.iter().zip(b).map(|(x, &y)| x * Q::from_integer(y)).sum();
                if s.is_integer() {
                    i64::try_from(s.to_integer()).ok()
                } else {
                    None
                }
            })
            .collect()
    }
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn gcd_all(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |acc, x| acc.gcd(x)).abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_is_primitive_and_annihilated() {
        let rows = vec![vec![2, 4, 6]];
        let k = integer_kernel(&rows, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!(dot(&rows[0], v), 0);
            assert_eq!(gcd_all(v), 1);
        }
    }

    #[test]
    fn integral_solve() {
        let s = RationalSolver::new(&[vec![2, 0], vec![0, 1]]).unwrap();
        assert_eq!(s.solve_integral(&[4, 3]), Some(vec![2, 3]));
        assert_eq!(s.solve_integral(&[3, 3]), None);
        assert!(RationalSolver::new(&[vec![1, 1], vec![2, 2]]).is_none());
    }
}
