use std::collections::BTreeMap;

use crate::complex::LatticeComplex;
use crate::scalar::Scalar;

/// A formal combination of semigroup elements of one height, by layer index.
#[derive(Clone, Debug, PartialEq)]
pub struct Element<S> {
    pub height: u32,
    pub terms: Vec<(usize, S)>,
}

impl<S: Scalar> Element<S> {
    pub fn zero(height: u32) -> Self {
        Element { height, terms: Vec::new() }
    }

    /// The unit `x_0` of the ring.
    pub fn one(complex: &LatticeComplex) -> Self {
        Element { height: 0, terms: vec![(complex.layer(0).find(&vec![0; complex.ambient_dim()]).unwrap(), S::one())] }
    }

    pub fn monomial(height: u32, idx: usize) -> Self {
        Element { height, terms: vec![(idx, S::one())] }
    }

    /// `Σ_j c_j x_j` over the height-1 elements.
    pub fn linear(coeffs: &[S]) -> Self {
        Self::collect(1, coeffs.iter().cloned().enumerate())
    }

    /// Sums duplicate indices, drops zeros, sorts by index.
    pub fn collect(height: u32, terms: impl IntoIterator<Item = (usize, S)>) -> Self {
        let mut acc: BTreeMap<usize, S> = BTreeMap::new();
        for (i, c) in terms {
            match acc.remove(&i) {
                Some(prev) => {
                    acc.insert(i, prev + c);
                }
                None => {
                    acc.insert(i, c);
                }
            }
        }
        Element { height, terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_zero())
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::collect(self.height, self.terms.iter().map(|(i, x)| (*i, x.clone() * c.clone())))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.height, other.height, "adding elements of different heights");
        Self::collect(self.height, self.terms.iter().chain(&other.terms).cloned())
    }

    /// Product in `k[X]`; terms from different cells vanish.
    pub fn mul(&self, other: &Self, complex: &LatticeComplex) -> Self {
        let h = self.height + other.height;
        let mut out = Vec::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if let Some(ab) = complex.multiply(self.height, *a, other.height, *b) {
                    out.push((ab, ca.clone() * cb.clone()));
                }
            }
        }
        Self::collect(h, out)
    }

    pub fn pow(&self, n: u32, complex: &LatticeComplex) -> Self {
        let mut acc = Element::one(complex);
        for _ in 0..n {
            acc = acc.mul(self, complex);
        }
        acc
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Element<T> {
        Element::collect(self.height, self.terms.iter().map(|(i, c)| (*i, f(c))))
    }
}
