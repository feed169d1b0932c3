//! Truncated multivariate Taylor jets over a finite field.
//!
//! A jet over variables `v_1..v_n` with caps `c_1..c_n` is a polynomial in
//! `ε_1..ε_n` modulo `ε_i^{c_i + 1}`. Coefficients are stored densely over the
//! exponent box, index `Σ e_i · stride_i` with `stride_1 = 1`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::{FiniteField, Scalar, ScalarError};

/// A differentiation variable: the entry `(row, column)` of the θ matrix.
pub type VarTag = (usize, usize);

#[derive(Debug, PartialEq, Eq)]
pub struct JetShape {
    vars: Vec<VarTag>,
    caps: Vec<u32>,
    strides: Vec<usize>,
    size: usize,
    /// Exponent vector of every box index.
    exps: Vec<Vec<u32>>,
}

impl JetShape {
    pub fn new(vars: Vec<VarTag>, caps: Vec<u32>) -> Arc<JetShape> {
        assert_eq!(vars.len(), caps.len());
        assert!(caps.iter().all(|&c| c >= 1), "jet caps must be at least 1");
        let mut strides = Vec::with_capacity(caps.len());
        let mut size = 1usize;
        for &c in &caps {
            strides.push(size);
            size *= c as usize + 1;
        }
        let exps = (0..size)
            .map(|mut idx| {
                caps.iter()
                    .map(|&c| {
                        let e = idx % (c as usize + 1);
                        idx /= c as usize + 1;
                        e as u32
                    })
                    .collect()
            })
            .collect();
        Arc::new(JetShape { vars, caps, strides, size, exps })
    }

    pub fn vars(&self) -> &[VarTag] {
        &self.vars
    }

    pub fn caps(&self) -> &[u32] {
        &self.caps
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn position(&self, tag: VarTag) -> Option<usize> {
        self.vars.iter().position(|&v| v == tag)
    }

    fn index_of(&self, exps: &[u32]) -> usize {
        exps.iter().zip(&self.strides).map(|(&e, &s)| e as usize * s).sum()
    }
}

/// Truncated jet; a jet without a shape is a constant.
#[derive(Clone)]
pub struct JetScalar<F: FiniteField> {
    shape: Option<Arc<JetShape>>,
    coeffs: Vec<F>,
}

impl<F: FiniteField> JetScalar<F> {
    pub fn constant(c: F) -> Self {
        JetScalar { shape: None, coeffs: vec![c] }
    }

    /// `base` as a constant when `var` is `None`, otherwise `base + ε_var`.
    pub fn lift(base: F, var: Option<VarTag>, shape: &Arc<JetShape>) -> Result<Self, ScalarError> {
        let Some(tag) = var else {
            return Ok(Self::constant(base));
        };
        let pos = shape.position(tag).ok_or(ScalarError::UnknownVariable(tag))?;
        let mut coeffs = vec![F::zero(); shape.size];
        coeffs[0] = base;
        coeffs[shape.strides[pos]] = F::one();
        Ok(JetScalar { shape: Some(shape.clone()), coeffs })
    }

    pub fn shape(&self) -> Option<&Arc<JetShape>> {
        self.shape.as_ref()
    }

    pub fn constant_term(&self) -> F {
        self.coeffs[0]
    }

    /// Raw coefficient of `Π ε_v^{e_v}`; variables absent from `exps` have exponent 0.
    pub fn coefficient(&self, exps: &[(VarTag, u32)]) -> Result<F, ScalarError> {
        let Some(shape) = &self.shape else {
            return Ok(if exps.iter().all(|&(_, e)| e == 0) { self.coeffs[0] } else { F::zero() });
        };
        let mut full = vec![0u32; shape.vars.len()];
        for &(tag, e) in exps {
            let pos = shape.position(tag).ok_or(ScalarError::UnknownVariable(tag))?;
            if e > shape.caps[pos] {
                return Err(ScalarError::OutsideCaps);
            }
            full[pos] += e;
        }
        if full.iter().zip(&shape.caps).any(|(&e, &c)| e > c) {
            return Err(ScalarError::OutsideCaps);
        }
        Ok(self.coeffs[shape.index_of(&full)])
    }

    /// Mixed partial `∂_E` at the base point, i.e. `E! · coeff_E`.
    pub fn partial(&self, exps: &[(VarTag, u32)]) -> Result<F, ScalarError> {
        let p = F::CHARACTERISTIC;
        let mut fact = F::one();
        for &(_, e) in exps {
            if e as u64 >= p {
                return Err(ScalarError::OrderTooHigh { order: e, characteristic: p });
            }
            for k in 2..=e {
                fact = fact * F::from_int(k as i64);
            }
        }
        Ok(fact * self.coefficient(exps)?)
    }

    fn broadcast(&self, shape: &Arc<JetShape>) -> Vec<F> {
        match &self.shape {
            Some(s) => {
                assert!(Arc::ptr_eq(s, shape) || **s == **shape, "jets over different shapes");
                self.coeffs.clone()
            }
            None => {
                let mut v = vec![F::zero(); shape.size];
                v[0] = self.coeffs[0];
                v
            }
        }
    }

    fn common_shape(&self, other: &Self) -> Option<Arc<JetShape>> {
        self.shape.clone().or_else(|| other.shape.clone())
    }

    fn zip_with(self, rhs: Self, op: impl Fn(F, F) -> F) -> Self {
        match self.common_shape(&rhs) {
            None => JetScalar::constant(op(self.coeffs[0], rhs.coeffs[0])),
            Some(shape) => {
                let a = self.broadcast(&shape);
                let b = rhs.broadcast(&shape);
                let coeffs = a.into_iter().zip(b).map(|(x, y)| op(x, y)).collect();
                JetScalar { shape: Some(shape), coeffs }
            }
        }
    }
}

impl<F: FiniteField> fmt::Debug for JetScalar<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_hex()).collect();
        write!(f, "Jet[{}]", parts.join(","))
    }
}

impl<F: FiniteField> PartialEq for JetScalar<F> {
    fn eq(&self, other: &Self) -> bool {
        match self.common_shape(other) {
            None => self.coeffs[0] == other.coeffs[0],
            Some(shape) => self.broadcast(&shape) == other.broadcast(&shape),
        }
    }
}

impl<F: FiniteField> Add for JetScalar<F> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.zip_with(rhs, |x, y| x + y)
    }
}

impl<F: FiniteField> Sub for JetScalar<F> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.zip_with(rhs, |x, y| x - y)
    }
}

impl<F: FiniteField> Neg for JetScalar<F> {
    type Output = Self;
    fn neg(self) -> Self {
        JetScalar { shape: self.shape, coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl<F: FiniteField> Mul for JetScalar<F> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        match (&self.shape, &rhs.shape) {
            (None, None) => JetScalar::constant(self.coeffs[0] * rhs.coeffs[0]),
            (None, Some(_)) => {
                let c = self.coeffs[0];
                JetScalar { shape: rhs.shape, coeffs: rhs.coeffs.into_iter().map(|x| c * x).collect() }
            }
            (Some(_), None) => {
                let c = rhs.coeffs[0];
                JetScalar { shape: self.shape, coeffs: self.coeffs.into_iter().map(|x| x * c).collect() }
            }
            (Some(shape), Some(_)) => {
                let shape = shape.clone();
                let b = rhs.broadcast(&shape);
                let mut out = vec![F::zero(); shape.size];
                for (i, &x) in self.coeffs.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    let ei = &shape.exps[i];
                    for (j, &y) in b.iter().enumerate() {
                        if y.is_zero() {
                            continue;
                        }
                        let ej = &shape.exps[j];
                        if ei.iter().zip(ej).zip(&shape.caps).all(|((a, b), c)| a + b <= *c) {
                            out[i + j] = out[i + j] + x * y;
                        }
                    }
                }
                JetScalar { shape: Some(shape), coeffs: out }
            }
        }
    }
}

impl<F: FiniteField> Scalar for JetScalar<F> {
    fn zero() -> Self {
        JetScalar::constant(F::zero())
    }
    fn one() -> Self {
        JetScalar::constant(F::one())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
    fn inverse(&self) -> Option<Self> {
        let c0inv = self.coeffs[0].inverse()?;
        let Some(shape) = &self.shape else {
            return Some(JetScalar::constant(c0inv));
        };
        // Box indices are increasing along the componentwise order, so every
        // proper sub-index of `e` is already solved when `e` is reached.
        let mut inv = vec![F::zero(); shape.size];
        inv[0] = c0inv;
        for e in 1..shape.size {
            let ee = &shape.exps[e];
            let mut acc = F::zero();
            for a in 1..=e {
                let ea = &shape.exps[a];
                if self.coeffs[a].is_zero() || ea.iter().zip(ee).any(|(x, y)| x > y) {
                    continue;
                }
                acc = acc + self.coeffs[a] * inv[e - a];
            }
            inv[e] = -(acc * c0inv);
        }
        Some(JetScalar { shape: Some(shape.clone()), coeffs: inv })
    }
    fn from_int(n: i64) -> Self {
        JetScalar::constant(F::from_int(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{FieldStream, Gf2_64, Gf3};

    #[test]
    fn lift_constant_and_variable() {
        let shape = JetShape::new(vec![(0, 0)], vec![1]);
        let c = Gf2_64::new(7);
        let k = JetScalar::lift(c, None, &shape).unwrap();
        assert_eq!(k.coefficient(&[((0, 0), 1)]).unwrap(), Gf2_64::zero());
        let v = JetScalar::lift(c, Some((0, 0)), &shape).unwrap();
        assert_eq!(v.coefficient(&[]).unwrap(), c);
        assert_eq!(v.coefficient(&[((0, 0), 1)]).unwrap(), Gf2_64::one());
        assert_eq!(JetScalar::lift(c, Some((1, 0)), &shape).unwrap_err(), ScalarError::UnknownVariable((1, 0)));
    }

    #[test]
    fn char2_square_kills_cross_term() {
        let shape = JetShape::new(vec![(0, 0)], vec![1]);
        let c = Gf2_64::new(0x1234);
        let v = JetScalar::lift(c, Some((0, 0)), &shape).unwrap();
        let sq = v.clone() * v;
        assert_eq!(sq, JetScalar::constant(c * c));
    }

    #[test]
    fn bilinear_and_square_partials() {
        let shape = JetShape::new(vec![(0, 0), (1, 1)], vec![1, 1]);
        let a = JetScalar::lift(Gf2_64::new(3), Some((0, 0)), &shape).unwrap();
        let b = JetScalar::lift(Gf2_64::new(5), Some((1, 1)), &shape).unwrap();
        assert_eq!((a * b).partial(&[((0, 0), 1), ((1, 1), 1)]).unwrap(), Gf2_64::one());

        let shape3 = JetShape::new(vec![(0, 0)], vec![2]);
        let x = JetScalar::lift(Gf3::from_int(2), Some((0, 0)), &shape3).unwrap();
        assert_eq!((x.clone() * x).partial(&[((0, 0), 2)]).unwrap(), Gf3::from_int(2));
    }

    #[test]
    fn order_at_characteristic_is_rejected() {
        let shape = JetShape::new(vec![(0, 0)], vec![3]);
        let x = JetScalar::lift(Gf3::one(), Some((0, 0)), &shape).unwrap();
        assert!(matches!(x.partial(&[((0, 0), 3)]), Err(ScalarError::OrderTooHigh { .. })));
    }

    #[test]
    fn inverse_round_trip() {
        let shape = JetShape::new(vec![(0, 0), (0, 1), (1, 0)], vec![1, 2, 1]);
        let mut s = FieldStream::new(4);
        let coeffs: Vec<Gf2_64> = s.sample_vec(shape.size());
        let mut j = JetScalar { shape: Some(shape.clone()), coeffs };
        j.coeffs[0] = s.sample_nonzero();
        let inv = j.inverse().unwrap();
        assert_eq!(j * inv, JetScalar::one());
    }
}
