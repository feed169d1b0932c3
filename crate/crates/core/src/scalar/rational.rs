//! Univariate rational functions `f(t)/g(t)` over a finite field.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{FiniteField, Scalar};

/// Dense univariate polynomial, lowest degree first, no trailing zeros.
type Poly<F> = Vec<F>;

fn trim<F: FiniteField>(p: &mut Poly<F>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn poly_add<F: FiniteField>(a: &[F], b: &[F]) -> Poly<F> {
    let n = a.len().max(b.len());
    let mut out: Poly<F> = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or_else(F::zero);
            let y = b.get(i).copied().unwrap_or_else(F::zero);
            x + y
        })
        .collect();
    trim(&mut out);
    out
}

fn poly_neg<F: FiniteField>(a: &[F]) -> Poly<F> {
    a.iter().map(|&c| -c).collect()
}

fn poly_mul<F: FiniteField>(a: &[F], b: &[F]) -> Poly<F> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![F::zero(); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = out[i + j] + x * y;
        }
    }
    trim(&mut out);
    out
}

fn poly_scale<F: FiniteField>(a: &[F], c: F) -> Poly<F> {
    let mut out: Poly<F> = a.iter().map(|&x| x * c).collect();
    trim(&mut out);
    out
}

/// Quotient and remainder; `b` must be nonzero.
fn poly_divrem<F: FiniteField>(a: &[F], b: &[F]) -> (Poly<F>, Poly<F>) {
    let lead_inv = b.last().expect("division by zero polynomial").inverse().unwrap();
    let mut rem: Poly<F> = a.to_vec();
    trim(&mut rem);
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let mut quot = vec![F::zero(); rem.len() - b.len() + 1];
    while rem.len() >= b.len() && !rem.is_empty() {
        let shift = rem.len() - b.len();
        let c = *rem.last().unwrap() * lead_inv;
        quot[shift] = c;
        for (i, &y) in b.iter().enumerate() {
            rem[shift + i] = rem[shift + i] - c * y;
        }
        trim(&mut rem);
    }
    trim(&mut quot);
    (quot, rem)
}

/// Monic gcd.
fn poly_gcd<F: FiniteField>(a: &[F], b: &[F]) -> Poly<F> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let (_, r) = poly_divrem(&x, &y);
        x = y;
        y = r;
    }
    match x.last() {
        Some(lead) => {
            let inv = lead.inverse().unwrap();
            poly_scale(&x, inv)
        }
        None => x,
    }
}

fn poly_eval<F: FiniteField>(p: &[F], t: F) -> F {
    p.iter().rev().fold(F::zero(), |acc, &c| acc * t + c)
}

/// Element of `GF(q)(t)` kept in lowest terms with a monic denominator.
#[derive(Clone, PartialEq, Eq)]
pub struct UniRational<F: FiniteField> {
    num: Poly<F>,
    den: Poly<F>,
}

impl<F: FiniteField> UniRational<F> {
    /// Builds `num/den` in lowest terms. Panics if `den` is zero.
    pub fn new(num: Vec<F>, den: Vec<F>) -> Self {
        let mut num = num;
        let mut den = den;
        trim(&mut num);
        trim(&mut den);
        assert!(!den.is_empty(), "zero denominator");
        if num.is_empty() {
            return Self::zero();
        }
        let g = poly_gcd(&num, &den);
        let (mut num, _) = poly_divrem(&num, &g);
        let (mut den, _) = poly_divrem(&den, &g);
        let lead_inv = den.last().unwrap().inverse().unwrap();
        num = poly_scale(&num, lead_inv);
        den = poly_scale(&den, lead_inv);
        UniRational { num, den }
    }

    pub fn constant(c: F) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            UniRational { num: vec![c], den: vec![F::one()] }
        }
    }

    /// The deformation parameter `t`.
    pub fn t() -> Self {
        UniRational { num: vec![F::zero(), F::one()], den: vec![F::one()] }
    }

    pub fn numerator(&self) -> &[F] {
        &self.num
    }

    pub fn denominator(&self) -> &[F] {
        &self.den
    }

    /// Value at `t = x`, or `None` when the denominator vanishes there.
    pub fn eval(&self, x: F) -> Option<F> {
        let d = poly_eval(&self.den, x);
        d.inverse().map(|inv| poly_eval(&self.num, x) * inv)
    }

    pub fn has_pole_at_zero(&self) -> bool {
        self.den[0].is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.len() <= 1 && self.den.len() == 1
    }
}

impl<F: FiniteField> fmt::Debug for UniRational<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |p: &[F]| -> String {
            let parts: Vec<String> = p.iter().map(|c| c.to_hex()).collect();
            format!("[{}]", parts.join(","))
        };
        write!(f, "{}/{}", show(&self.num), show(&self.den))
    }
}

impl<F: FiniteField> Add for UniRational<F> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        if self.den == rhs.den {
            return UniRational::new(poly_add(&self.num, &rhs.num), self.den);
        }
        let num = poly_add(&poly_mul(&self.num, &rhs.den), &poly_mul(&rhs.num, &self.den));
        UniRational::new(num, poly_mul(&self.den, &rhs.den))
    }
}

impl<F: FiniteField> Neg for UniRational<F> {
    type Output = Self;
    fn neg(self) -> Self {
        UniRational { num: poly_neg(&self.num), den: self.den }
    }
}

impl<F: FiniteField> Sub for UniRational<F> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<F: FiniteField> Mul for UniRational<F> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.num.is_empty() || rhs.num.is_empty() {
            return Self::zero();
        }
        UniRational::new(poly_mul(&self.num, &rhs.num), poly_mul(&self.den, &rhs.den))
    }
}

impl<F: FiniteField> Scalar for UniRational<F> {
    fn zero() -> Self {
        UniRational { num: Vec::new(), den: vec![F::one()] }
    }
    fn one() -> Self {
        Self::constant(F::one())
    }
    fn is_zero(&self) -> bool {
        self.num.is_empty()
    }
    fn inverse(&self) -> Option<Self> {
        if self.num.is_empty() {
            None
        } else {
            Some(UniRational::new(self.den.clone(), self.num.clone()))
        }
    }
    fn from_int(n: i64) -> Self {
        Self::constant(F::from_int(n))
    }
}
