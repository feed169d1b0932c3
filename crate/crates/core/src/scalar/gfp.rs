//! Odd-characteristic fields `GF(p^k)` stored as coefficient vectors over `GF(p)`.
//!
//! Moduli (irreducible over GF(p)):
//!
//! | field     | modulus              |
//! |-----------|----------------------|
//! | GF(3)     | prime field          |
//! | GF(5)     | prime field          |
//! | GF(3^32)  | x^32 + x^5 + 2       |
//! | GF(5^32)  | x^32 + x^16 + 2      |

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;

use super::{FiniteField, Scalar};

/// Element of `GF(P^K)`; entry `i` is the coefficient of `x^i`, reduced mod `P`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct GfPk<const P: u64, const K: usize>([u8; K]);

pub type Gf3 = GfPk<3, 1>;
pub type Gf5 = GfPk<5, 1>;
pub type Gf3_32 = GfPk<3, 32>;
pub type Gf5_32 = GfPk<5, 32>;

impl<const P: u64, const K: usize> GfPk<P, K> {
    /// `x^K` expressed in lower powers, as `(degree, coefficient)` pairs.
    fn tail() -> &'static [(usize, u8)] {
        match (P, K) {
            (3, 1) | (5, 1) => &[],
            (3, 32) => &[(5, 2), (0, 1)],
            (5, 32) => &[(16, 4), (0, 3)],
            _ => panic!("unsupported field GF({P}^{K})"),
        }
    }

    pub fn from_coeffs(coeffs: [u8; K]) -> Self {
        let mut c = coeffs;
        for x in c.iter_mut() {
            *x %= P as u8;
        }
        GfPk(c)
    }

    pub fn coeffs(&self) -> &[u8; K] {
        &self.0
    }
}

impl<const P: u64, const K: usize> Default for GfPk<P, K> {
    fn default() -> Self {
        GfPk([0; K])
    }
}

impl<const P: u64, const K: usize> fmt::Debug for GfPk<P, K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF{}^{}({})", P, K, self.to_hex())
    }
}

impl<const P: u64, const K: usize> Add for GfPk<P, K> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut out = [0u8; K];
        for i in 0..K {
            out[i] = ((self.0[i] as u64 + rhs.0[i] as u64) % P) as u8;
        }
        GfPk(out)
    }
}

impl<const P: u64, const K: usize> Neg for GfPk<P, K> {
    type Output = Self;
    fn neg(self) -> Self {
        let mut out = [0u8; K];
        for i in 0..K {
            out[i] = ((P - self.0[i] as u64) % P) as u8;
        }
        GfPk(out)
    }
}

impl<const P: u64, const K: usize> Sub for GfPk<P, K> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<const P: u64, const K: usize> Mul for GfPk<P, K> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut wide = vec![0u32; 2 * K - 1];
        for (i, &a) in self.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.0.iter().enumerate() {
                wide[i + j] += a as u32 * b as u32;
            }
        }
        let p = P as u32;
        for deg in (K..2 * K - 1).rev() {
            let c = wide[deg] % p;
            wide[deg] = 0;
            if c == 0 {
                continue;
            }
            for &(j, t) in Self::tail() {
                wide[deg - K + j] += c * t as u32;
            }
        }
        let mut out = [0u8; K];
        for i in 0..K {
            out[i] = (wide[i] % p) as u8;
        }
        GfPk(out)
    }
}

impl<const P: u64, const K: usize> Scalar for GfPk<P, K> {
    fn zero() -> Self {
        GfPk([0; K])
    }
    fn one() -> Self {
        let mut c = [0u8; K];
        c[0] = 1;
        GfPk(c)
    }
    fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let order = Self::order().expect("supported odd fields fit in u128");
        Some(self.pow(order - 2))
    }
    fn from_int(n: i64) -> Self {
        let mut c = [0u8; K];
        c[0] = n.rem_euclid(P as i64) as u8;
        GfPk(c)
    }
}

impl<const P: u64, const K: usize> FiniteField for GfPk<P, K> {
    const CHARACTERISTIC: u64 = P;
    const DEGREE: u32 = K as u32;

    fn modulus_id() -> &'static str {
        match (P, K) {
            (3, 1) => "GF(3)",
            (5, 1) => "GF(5)",
            (3, 32) => "GF(3^32):x^32+x^5+2",
            (5, 32) => "GF(5^32):x^32+x^16+2",
            _ => unreachable!(),
        }
    }

    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut c = [0u8; K];
        for x in c.iter_mut() {
            *x = rng.gen_range(0..P) as u8;
        }
        GfPk(c)
    }

    fn to_hex(&self) -> String {
        self.0
            .iter()
            .rev()
            .map(|&d| char::from_digit(d as u32, 16).unwrap())
            .collect()
    }

    fn from_index(mut n: u128) -> Self {
        let mut c = [0u8; K];
        for x in c.iter_mut() {
            *x = (n % P as u128) as u8;
            n /= P as u128;
        }
        GfPk(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn prime_field_tables() {
        for a in 1..3 {
            let x = Gf3::from_int(a);
            assert_eq!(x * x.inverse().unwrap(), Gf3::one());
        }
        assert_eq!(Gf5::from_int(2) * Gf5::from_int(3), Gf5::one());
        assert_eq!(Gf5::from_int(-1), Gf5::from_int(4));
    }

    #[test]
    fn extension_inverse_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let a = Gf3_32::random(&mut rng);
            if !a.is_zero() {
                assert_eq!(a * a.inverse().unwrap(), Gf3_32::one());
            }
            let b = Gf5_32::random(&mut rng);
            if !b.is_zero() {
                assert_eq!(b * b.inverse().unwrap(), Gf5_32::one());
            }
        }
    }
}
