//! Binary extension fields `GF(2^K)` for `K` in {32, 64, 128}.
//!
//! Moduli (all irreducible over GF(2)):
//!
//! | K   | modulus                          |
//! |-----|----------------------------------|
//! | 32  | x^32 + x^7 + x^3 + x^2 + 1       |
//! | 64  | x^64 + x^4 + x^3 + x + 1         |
//! | 128 | x^128 + x^7 + x^2 + x + 1        |

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;

use super::{FiniteField, Scalar};

/// Element of `GF(2^K)`; bit `i` is the coefficient of `x^i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Gf2<const K: u32>(u128);

pub type Gf2_32 = Gf2<32>;
pub type Gf2_64 = Gf2<64>;
pub type Gf2_128 = Gf2<128>;

impl<const K: u32> Gf2<K> {
    /// Low-order terms of the modulus, i.e. `x^K mod f`.
    const TAIL: u128 = match K {
        32 => 0x8d,
        64 => 0x1b,
        128 => 0x87,
        _ => panic!("unsupported binary field degree"),
    };

    const MASK: u128 = if K == 128 { u128::MAX } else { (1u128 << K) - 1 };

    pub const fn new(bits: u128) -> Self {
        Gf2(bits & Self::MASK)
    }

    pub fn bits(self) -> u128 {
        self.0
    }

    fn reduce_wide(hi: u128, lo: u128) -> Self {
        if K == 128 {
            // hi * x^128 == hi * TAIL; TAIL has degree 7, so one fold leaves < 8 bits.
            let (h1, l1) = clmul128(hi, Self::TAIL);
            let (_, l2) = clmul128(h1, Self::TAIL);
            Gf2(lo ^ l1 ^ l2)
        } else {
            debug_assert_eq!(hi, 0);
            let mut v = lo;
            while v >> K != 0 {
                let top = v >> K;
                v = (v & Self::MASK) ^ clmul64(top as u64, Self::TAIL as u64);
            }
            Gf2(v)
        }
    }
}

impl<const K: u32> fmt::Debug for Gf2<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF2^{}(0x{})", K, self.to_hex())
    }
}

impl<const K: u32> Add for Gf2<K> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: Self) -> Self {
        Gf2(self.0 ^ rhs.0)
    }
}

impl<const K: u32> Sub for Gf2<K> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn sub(self, rhs: Self) -> Self {
        Gf2(self.0 ^ rhs.0)
    }
}

impl<const K: u32> Neg for Gf2<K> {
    type Output = Self;
    fn neg(self) -> Self {
        self
    }
}

impl<const K: u32> Mul for Gf2<K> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if K == 128 {
            let (hi, lo) = clmul128(self.0, rhs.0);
            Self::reduce_wide(hi, lo)
        } else {
            Self::reduce_wide(0, clmul64(self.0 as u64, rhs.0 as u64))
        }
    }
}

impl<const K: u32> Scalar for Gf2<K> {
    fn zero() -> Self {
        Gf2(0)
    }
    fn one() -> Self {
        Gf2(1)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn inverse(&self) -> Option<Self> {
        if self.0 == 0 {
            return None;
        }
        // a^(2^K - 2); for K = 128 the exponent is u128::MAX - 1.
        let e = if K == 128 { u128::MAX - 1 } else { (1u128 << K) - 2 };
        Some(self.pow(e))
    }
    fn from_int(n: i64) -> Self {
        Gf2((n & 1) as u128)
    }
}

impl<const K: u32> FiniteField for Gf2<K> {
    const CHARACTERISTIC: u64 = 2;
    const DEGREE: u32 = K;

    fn modulus_id() -> &'static str {
        match K {
            32 => "GF(2^32):x^32+x^7+x^3+x^2+1",
            64 => "GF(2^64):x^64+x^4+x^3+x+1",
            128 => "GF(2^128):x^128+x^7+x^2+x+1",
            _ => unreachable!(),
        }
    }

    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Gf2::new(rng.gen::<u128>())
    }

    fn to_hex(&self) -> String {
        format!("{:0width$x}", self.0, width = (K / 4) as usize)
    }

    fn from_index(n: u128) -> Self {
        Gf2::new(n)
    }
}

/// Carry-less 64x64 -> 128 bit product.
#[inline]
pub(crate) fn clmul64(a: u64, b: u64) -> u128 {
    #[cfg(target_arch = "x86_64")]
    {
        if std::arch::is_x86_feature_detected!("pclmulqdq") {
            // SAFETY: the required CPU feature was detected at runtime.
            return unsafe { clmul64_pclmul(a, b) };
        }
    }
    clmul64_portable(a, b)
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "pclmulqdq", enable = "sse2")]
unsafe fn clmul64_pclmul(a: u64, b: u64) -> u128 {
    use std::arch::x86_64::{_mm_clmulepi64_si128, _mm_cvtsi64_si128, _mm_storeu_si128};
    let x = _mm_cvtsi64_si128(a as i64);
    let y = _mm_cvtsi64_si128(b as i64);
    let r = _mm_clmulepi64_si128(x, y, 0);
    let mut out = 0u128;
    _mm_storeu_si128(&mut out as *mut u128 as *mut _, r);
    out
}

pub(crate) fn clmul64_portable(a: u64, b: u64) -> u128 {
    let mut acc = 0u128;
    let a = a as u128;
    let mut b = b;
    let mut shift = 0;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a << shift;
        }
        b >>= 1;
        shift += 1;
    }
    acc
}

/// Carry-less 128x128 -> 256 bit product as `(high, low)`.
fn clmul128(a: u128, b: u128) -> (u128, u128) {
    let (a0, a1) = (a as u64, (a >> 64) as u64);
    let (b0, b1) = (b as u64, (b >> 64) as u64);
    let lo = clmul64(a0, b0);
    let hi = clmul64(a1, b1);
    let mid = clmul64(a0, b1) ^ clmul64(a1, b0);
    (hi ^ (mid >> 64), lo ^ (mid << 64))
}
