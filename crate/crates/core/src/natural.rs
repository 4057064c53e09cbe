//! Arbitrary-precision non-negative integers.
//!
//! [`Natural`] is a thin newtype over [`num_bigint::BigUint`]; the big-integer
//! representation is always canonical (no leading zero limbs), and every
//! operation here is exact.

use alloc::string::String;
use core::fmt;
use core::ops::{Add, Mul, Rem};
use core::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::{Error, Result};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Natural(BigUint);

impl Natural {
    pub fn zero() -> Self {
        Natural(BigUint::zero())
    }

    pub fn one() -> Self {
        Natural(BigUint::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_odd(&self) -> bool {
        self.0.is_odd()
    }

    pub fn is_even(&self) -> bool {
        self.0.is_even()
    }

    /// `2^exp`.
    pub fn power_of_two(exp: u64) -> Self {
        Natural(BigUint::one() << exp)
    }

    pub fn pow(&self, exp: u64) -> Self {
        let exp = u32::try_from(exp).expect("exponent exceeds u32");
        Natural(self.0.pow(exp))
    }

    /// Number of trailing zero bits, `None` for zero.
    pub fn trailing_zeros(&self) -> Option<u64> {
        self.0.trailing_zeros()
    }

    pub fn bits(&self) -> u64 {
        self.0.bits()
    }

    pub fn count_ones(&self) -> u64 {
        self.0.count_ones()
    }

    pub fn bit(&self, i: u64) -> bool {
        self.0.bit(i)
    }

    pub fn shl(&self, by: u64) -> Self {
        Natural(&self.0 << by)
    }

    pub fn shr(&self, by: u64) -> Self {
        Natural(&self.0 >> by)
    }

    pub fn half(&self) -> Self {
        self.shr(1)
    }

    pub fn double(&self) -> Self {
        self.shl(1)
    }

    pub fn checked_sub(&self, rhs: &Natural) -> Option<Natural> {
        if self.0 >= rhs.0 {
            Some(Natural(&self.0 - &rhs.0))
        } else {
            None
        }
    }

    /// Quotient and remainder; `None` when `rhs` is zero.
    pub fn div_rem(&self, rhs: &Natural) -> Option<(Natural, Natural)> {
        if rhs.is_zero() {
            return None;
        }
        let (q, r) = self.0.div_rem(&rhs.0);
        Some((Natural(q), Natural(r)))
    }

    /// `true` when `self` divides `other` (zero divides only zero).
    pub fn divides(&self, other: &Natural) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        (&other.0 % &self.0).is_zero()
    }

    /// `⌊√self⌋`.
    pub fn isqrt(&self) -> Natural {
        Natural(self.0.sqrt())
    }

    /// `⌊∛self⌋`.
    pub fn icbrt(&self) -> Natural {
        Natural(self.0.cbrt())
    }

    /// Exact root of the given order, if `self` is a perfect power of it.
    pub fn exact_root(&self, order: u32) -> Option<Natural> {
        let r = Natural(self.0.nth_root(order));
        if r.pow(u64::from(order)) == *self {
            Some(r)
        } else {
            None
        }
    }

    /// Greatest common divisor by Euclid's remainder algorithm.
    pub fn gcd(&self, other: &Natural) -> Natural {
        let (mut a, mut b) = (self.0.clone(), other.0.clone());
        while !b.is_zero() {
            let r = &a % &b;
            a = b;
            b = r;
        }
        Natural(a)
    }

    /// Deterministic primality by trial division up to `⌊√self⌋`.
    ///
    /// Cost grows with the square root of the input; meant for desk-scale
    /// values.
    pub fn is_prime(&self) -> bool {
        if let Some(v) = self.to_u64() {
            return is_prime_u64(v);
        }
        if self.is_even() {
            return false;
        }
        let limit = self.isqrt();
        let mut d = Natural::from(3u64);
        let two = Natural::from(2u64);
        while d <= limit {
            if d.divides(self) {
                return false;
            }
            d = d + &two;
        }
        true
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    pub fn as_biguint(&self) -> &BigUint {
        &self.0
    }

    pub fn into_biguint(self) -> BigUint {
        self.0
    }

    pub fn to_decimal(&self) -> String {
        self.0.to_str_radix(10)
    }
}

pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d <= n / d {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl From<u64> for Natural {
    fn from(v: u64) -> Self {
        Natural(BigUint::from(v))
    }
}

impl From<u32> for Natural {
    fn from(v: u32) -> Self {
        Natural(BigUint::from(v))
    }
}

impl From<usize> for Natural {
    fn from(v: usize) -> Self {
        Natural(BigUint::from(v))
    }
}

impl From<u128> for Natural {
    fn from(v: u128) -> Self {
        Natural(BigUint::from(v))
    }
}

impl From<BigUint> for Natural {
    fn from(v: BigUint) -> Self {
        Natural(v)
    }
}

impl PartialEq<u64> for Natural {
    fn eq(&self, other: &u64) -> bool {
        self.0 == BigUint::from(*other)
    }
}

impl PartialOrd<u64> for Natural {
    fn partial_cmp(&self, other: &u64) -> Option<core::cmp::Ordering> {
        Some(self.0.cmp(&BigUint::from(*other)))
    }
}

/// Decimal digits only; no sign, no separators, no radix prefix.
impl FromStr for Natural {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::domain(alloc::format!("not a decimal natural: {s:?}")));
        }
        BigUint::from_str(s)
            .map(Natural)
            .map_err(|_| Error::domain(alloc::format!("not a decimal natural: {s:?}")))
    }
}

impl fmt::Display for Natural {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for Natural {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&Natural> for &Natural {
            type Output = Natural;
            fn $m(self, rhs: &Natural) -> Natural {
                Natural($tr::$m(&self.0, &rhs.0))
            }
        }
        impl $tr<Natural> for Natural {
            type Output = Natural;
            fn $m(self, rhs: Natural) -> Natural {
                Natural($tr::$m(self.0, rhs.0))
            }
        }
        impl $tr<&Natural> for Natural {
            type Output = Natural;
            fn $m(self, rhs: &Natural) -> Natural {
                Natural($tr::$m(self.0, &rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Mul, mul);

/// Panics on a zero modulus, like the primitive integers.
impl Rem<&Natural> for &Natural {
    type Output = Natural;
    fn rem(self, rhs: &Natural) -> Natural {
        Natural(&self.0 % &rhs.0)
    }
}

impl core::iter::Sum for Natural {
    fn sum<I: Iterator<Item = Natural>>(iter: I) -> Self {
        iter.fold(Natural::zero(), |acc, x| acc + x)
    }
}

impl core::iter::Product for Natural {
    fn product<I: Iterator<Item = Natural>>(iter: I) -> Self {
        iter.fold(Natural::one(), |acc, x| acc * x)
    }
}

#[cfg(feature = "serde")]
mod serde_impl {
    use super::Natural;
    use alloc::string::String;
    use core::str::FromStr;
    use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

    /// Naturals travel as decimal strings so no JSON reader truncates them.
    impl Serialize for Natural {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            s.serialize_str(&self.to_decimal())
        }
    }

    impl<'de> Deserialize<'de> for Natural {
        fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
            let s = String::deserialize(d)?;
            Natural::from_str(&s).map_err(de::Error::custom)
        }
    }
}
