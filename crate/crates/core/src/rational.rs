//! Arbitrary-precision rationals and integers used throughout the crate.
//!
//! `ExactRational` is always kept in lowest terms with a positive
//! denominator, so structural equality is numeric equality and the derived
//! `Hash` agrees with `Eq`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use dashu_int::ops::UnsignedAbs;
use dashu_int::{IBig, UBig};
use dashu_ratio::RBig;
use serde::de::{self, Deserializer};
use serde::ser::{SerializeTuple, Serializer};
use serde::{Deserialize, Serialize};

pub use dashu_int::IBig as Integer;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ExactRational(RBig);

impl ExactRational {
    pub fn zero() -> Self {
        ExactRational(RBig::ZERO)
    }

    pub fn one() -> Self {
        ExactRational(RBig::ONE)
    }

    pub fn from_int(n: impl Into<IBig>) -> Self {
        ExactRational(RBig::from(n.into()))
    }

    /// `num / den`; fails on a zero denominator.
    pub fn new(num: impl Into<IBig>, den: impl Into<IBig>) -> Result<Self> {
        let den = den.into();
        if den == IBig::ZERO {
            return Err(Error::ZeroDenominator);
        }
        Ok(ExactRational(RBig::from_parts_signed(num.into(), den)))
    }

    /// Same as [`ExactRational::new`] for literals known to be valid.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::new(num, den).expect("nonzero literal denominator")
    }

    pub fn numer(&self) -> &IBig {
        self.0.numerator()
    }

    pub fn denom(&self) -> IBig {
        IBig::from(self.0.denominator().clone())
    }

    pub fn is_zero(&self) -> bool {
        self.0 == RBig::ZERO
    }

    pub fn is_integer(&self) -> bool {
        *self.0.denominator() == UBig::ONE
    }

    pub fn signum(&self) -> i32 {
        match self.0.cmp(&RBig::ZERO) {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    pub fn floor(&self) -> IBig {
        self.0.floor()
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(ExactRational(RBig::ONE / &self.0))
    }

    pub fn pow(&self, exp: i64) -> Self {
        let base = if exp < 0 { self.recip().expect("negative power of zero") } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..exp.unsigned_abs() {
            acc = &acc * &base;
        }
        acc
    }

    /// Numerator and denominator as `i128`, if both fit.
    pub fn to_i128_pair(&self) -> Option<(i128, i128)> {
        let n = i128::try_from(self.numer().clone()).ok()?;
        let d = i128::try_from(self.denom()).ok()?;
        Some((n, d))
    }

    /// Prefix-free byte encoding: sign byte, then length-prefixed big-endian
    /// magnitudes of numerator and denominator.
    pub fn write_key_bytes(&self, out: &mut Vec<u8>) {
        out.push(match self.signum() {
            -1 => 0u8,
            0 => 1,
            _ => 2,
        });
        let mag = self.numer().unsigned_abs();
        write_len_prefixed(out, &mag.to_be_bytes());
        write_len_prefixed(out, &self.0.denominator().to_be_bytes());
    }
}

fn write_len_prefixed(out: &mut Vec<u8>, bytes: &[u8]) {
    out.extend_from_slice(&(bytes.len() as u32).to_be_bytes());
    out.extend_from_slice(bytes);
}

impl fmt::Debug for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.0.denominator())
        }
    }
}

impl FromStr for ExactRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse = |t: &str| IBig::from_str(t.trim()).map_err(|_| Error::Parse(format!("bad rational `{s}`")));
        match s.split_once('/') {
            Some((n, d)) => ExactRational::new(parse(n)?, parse(d)?),
            None => Ok(ExactRational::from_int(parse(s)?)),
        }
    }
}

impl From<i64> for ExactRational {
    fn from(n: i64) -> Self {
        ExactRational::from_int(n)
    }
}

impl From<IBig> for ExactRational {
    fn from(n: IBig) -> Self {
        ExactRational::from_int(n)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl<'a> $tr<&'a ExactRational> for &'a ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: &'a ExactRational) -> ExactRational {
                ExactRational($tr::$method(&self.0, &rhs.0))
            }
        }
        impl $tr for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: ExactRational) -> ExactRational {
                ExactRational($tr::$method(self.0, rhs.0))
            }
        }
        impl<'a> $tr<&'a ExactRational> for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: &'a ExactRational) -> ExactRational {
                ExactRational($tr::$method(self.0, &rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl<'a> Div<&'a ExactRational> for &'a ExactRational {
    type Output = ExactRational;
    fn div(self, rhs: &'a ExactRational) -> ExactRational {
        assert!(!rhs.is_zero(), "division by zero rational");
        ExactRational(&self.0 / &rhs.0)
    }
}

impl Div for ExactRational {
    type Output = ExactRational;
    fn div(self, rhs: ExactRational) -> ExactRational {
        &self / &rhs
    }
}

impl Neg for &ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-self.0.clone())
    }
}

impl Neg for ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-self.0)
    }
}

impl std::iter::Sum for ExactRational {
    fn sum<I: Iterator<Item = ExactRational>>(iter: I) -> Self {
        iter.fold(ExactRational::zero(), |a, b| a + b)
    }
}

/// JSON encoding as a `[numerator, denominator]` pair of integers.
impl Serialize for ExactRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let (n, d) = self.to_i128_pair().ok_or_else(|| serde::ser::Error::custom("rational component exceeds i128"))?;
        let mut t = serializer.serialize_tuple(2)?;
        t.serialize_element(&n)?;
        t.serialize_element(&d)?;
        t.end()
    }
}

impl<'de> Deserialize<'de> for ExactRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let (n, d) = <(i128, i128)>::deserialize(deserializer)?;
        ExactRational::new(n, d).map_err(de::Error::custom)
    }
}

/// Integer helpers on `IBig`.
pub mod int {
    use dashu_int::ops::UnsignedAbs;
    use dashu_int::IBig;

    pub fn gcd(a: &IBig, b: &IBig) -> IBig {
        let mut x = a.unsigned_abs();
        let mut y = b.unsigned_abs();
        while y != dashu_int::UBig::ZERO {
            let r = &x % &y;
            x = y;
            y = r;
        }
        IBig::from(x)
    }

    /// Extended Euclid: returns `(g, s, t)` with `s*a + t*b = g >= 0`.
    pub fn ext_gcd(a: &IBig, b: &IBig) -> (IBig, IBig, IBig) {
        let (mut old_r, mut r) = (a.clone(), b.clone());
        let (mut old_s, mut s) = (IBig::ONE, IBig::ZERO);
        let (mut old_t, mut t) = (IBig::ZERO, IBig::ONE);
        while r != IBig::ZERO {
            let q = &old_r / &r;
            let nr = &old_r - &q * &r;
            old_r = std::mem::replace(&mut r, nr);
            let ns = &old_s - &q * &s;
            old_s = std::mem::replace(&mut s, ns);
            let nt = &old_t - &q * &t;
            old_t = std::mem::replace(&mut t, nt);
        }
        if old_r < IBig::ZERO {
            (-old_r, -old_s, -old_t)
        } else {
            (old_r, old_s, old_t)
        }
    }

    pub fn pow(base: i64, exp: u32) -> IBig {
        let mut acc = IBig::ONE;
        let b = IBig::from(base);
        for _ in 0..exp {
            acc *= &b;
        }
        acc
    }

    /// Distinct prime factors of `|n|` by trial division.
    pub fn prime_factors(n: u64) -> Vec<u64> {
        let mut out = Vec::new();
        let mut m = n;
        let mut p = 2u64;
        while p * p <= m {
            if m.is_multiple_of(p) {
                out.push(p);
                while m.is_multiple_of(p) {
                    m /= p;
                }
            }
            p += 1;
        }
        if m > 1 {
            out.push(m);
        }
        out
    }

    /// Removes every factor of `p` from `n`.
    pub fn strip_factor(n: &IBig, p: u64) -> IBig {
        let p = IBig::from(p);
        let mut m = n.clone();
        if m == IBig::ZERO {
            return m;
        }
        while (&m % &p) == IBig::ZERO {
            m /= &p;
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_on_construction() {
        let r = ExactRational::new(6, -4).unwrap();
        assert_eq!(r, ExactRational::ratio(-3, 2));
        assert_eq!(r.denom(), IBig::from(2));
        assert_eq!(r.to_string(), "-3/2");
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(ExactRational::new(1, 0).is_err());
    }

    #[test]
    fn floor_of_negative() {
        assert_eq!(ExactRational::ratio(-1, 3).floor(), IBig::from(-1));
        assert_eq!(ExactRational::ratio(7, 2).floor(), IBig::from(3));
    }

    #[test]
    fn key_bytes_distinguish_sign_and_magnitude() {
        let mut a = Vec::new();
        let mut b = Vec::new();
        ExactRational::ratio(1, 2).write_key_bytes(&mut a);
        ExactRational::ratio(-1, 2).write_key_bytes(&mut b);
        assert_ne!(a, b);
    }

    #[test]
    fn json_pair_roundtrip() {
        let r = ExactRational::ratio(-7, 125);
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(s, "[-7,125]");
        let back: ExactRational = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn ext_gcd_bezout() {
        let (g, s, t) = int::ext_gcd(&IBig::from(240), &IBig::from(46));
        assert_eq!(g, IBig::from(2));
        assert_eq!(s * IBig::from(240) + t * IBig::from(46), IBig::from(2));
    }

    #[test]
    fn parse_forms() {
        assert_eq!("3/6".parse::<ExactRational>().unwrap(), ExactRational::ratio(1, 2));
        assert_eq!("-4".parse::<ExactRational>().unwrap(), ExactRational::from(-4));
    }
}
