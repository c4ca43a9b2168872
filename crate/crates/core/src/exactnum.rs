//! Exact rationals, validated primes and p-adic valuation values.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ConfigError;
use crate::Rational;

/// Largest prime accepted; keeps residue arithmetic inside `u64` products.
pub const MAX_PRIME: u64 = (1 << 31) - 1;

/// A prime number, checked by trial division at construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self, ConfigError> {
        if !(2..=MAX_PRIME).contains(&p) {
            return Err(ConfigError::NotPrime(p));
        }
        let mut d = 2u64;
        while d * d <= p {
            if p.is_multiple_of(d) {
                return Err(ConfigError::NotPrime(p));
            }
            d += 1;
        }
        Ok(Prime(p))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn to_bigint(self) -> BigInt {
        BigInt::from(self.0)
    }

    /// `p^exp` as a rational; negative exponents give `1/p^|exp|`.
    pub fn pow(self, exp: i64) -> Rational {
        let base = self.to_bigint();
        let mag = num_traits::pow::pow(base, exp.unsigned_abs() as usize);
        if exp >= 0 {
            Rational::from_integer(mag)
        } else {
            Rational::new(BigInt::one(), mag)
        }
    }

    /// Image of a rational with nonnegative valuation in `F_p`.
    ///
    /// Returns `None` when the denominator is divisible by `p`.
    pub fn reduce(self, r: &Rational) -> Option<u64> {
        let p = BigInt::from(self.0);
        let den = r.denom().mod_floor(&p).to_u64()?;
        if den == 0 {
            return None;
        }
        let num = r.numer().mod_floor(&p).to_u64()?;
        Some(num * inv_mod(den, self.0) % self.0)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for Prime {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u64(self.0)
    }
}

impl<'de> Deserialize<'de> for Prime {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let p = u64::deserialize(d)?;
        Prime::new(p).map_err(serde::de::Error::custom)
    }
}

/// Modular inverse of a nonzero residue modulo a prime `p`.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a % p, p - 2, p)
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// Exponent of `p` in a nonzero integer.
pub fn vp_int(n: &BigInt, p: Prime) -> Option<u64> {
    if n.is_zero() {
        return None;
    }
    let p = p.to_bigint();
    let mut n = n.abs();
    let mut k = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return Some(k);
        }
        n = q;
        k += 1;
    }
}

/// The p-adic valuation of a rational.
pub fn vp(r: &Rational, p: Prime) -> Val {
    match vp_int(r.numer(), p) {
        None => Val::Infinity,
        Some(num) => {
            let den = vp_int(r.denom(), p).expect("denominator is nonzero");
            Val::from_int(num as i64 - den as i64)
        }
    }
}

pub fn parse_rational(s: &str) -> Result<Rational, ConfigError> {
    let t = s.trim();
    let bad = || ConfigError::BadRational(s.to_string());
    if t.is_empty() || t.contains(char::is_whitespace) {
        return Err(bad());
    }
    match t.split_once('/') {
        None => BigInt::from_str(t).map(Rational::from_integer).map_err(|_| bad()),
        Some((n, d)) => {
            let n = BigInt::from_str(n).map_err(|_| bad())?;
            let d = BigInt::from_str(d).map_err(|_| bad())?;
            if d.is_zero() || d.is_negative() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
    }
}

/// Reduced `a/b`, or `a` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub mod rational_string {
    //! Serde adapter storing a rational as its canonical string.
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// A valuation value: a rational or `+∞`.
///
/// Variant order makes the derived `Ord` put every finite value below infinity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Val {
    Finite(Rational),
    Infinity,
}

impl Val {
    pub fn zero() -> Self {
        Val::Finite(Rational::zero())
    }

    pub fn from_int(n: i64) -> Self {
        Val::Finite(Rational::from_integer(BigInt::from(n)))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Val::Infinity)
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Val::Finite(r) => Some(r),
            Val::Infinity => None,
        }
    }

    pub fn min(self, other: Val) -> Val {
        std::cmp::min(self, other)
    }

    /// Multiplication by a nonnegative rational. `0 · ∞` is not defined here.
    pub fn scale(&self, k: &Rational) -> Val {
        assert!(!k.is_negative(), "valuation scaled by a negative factor");
        match self {
            Val::Finite(r) => Val::Finite(r * k),
            Val::Infinity => {
                assert!(!k.is_zero(), "0 * Infinity is undefined");
                Val::Infinity
            }
        }
    }

    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        match self {
            Val::Finite(v) => v.cmp(r),
            Val::Infinity => Ordering::Greater,
        }
    }
}

impl Add for Val {
    type Output = Val;
    fn add(self, rhs: Val) -> Val {
        match (self, rhs) {
            (Val::Finite(a), Val::Finite(b)) => Val::Finite(a + b),
            _ => Val::Infinity,
        }
    }
}

impl Add<&Rational> for Val {
    type Output = Val;
    fn add(self, rhs: &Rational) -> Val {
        match self {
            Val::Finite(a) => Val::Finite(a + rhs),
            Val::Infinity => Val::Infinity,
        }
    }
}

impl From<Rational> for Val {
    fn from(r: Rational) -> Self {
        Val::Finite(r)
    }
}

impl fmt::Display for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val::Finite(r) => f.write_str(&format_rational(r)),
            Val::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for Val {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "Infinity" | "∞" => Ok(Val::Infinity),
            t => parse_rational(t).map(Val::Finite),
        }
    }
}

impl Serialize for Val {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Val {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
