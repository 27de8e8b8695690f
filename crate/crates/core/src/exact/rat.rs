//! Arbitrary-precision rational numbers.
//!
//! [`Rat`] wraps `num_rational::BigRational`: values are always stored in
//! lowest terms with a positive denominator, and arithmetic never rounds.
//! The textual form is `p/q`, shortened to `p` for integers; that is also
//! the serde representation.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational scalar, the coefficient field for the whole crate.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rat(BigRational);

impl Rat {
    pub fn zero() -> Rat {
        Rat(BigRational::zero())
    }

    pub fn one() -> Rat {
        Rat(BigRational::one())
    }

    /// Builds `numer/denom`, reducing to lowest terms.
    pub fn new(numer: BigInt, denom: BigInt) -> Result<Rat> {
        if denom.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rat(BigRational::new(numer, denom)))
    }

    pub fn from_int(n: i64) -> Rat {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Rat {
        Rat(BigRational::from_integer(n))
    }

    /// `p/q` from machine integers; panics if `q == 0`.
    pub fn frac(p: i64, q: i64) -> Rat {
        assert!(q != 0, "zero denominator");
        Rat(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// Exact division; `DivisionByZero` if `rhs` is zero.
    pub fn checked_div(&self, rhs: &Rat) -> Result<Rat> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rat(&self.0 / &rhs.0))
    }

    pub fn recip(&self) -> Result<Rat> {
        Rat::one().checked_div(self)
    }

    /// Integer power; negative exponents invert (error on zero base).
    pub fn pow(&self, exp: i64) -> Result<Rat> {
        if exp < 0 {
            if self.is_zero() {
                return Err(Error::DivisionByZero);
            }
            return Ok(Rat(self.0.pow(exp as i32)));
        }
        Ok(Rat(self.0.pow(exp as i32)))
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    /// Nearest double; the single sanctioned exit from exact arithmetic.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().expect("rational should convert to f64")
    }

    /// The integer value, if the denominator is one.
    pub fn to_bigint(&self) -> Option<BigInt> {
        if self.0.is_integer() {
            Some(self.0.to_integer())
        } else {
            None
        }
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Rat {
    type Err = Error;

    /// Parses `p` or `p/q` with optional sign, e.g. `-5`, `1/2`, `-7/3`.
    fn from_str(s: &str) -> Result<Rat> {
        let bad = || Error::ParseRat(s.to_string());
        match s.split_once('/') {
            None => {
                let n = BigInt::from_str(s.trim()).map_err(|_| bad())?;
                Ok(Rat(BigRational::from_integer(n)))
            }
            Some((p, q)) => {
                let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
                let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
                if q.is_zero() {
                    return Err(bad());
                }
                Ok(Rat(BigRational::new(p, q)))
            }
        }
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Rat, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(|e: Error| D::Error::custom(e.to_string()))
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Rat {
        Rat::from_int(n)
    }
}

impl From<u32> for Rat {
    fn from(n: u32) -> Rat {
        Rat::from_int(n as i64)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat(&self.0 $op &rhs.0)
            }
        }
        impl $trait for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(self.0 $op rhs.0)
            }
        }
        impl $trait<&Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat(self.0 $op &rhs.0)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

/// Panics on a zero divisor; use [`Rat::checked_div`] for the fallible form.
impl Div for &Rat {
    type Output = Rat;
    fn div(self, rhs: &Rat) -> Rat {
        self.checked_div(rhs).expect("division by zero")
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, rhs: &Rat) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, rhs: &Rat) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rat> for Rat {
    fn mul_assign(&mut self, rhs: &Rat) {
        self.0 *= &rhs.0;
    }
}

/// Binomial coefficient `C(n, k)`; zero outside `0 <= k <= n`.
pub fn binom(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    for i in 1..=k {
        // exact at every step: acc holds C(n-k+i-1, i-1) * ... pattern
        acc = acc * BigInt::from(n - k + i) / BigInt::from(i);
    }
    acc
}

/// `n!` as an exact integer.
pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_arithmetic_examples() {
        assert_eq!(Rat::frac(1, 2) + Rat::frac(1, 3), Rat::frac(5, 6));
        assert_eq!(Rat::frac(2, 4), Rat::frac(1, 2));
        assert_eq!(Rat::from_int(7) * Rat::zero(), Rat::zero());
    }

    #[test]
    fn canonical_form() {
        let r = Rat::frac(-6, -4);
        assert_eq!(r.numer(), &BigInt::from(3));
        assert_eq!(r.denom(), &BigInt::from(2));
        let s = Rat::frac(3, -2);
        assert_eq!(s.to_string(), "-3/2");
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(
            Rat::one().checked_div(&Rat::zero()),
            Err(Error::DivisionByZero)
        );
        assert!(Rat::new(BigInt::from(1), BigInt::from(0)).is_err());
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["0", "-5", "1/2", "-7/3", "22"] {
            let r: Rat = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
        assert_eq!("2/4".parse::<Rat>().unwrap().to_string(), "1/2");
        assert!("1/0".parse::<Rat>().is_err());
        assert!("x".parse::<Rat>().is_err());
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binom(5, 2), BigInt::from(10));
        for n in 0..20u64 {
            assert_eq!(binom(n, 0), BigInt::one());
        }
        assert_eq!(binom(4, 7), BigInt::zero());
        assert_eq!(binom(4, -1), BigInt::zero());
        assert_eq!(binom(30, 15), BigInt::from(155117520u64));
    }

    #[test]
    fn powers() {
        assert_eq!(Rat::frac(2, 3).pow(3).unwrap(), Rat::frac(8, 27));
        assert_eq!(Rat::frac(2, 3).pow(-2).unwrap(), Rat::frac(9, 4));
        assert_eq!(Rat::zero().pow(0).unwrap(), Rat::one());
        assert!(Rat::zero().pow(-1).is_err());
    }
}
