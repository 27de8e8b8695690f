//! Dense univariate polynomials with exact rational coefficients.
//!
//! A [`Poly`] is a coefficient vector indexed by degree over one named
//! indeterminate (`x` or `alpha`). Canonical form: trailing zero
//! coefficients are stripped and the zero polynomial has an empty list, so
//! structural equality is mathematical equality. Constants (degree <= 0)
//! carry no indeterminate and combine with polynomials in either variable;
//! binary operations on two non-constant polynomials in different variables
//! are an error.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::Rat;

/// Indeterminate name.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Var {
    X,
    Alpha,
}

impl Var {
    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Alpha => "alpha",
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Univariate polynomial over [`Rat`], dense, canonical.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    var: Option<Var>,
    coeffs: Vec<Rat>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { var: None, coeffs: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { var: None, coeffs: vec![c] }
        }
    }

    /// The monomial `v`.
    pub fn var(v: Var) -> Poly {
        Poly::monomial(v, 1, Rat::one())
    }

    /// `c * v^k`.
    pub fn monomial(v: Var, k: usize, c: Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rat::zero(); k + 1];
        coeffs[k] = c;
        Poly::from_coeffs(v, coeffs)
    }

    /// From a dense coefficient list, index = degree. Normalizes.
    pub fn from_coeffs(v: Var, coeffs: Vec<Rat>) -> Poly {
        let mut p = Poly { var: Some(v), coeffs };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(Rat::is_zero) {
            self.coeffs.pop();
        }
        if self.coeffs.len() <= 1 {
            self.var = None;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// The indeterminate; `None` for constants.
    pub fn indeterminate(&self) -> Option<Var> {
        self.var
    }

    /// Coefficient of degree `k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn leading_coeff(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    /// Constant view, if degree <= 0.
    pub fn as_constant(&self) -> Option<Rat> {
        match self.coeffs.len() {
            0 => Some(Rat::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    fn unify_var(&self, rhs: &Poly) -> Result<Option<Var>> {
        match (self.var, rhs.var) {
            (Some(a), Some(b)) if a != b => Err(Error::VarMismatch(a.name(), b.name())),
            (Some(a), _) => Ok(Some(a)),
            (None, b) => Ok(b),
        }
    }

    pub fn checked_add(&self, rhs: &Poly) -> Result<Poly> {
        let var = self.unify_var(rhs)?;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(self.coeff(k) + rhs.coeff(k));
        }
        let mut p = Poly { var, coeffs };
        p.normalize();
        Ok(p)
    }

    pub fn checked_sub(&self, rhs: &Poly) -> Result<Poly> {
        self.checked_add(&-rhs)
    }

    pub fn checked_mul(&self, rhs: &Poly) -> Result<Poly> {
        let var = self.unify_var(rhs)?;
        if self.is_zero() || rhs.is_zero() {
            return Ok(Poly::zero());
        }
        let mut coeffs = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += &(a * b);
            }
        }
        let mut p = Poly { var, coeffs };
        p.normalize();
        Ok(p)
    }

    /// Multiplies every coefficient by the scalar `c`.
    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            var: self.var,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn pow(&self, k: usize) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Horner evaluation at a rational point.
    pub fn eval(&self, at: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * at + c;
        }
        acc
    }

    /// Substitutes `inner` for the indeterminate (Horner in the polynomial
    /// ring); the result lives in `inner`'s indeterminate.
    pub fn compose(&self, inner: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &Poly::constant(c.clone());
        }
        acc
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * &Rat::from_int(k as i64))
            .collect();
        let mut p = Poly { var: self.var, coeffs };
        p.normalize();
        p
    }

    /// Same coefficients, renamed indeterminate. Used to compare families
    /// produced in `x` against identities stated in `alpha`.
    pub fn with_var(&self, v: Var) -> Poly {
        let mut p = self.clone();
        if p.coeffs.len() > 1 {
            p.var = Some(v);
        }
        p
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let name = self.var.map_or("x", Var::name);
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if first {
                first = false;
                if c < &Rat::zero() {
                    f.write_str("-")?;
                }
            } else if c < &Rat::zero() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            let a = c.abs();
            match k {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}*")?;
                    }
                    if k == 1 {
                        write!(f, "{name}")?;
                    } else {
                        write!(f, "{name}^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Poly {
    /// Dense coefficient array of `p/q` strings, index = degree.
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.coeffs.iter().map(Rat::to_string))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.checked_add(rhs).expect("indeterminate mismatch")
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.checked_sub(rhs).expect("indeterminate mismatch")
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.checked_mul(rhs).expect("indeterminate mismatch")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            var: self.var,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Poly {
        Poly::var(Var::X)
    }

    #[test]
    fn difference_of_squares() {
        let p = &x() + &Poly::one();
        let q = &x() - &Poly::one();
        let pq = &p * &q;
        let expected = Poly::from_coeffs(Var::X, vec![Rat::from_int(-1), Rat::zero(), Rat::one()]);
        assert_eq!(pq, expected);
        assert_eq!(pq.to_string(), "x^2 - 1");
    }

    #[test]
    fn evaluation() {
        let p = Poly::from_coeffs(Var::X, vec![Rat::from_int(-1), Rat::zero(), Rat::one()]);
        assert_eq!(p.eval(&Rat::from_int(3)), Rat::from_int(8));
        assert_eq!(p.coeff(1), Rat::zero());
        assert_eq!(p.coeff(7), Rat::zero());
    }

    #[test]
    fn mixed_indeterminates_error() {
        let p = Poly::var(Var::X);
        let q = Poly::var(Var::Alpha);
        assert_eq!(
            p.checked_add(&q),
            Err(Error::VarMismatch("x", "alpha"))
        );
        // constants unify with anything
        assert!(p.checked_add(&Poly::constant(Rat::from_int(2))).is_ok());
    }

    #[test]
    fn degree_is_additive() {
        let p = Poly::from_coeffs(Var::X, vec![Rat::one(), Rat::one(), Rat::one()]);
        let q = Poly::from_coeffs(Var::X, vec![Rat::from_int(2), Rat::one()]);
        assert_eq!(
            (&p * &q).degree(),
            Some(p.degree().unwrap() + q.degree().unwrap())
        );
    }

    #[test]
    fn canonical_zero() {
        let p = Poly::from_coeffs(Var::X, vec![Rat::zero(), Rat::zero()]);
        assert!(p.is_zero());
        assert_eq!(p, Poly::zero());
        assert_eq!(p.degree(), None);
        // subtracting a poly from itself gives the canonical zero
        let q = Poly::from_coeffs(Var::X, vec![Rat::one(), Rat::frac(3, 2)]);
        assert_eq!(&q - &q, Poly::zero());
    }

    #[test]
    fn compose_and_derivative() {
        // p(x) = x^2 + 1 composed with 2*alpha gives 4*alpha^2 + 1
        let p = Poly::from_coeffs(Var::X, vec![Rat::one(), Rat::zero(), Rat::one()]);
        let inner = Poly::monomial(Var::Alpha, 1, Rat::from_int(2));
        let c = p.compose(&inner);
        assert_eq!(
            c,
            Poly::from_coeffs(Var::Alpha, vec![Rat::one(), Rat::zero(), Rat::from_int(4)])
        );
        assert_eq!(c.indeterminate(), Some(Var::Alpha));
        assert_eq!(
            c.derivative(),
            Poly::monomial(Var::Alpha, 1, Rat::from_int(8))
        );
    }

    #[test]
    fn rename_indeterminate() {
        let p = Poly::from_coeffs(Var::X, vec![Rat::one(), Rat::one()]);
        let q = p.with_var(Var::Alpha);
        assert_eq!(q.indeterminate(), Some(Var::Alpha));
        assert_ne!(p, q);
        assert_eq!(q.with_var(Var::X), p);
    }
}
