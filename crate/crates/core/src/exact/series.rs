//! Truncated formal power series in `t`.
//!
//! A [`Series`] of order `N` keeps the coefficients of `t^0 .. t^N`; all
//! operations are exact modulo `t^{N+1}`. Coefficients come from one of two
//! rings: [`Rat`] or [`Poly`] in a single indeterminate (there is no
//! bivariate ring — two-parameter checks are done pointwise plus a degree
//! bound, see the verification layer).

use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{Poly, Rat};

/// Coefficient ring for [`Series`].
pub trait Coeff: Clone + PartialEq + fmt::Debug + fmt::Display + Serialize {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Result<Self>;
    fn sub(&self, rhs: &Self) -> Result<Self>;
    fn mul(&self, rhs: &Self) -> Result<Self>;
    /// Multiplication by a rational scalar (always exact).
    fn scale(&self, c: &Rat) -> Self;
}

impl Coeff for Rat {
    fn zero() -> Rat {
        Rat::zero()
    }
    fn one() -> Rat {
        Rat::one()
    }
    fn is_zero(&self) -> bool {
        Rat::is_zero(self)
    }
    fn add(&self, rhs: &Rat) -> Result<Rat> {
        Ok(self + rhs)
    }
    fn sub(&self, rhs: &Rat) -> Result<Rat> {
        Ok(self - rhs)
    }
    fn mul(&self, rhs: &Rat) -> Result<Rat> {
        Ok(self * rhs)
    }
    fn scale(&self, c: &Rat) -> Rat {
        self * c
    }
}

impl Coeff for Poly {
    fn zero() -> Poly {
        Poly::zero()
    }
    fn one() -> Poly {
        Poly::one()
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn add(&self, rhs: &Poly) -> Result<Poly> {
        self.checked_add(rhs)
    }
    fn sub(&self, rhs: &Poly) -> Result<Poly> {
        self.checked_sub(rhs)
    }
    fn mul(&self, rhs: &Poly) -> Result<Poly> {
        self.checked_mul(rhs)
    }
    fn scale(&self, c: &Rat) -> Poly {
        Poly::scale(self, c)
    }
}

/// Formal power series truncated after `t^order`.
#[derive(Clone, PartialEq, Debug)]
pub struct Series<C> {
    coeffs: Vec<C>, // length = order + 1
}

impl<C: Coeff> Series<C> {
    pub fn zero(order: usize) -> Series<C> {
        Series { coeffs: vec![C::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Series<C> {
        Series::constant(C::one(), order)
    }

    pub fn constant(c: C, order: usize) -> Series<C> {
        let mut s = Series::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// The series `t` (zero if `order == 0`).
    pub fn t(order: usize) -> Series<C> {
        let mut s = Series::zero(order);
        if order >= 1 {
            s.coeffs[1] = C::one();
        }
        s
    }

    /// From the dense coefficient list `c_0 .. c_N`; must be nonempty.
    pub fn from_coeffs(coeffs: Vec<C>) -> Series<C> {
        assert!(!coeffs.is_empty(), "a series stores at least t^0");
        Series { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &C {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(C::is_zero)
    }

    fn check_order(&self, rhs: &Series<C>) -> Result<()> {
        if self.order() != rhs.order() {
            return Err(Error::OrderMismatch(self.order(), rhs.order()));
        }
        Ok(())
    }

    pub fn checked_add(&self, rhs: &Series<C>) -> Result<Series<C>> {
        self.check_order(rhs)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a.add(b))
            .collect::<Result<_>>()?;
        Ok(Series { coeffs })
    }

    pub fn checked_sub(&self, rhs: &Series<C>) -> Result<Series<C>> {
        self.check_order(rhs)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a.sub(b))
            .collect::<Result<_>>()?;
        Ok(Series { coeffs })
    }

    /// Cauchy product truncated at the common order.
    pub fn checked_mul(&self, rhs: &Series<C>) -> Result<Series<C>> {
        self.check_order(rhs)?;
        let n = self.order();
        let mut coeffs = vec![C::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if i + j > n {
                    break;
                }
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b)?)?;
            }
        }
        Ok(Series { coeffs })
    }

    /// Scalar multiple.
    pub fn scale(&self, c: &Rat) -> Series<C> {
        Series {
            coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect(),
        }
    }

    /// Coefficient-wise multiplication by a fixed ring element.
    pub fn scale_coeff(&self, c: &C) -> Result<Series<C>> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|a| a.mul(c))
            .collect::<Result<_>>()?;
        Ok(Series { coeffs })
    }

    /// `self^k` by repeated multiplication.
    pub fn pow(&self, k: usize) -> Result<Series<C>> {
        let mut acc = Series::one(self.order());
        for _ in 0..k {
            acc = acc.checked_mul(self)?;
        }
        Ok(acc)
    }

    /// Exponential `sum_k self^k / k!`; the constant term must vanish
    /// (otherwise the result needs a transcendental constant).
    pub fn exp(&self) -> Result<Series<C>> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm(format!("{}", self.coeffs[0])));
        }
        let n = self.order();
        let mut acc = Series::one(n);
        let mut power = Series::one(n);
        let mut kfact = Rat::one();
        for k in 1..=n {
            power = power.checked_mul(self)?;
            kfact *= &Rat::from_int(k as i64);
            acc = acc.checked_add(&power.scale(&kfact.recip().expect("k! nonzero")))?;
        }
        Ok(acc)
    }

    /// Composition `self(inner)`, Horner style; `inner` must have zero
    /// constant term so the truncation stays exact.
    pub fn compose(&self, inner: &Series<C>) -> Result<Series<C>> {
        self.check_order(inner)?;
        if !inner.coeffs[0].is_zero() {
            return Err(Error::NonzeroInnerConstant(format!("{}", inner.coeffs[0])));
        }
        let n = self.order();
        let mut acc = Series::zero(n);
        for c in self.coeffs.iter().rev() {
            acc = acc.checked_mul(inner)?;
            acc.coeffs[0] = acc.coeffs[0].add(c)?;
        }
        Ok(acc)
    }

    /// The substitution `t -> c*t`: coefficient of `t^n` is scaled by `c^n`.
    pub fn rescale_t(&self, c: &Rat) -> Series<C> {
        let mut pow = Rat::one();
        let coeffs = self
            .coeffs
            .iter()
            .map(|a| {
                let out = a.scale(&pow);
                pow *= c;
                out
            })
            .collect();
        Series { coeffs }
    }
}

impl Series<Rat> {
    /// Lifts rational coefficients into (constant) polynomial coefficients.
    pub fn lift(&self) -> Series<Poly> {
        Series {
            coeffs: self.coeffs.iter().cloned().map(Poly::constant).collect(),
        }
    }
}

impl<C: Coeff> fmt::Display for Series<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if wrote {
                f.write_str(" + ")?;
            }
            match n {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*t")?,
                _ => write!(f, "({c})*t^{n}")?,
            }
            wrote = true;
        }
        if !wrote {
            f.write_str("0")?;
        }
        write!(f, " + O(t^{})", self.order() + 1)
    }
}

impl<C: Coeff> Serialize for Series<C> {
    /// `{order, coeffs}` with the ring's own coefficient encoding.
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("Series", 2)?;
        st.serialize_field("order", &self.order())?;
        st.serialize_field("coeffs", &self.coeffs)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Var;

    fn rat_series(vals: &[(i64, i64)]) -> Series<Rat> {
        Series::from_coeffs(vals.iter().map(|&(p, q)| Rat::frac(p, q)).collect())
    }

    #[test]
    fn cauchy_product() {
        // (1+t)(1-t) = 1 - t^2 at order 2
        let a = rat_series(&[(1, 1), (1, 1), (0, 1)]);
        let b = rat_series(&[(1, 1), (-1, 1), (0, 1)]);
        assert_eq!(a.checked_mul(&b).unwrap(), rat_series(&[(1, 1), (0, 1), (-1, 1)]));
    }

    #[test]
    fn exp_square_is_exp_of_double() {
        // (sum t^n/n!)^2 must match the coefficients of exp(2t): 1, 2, 2, 4/3
        let e = rat_series(&[(1, 1), (1, 1), (1, 2), (1, 6)]);
        let sq = e.checked_mul(&e).unwrap();
        assert_eq!(sq, rat_series(&[(1, 1), (2, 1), (2, 1), (4, 3)]));
    }

    #[test]
    fn zero_absorbs() {
        let a = rat_series(&[(3, 2), (1, 1), (7, 5)]);
        let z = Series::<Rat>::zero(2);
        assert_eq!(a.checked_mul(&z).unwrap(), z);
    }

    #[test]
    fn order_mismatch_is_an_error() {
        let a = Series::<Rat>::one(2);
        let b = Series::<Rat>::one(3);
        assert!(matches!(a.checked_mul(&b), Err(Error::OrderMismatch(2, 3))));
    }

    #[test]
    fn exp_of_t() {
        let e = Series::<Rat>::t(3).exp().unwrap();
        assert_eq!(e, rat_series(&[(1, 1), (1, 1), (1, 2), (1, 6)]));
        assert_eq!(Series::<Rat>::zero(4).exp().unwrap(), Series::one(4));
    }

    #[test]
    fn exp_rejects_constant_term() {
        let s = Series::<Rat>::one(3);
        assert!(matches!(s.exp(), Err(Error::NonzeroConstantTerm(_))));
    }

    #[test]
    fn exp_of_symbolic_argument() {
        // exp(x t) at order 2 = 1 + x t + x^2 t^2 / 2
        let x = Poly::var(Var::X);
        let s = Series::from_coeffs(vec![Poly::zero(), x.clone(), Poly::zero()]);
        let e = s.exp().unwrap();
        assert_eq!(e.coeff(0), &Poly::one());
        assert_eq!(e.coeff(1), &x);
        assert_eq!(e.coeff(2), &x.pow(2).scale(&Rat::frac(1, 2)));
    }

    #[test]
    fn compose_linear() {
        // (1 + t) o (2t) = 1 + 2t
        let outer = rat_series(&[(1, 1), (1, 1)]);
        let inner = rat_series(&[(0, 1), (2, 1)]);
        assert_eq!(outer.compose(&inner).unwrap(), rat_series(&[(1, 1), (2, 1)]));
    }

    #[test]
    fn compose_exp_with_log() {
        // exp(log(1+t)) = 1 + t through order 5
        let order = 5;
        let exp = Series::<Rat>::t(order).exp().unwrap();
        let log: Series<Rat> = Series::from_coeffs(
            (0..=order)
                .map(|n| {
                    if n == 0 {
                        Rat::zero()
                    } else {
                        let sign = if n % 2 == 1 { 1 } else { -1 };
                        Rat::frac(sign, n as i64)
                    }
                })
                .collect(),
        );
        let got = exp.compose(&log).unwrap();
        let mut expected = Series::<Rat>::t(order);
        expected = expected.checked_add(&Series::one(order)).unwrap();
        assert_eq!(got, expected);
    }

    #[test]
    fn compose_with_zero_inner() {
        let s = rat_series(&[(5, 3), (1, 1), (2, 1)]);
        let got = s.compose(&Series::zero(2)).unwrap();
        assert_eq!(got, Series::constant(Rat::frac(5, 3), 2));
    }

    #[test]
    fn compose_rejects_nonzero_inner_constant() {
        let s = Series::<Rat>::one(2);
        assert!(matches!(
            s.compose(&Series::one(2)),
            Err(Error::NonzeroInnerConstant(_))
        ));
    }

    #[test]
    fn rescale() {
        let s = rat_series(&[(1, 1), (1, 1), (1, 1)]);
        let r = s.rescale_t(&Rat::from_int(3));
        assert_eq!(r, rat_series(&[(1, 1), (3, 1), (9, 1)]));
    }

    #[test]
    fn serialization_shapes() {
        // Rat -> "p/q" string, Poly -> coefficient array, Series -> {order, coeffs}
        assert_eq!(serde_json::to_string(&Rat::frac(-3, 2)).unwrap(), r#""-3/2""#);
        let p = Poly::from_coeffs(Var::X, vec![Rat::frac(1, 2), Rat::zero(), Rat::one()]);
        assert_eq!(serde_json::to_string(&p).unwrap(), r#"["1/2","0","1"]"#);
        let s = rat_series(&[(1, 1), (-1, 3)]);
        assert_eq!(
            serde_json::to_string(&s).unwrap(),
            r#"{"order":1,"coeffs":["1","-1/3"]}"#
        );
        let ps = Series::from_coeffs(vec![Poly::one(), p]);
        assert_eq!(
            serde_json::to_string(&ps).unwrap(),
            r#"{"order":1,"coeffs":[["1"],["1/2","0","1"]]}"#
        );
    }
}
