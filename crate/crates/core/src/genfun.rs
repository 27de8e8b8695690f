//! Truncated exact generating-function engine.
//!
//! Every exponential generating function is assembled from series
//! primitives (`exp`, Cauchy products, composition) over exact
//! coefficients; the closed form `(1+λt)^{x/λ}` is never evaluated
//! transcendentally — the degenerate exponential *is* the series whose
//! `t^n` coefficient is `(x)_{n,λ}/n!`. Coefficient extraction returns
//! `n!·[t^n]`, the normalization in which the combinatorial families
//! appear directly.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{factorial, Poly, Rat, Series, Var};
use crate::stirling::{deg_falling_eval, deg_falling_poly, DegParams};

/// Truncation-order cap for the engine.
pub const MAX_ORDER: usize = 64;

/// Default truncation order; covers the verification grids (n <= 12) with
/// margin.
pub const DEFAULT_ORDER: usize = 16;

fn inv_factorial(n: usize) -> Rat {
    Rat::from_bigint(factorial(n as u64))
        .recip()
        .expect("n! nonzero")
}

/// `e_λ^x(t)` for rational `x`: the series with `[t^n] = (x)_{n,λ}/n!`.
/// At λ = 0 this is the classical `e^{xt}`.
pub fn e_lambda_series(x: &Rat, lambda: &Rat, order: usize) -> Series<Rat> {
    Series::from_coeffs(
        (0..=order)
            .map(|n| deg_falling_eval(x, n, lambda) * inv_factorial(n))
            .collect(),
    )
}

/// `e_λ^x(t)` with `x` symbolic: coefficients `(x)_{n,λ}/n!` as
/// polynomials in `x`.
pub fn e_lambda_series_sym(lambda: &Rat, order: usize) -> Series<Poly> {
    Series::from_coeffs(
        (0..=order)
            .map(|n| deg_falling_poly(n, lambda).scale(&inv_factorial(n)))
            .collect(),
    )
}

/// `e_λ^m(t)` computed through the rescaling route `e_{λ/m}(mt)`
/// (substitute `t -> mt`, `λ -> λ/m`). Must agree with
/// `e_lambda_series(m, λ, ·)`; the property tests check exactly that.
pub fn e_lambda_pow_m_rescaled(m: u32, lambda: &Rat, order: usize) -> Series<Rat> {
    assert!(m >= 1);
    let mrat = Rat::from_int(m as i64);
    let lam_over_m = lambda.checked_div(&mrat).expect("m >= 1");
    e_lambda_series(&Rat::one(), &lam_over_m, order).rescale_t(&mrat)
}

/// `log_λ(1+t)`, the compositional inverse of `e_λ(t)`:
/// `[t^n] = λ^{n-1} (1)_{n,1/λ} / n!` for λ ≠ 0, and the classical
/// `(-1)^{n-1}/n` at λ = 0.
pub fn log_lambda_series(lambda: &Rat, order: usize) -> Series<Rat> {
    let coeffs = (0..=order)
        .map(|n| {
            if n == 0 {
                return Rat::zero();
            }
            if lambda.is_zero() {
                let sign = if n % 2 == 1 { 1 } else { -1 };
                Rat::frac(sign, n as i64)
            } else {
                let inv = lambda.recip().expect("lambda nonzero");
                lambda.pow(n as i64 - 1).expect("nonnegative power")
                    * deg_falling_eval(&Rat::one(), n, &inv)
                    * inv_factorial(n)
            }
        })
        .collect();
    Series::from_coeffs(coeffs)
}

/// Which generating function a [`GfSpec`] describes.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum GfKind {
    /// `e_λ^x(t)` — values `(x)_{n,λ}`.
    ExpDeg,
    /// `log_λ(1+t)` — values `λ^{n-1}(1)_{n,1/λ}`.
    LogDeg,
    /// `e^{x(e^t-1)}` — Bell polynomials `φ_n(x)`.
    Bell,
    /// `e^{x(e_λ(t)-1)}` — degenerate Bell polynomials `φ_{n,λ}(x)`.
    DegBell,
    /// `(log_λ(1+t))^k / k!` — degenerate first-kind Stirling column `k`.
    S1Deg,
    /// `(e_λ(t)-1)^k / k!` — degenerate second-kind Stirling column `k`.
    S2Deg,
    /// `e_λ(t) ((e_λ^m(t)-1)/m)^k / k!` — degenerate Whitney column `k`.
    DegWhitney,
    /// `e_λ(t) e^{(x/m)(e_λ^m(t)-1)}` — degenerate Dowling polynomials.
    DegDowling,
    /// `e_λ^r(t) e^{(x/m)(e_λ^m(t)-1)}` — degenerate r-Dowling polynomials.
    DegRDowling,
    /// `e^{-αt}(1+t)^x` — Charlier polynomials `C_n(x;α)`.
    Charlier,
}

impl GfKind {
    pub const ALL: [GfKind; 10] = [
        GfKind::ExpDeg,
        GfKind::LogDeg,
        GfKind::Bell,
        GfKind::DegBell,
        GfKind::S1Deg,
        GfKind::S2Deg,
        GfKind::DegWhitney,
        GfKind::DegDowling,
        GfKind::DegRDowling,
        GfKind::Charlier,
    ];

    pub fn needs_k(self) -> bool {
        matches!(self, GfKind::S1Deg | GfKind::S2Deg | GfKind::DegWhitney)
    }

    pub fn name(self) -> &'static str {
        match self {
            GfKind::ExpDeg => "exp-deg",
            GfKind::LogDeg => "log-deg",
            GfKind::Bell => "bell",
            GfKind::DegBell => "deg-bell",
            GfKind::S1Deg => "s1-deg",
            GfKind::S2Deg => "s2-deg",
            GfKind::DegWhitney => "deg-whitney",
            GfKind::DegDowling => "deg-dowling",
            GfKind::DegRDowling => "deg-r-dowling",
            GfKind::Charlier => "charlier",
        }
    }
}

impl std::str::FromStr for GfKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<GfKind> {
        let norm = s.to_ascii_lowercase().replace('_', "-");
        GfKind::ALL
            .into_iter()
            .find(|k| k.name() == norm)
            .ok_or_else(|| Error::UnknownId(s.to_string()))
    }
}

/// A generating function to expand: which family, its parameters, the
/// block index `k` where the family needs one, the truncation order, and
/// the `x` argument (`None` keeps `x` symbolic). Charlier additionally
/// takes a rational `α`.
#[derive(Clone, Debug, Serialize)]
pub struct GfSpec {
    pub kind: GfKind,
    pub params: DegParams,
    pub k: Option<usize>,
    pub order: usize,
    pub x: Option<Rat>,
    pub alpha: Option<Rat>,
}

impl GfSpec {
    pub fn new(kind: GfKind, params: DegParams, order: usize) -> GfSpec {
        GfSpec { kind, params, k: None, order, x: None, alpha: None }
    }

    pub fn with_k(mut self, k: usize) -> GfSpec {
        self.k = Some(k);
        self
    }

    pub fn with_x(mut self, x: Rat) -> GfSpec {
        self.x = Some(x);
        self
    }

    pub fn with_alpha(mut self, alpha: Rat) -> GfSpec {
        self.alpha = Some(alpha);
        self
    }
}

/// Coefficient list returned by [`gf_coefficients`]: rationals when every
/// argument is numeric, polynomials when `x` stays symbolic.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum CoeffList {
    Rats(Vec<Rat>),
    Polys(Vec<Poly>),
}

impl CoeffList {
    pub fn len(&self) -> usize {
        match self {
            CoeffList::Rats(v) => v.len(),
            CoeffList::Polys(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn as_rats(&self) -> Option<&[Rat]> {
        match self {
            CoeffList::Rats(v) => Some(v),
            CoeffList::Polys(_) => None,
        }
    }

    pub fn as_polys(&self) -> Option<&[Poly]> {
        match self {
            CoeffList::Polys(v) => Some(v),
            CoeffList::Rats(_) => None,
        }
    }
}

fn normalized_rat(s: &Series<Rat>) -> Vec<Rat> {
    s.coeffs()
        .iter()
        .enumerate()
        .map(|(n, c)| c * &Rat::from_bigint(factorial(n as u64)))
        .collect()
}

/// `n!·[t^n]` for a polynomial-coefficient series.
pub fn normalized_poly(s: &Series<Poly>) -> Vec<Poly> {
    s.coeffs()
        .iter()
        .enumerate()
        .map(|(n, c)| c.scale(&Rat::from_bigint(factorial(n as u64))))
        .collect()
}

fn x_arg(spec: &GfSpec) -> Poly {
    match &spec.x {
        Some(r) => Poly::constant(r.clone()),
        None => Poly::var(Var::X),
    }
}

/// `e^{arg·(base-1)}` where `base` has constant term 1 and `arg` is a
/// polynomial (possibly constant).
pub fn exp_of_scaled(base: &Series<Rat>, arg: &Poly, order: usize) -> Result<Series<Poly>> {
    let shifted = base.checked_sub(&Series::one(order))?;
    shifted.lift().scale_coeff(arg)?.exp()
}

/// `e^{-αt}(1+t)^x` with symbolic `α` and rational `x`; the dual view of
/// the Charlier expansion (coefficients are polynomials in `alpha`).
pub fn charlier_series_alpha_sym(x: &Rat, order: usize) -> Result<Series<Poly>> {
    let neg_alpha = Poly::monomial(Var::Alpha, 1, Rat::from_int(-1));
    let exp_part = Series::<Rat>::t(order).lift().scale_coeff(&neg_alpha)?.exp()?;
    // (1+t)^x = Σ (x)_n t^n / n! at rational x
    let binom_part = e_lambda_series(x, &Rat::one(), order).lift();
    exp_part.checked_mul(&binom_part)
}

/// Expands the spec's generating function and returns `n!·[t^n]` for
/// `n = 0..=order`. Each value equals the corresponding combinatorial
/// quantity computed by the basis-conversion route.
pub fn gf_coefficients(spec: &GfSpec) -> Result<CoeffList> {
    if spec.order > MAX_ORDER {
        return Err(Error::OrderTooLarge(spec.order, MAX_ORDER));
    }
    let order = spec.order;
    let lam = spec.params.lambda();
    let mrat = spec.params.m_rat();
    let k = || spec.k.ok_or(Error::MissingK(spec.kind.name()));

    match spec.kind {
        GfKind::ExpDeg => match &spec.x {
            Some(x) => Ok(CoeffList::Rats(normalized_rat(&e_lambda_series(
                x, lam, order,
            )))),
            None => Ok(CoeffList::Polys(normalized_poly(&e_lambda_series_sym(
                lam, order,
            )))),
        },
        GfKind::LogDeg => Ok(CoeffList::Rats(normalized_rat(&log_lambda_series(
            lam, order,
        )))),
        GfKind::Bell | GfKind::DegBell => {
            let lam = if spec.kind == GfKind::Bell { Rat::zero() } else { lam.clone() };
            let base = e_lambda_series(&Rat::one(), &lam, order);
            let series = exp_of_scaled(&base, &x_arg(spec), order)?;
            Ok(poly_or_rat(normalized_poly(&series), spec.x.is_some()))
        }
        GfKind::S1Deg => {
            let k = k()?;
            let series = log_lambda_series(lam, order).pow(k)?.scale(&inv_factorial(k));
            Ok(CoeffList::Rats(normalized_rat(&series)))
        }
        GfKind::S2Deg => {
            let k = k()?;
            let shifted =
                e_lambda_series(&Rat::one(), lam, order).checked_sub(&Series::one(order))?;
            let series = shifted.pow(k)?.scale(&inv_factorial(k));
            Ok(CoeffList::Rats(normalized_rat(&series)))
        }
        GfKind::DegWhitney => {
            let k = k()?;
            let em = e_lambda_series(&mrat, lam, order);
            let shifted = em
                .checked_sub(&Series::one(order))?
                .scale(&mrat.recip().expect("m >= 1"));
            let block = shifted.pow(k)?.scale(&inv_factorial(k));
            let series = e_lambda_series(&Rat::one(), lam, order).checked_mul(&block)?;
            Ok(CoeffList::Rats(normalized_rat(&series)))
        }
        GfKind::DegDowling | GfKind::DegRDowling => {
            let r = if spec.kind == GfKind::DegDowling { 1 } else { spec.params.r() };
            let x_over_m = x_arg(spec).scale(&mrat.recip().expect("m >= 1"));
            let em = e_lambda_series(&mrat, lam, order);
            let exp_part = exp_of_scaled(&em, &x_over_m, order)?;
            let front = e_lambda_series(&Rat::from_int(r as i64), lam, order).lift();
            let series = front.checked_mul(&exp_part)?;
            Ok(poly_or_rat(normalized_poly(&series), spec.x.is_some()))
        }
        GfKind::Charlier => {
            let alpha = spec
                .alpha
                .clone()
                .ok_or_else(|| Error::InvalidParams("charlier needs a rational alpha".into()))?;
            let exp_part = Series::<Rat>::t(order).scale(&(-&alpha)).exp()?;
            let binom_part = match &spec.x {
                Some(x) => e_lambda_series(x, &Rat::one(), order).lift(),
                None => e_lambda_series_sym(&Rat::one(), order),
            };
            let series = exp_part.lift().checked_mul(&binom_part)?;
            Ok(poly_or_rat(normalized_poly(&series), spec.x.is_some()))
        }
    }
}

fn poly_or_rat(polys: Vec<Poly>, numeric: bool) -> CoeffList {
    if numeric {
        CoeffList::Rats(
            polys
                .into_iter()
                .map(|p| p.as_constant().expect("numeric spec yields constants"))
                .collect(),
        )
    } else {
        CoeffList::Polys(polys)
    }
}
