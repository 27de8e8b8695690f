//! Whitney numbers, Dowling polynomials, and Charlier polynomials, together
//! with the closed-form right-hand sides of the moment identities.
//!
//! The degenerate r-Whitney numbers of the second kind are defined by
//! `(mx+r)_{n,λ} = Σ_k W⁽ʳ⁾_{m,λ}(n,k) m^k (x)_k`: expand the shifted
//! degenerate falling factorial, convert to the falling-factorial basis,
//! and strip the `m^k` normalization. All other families reduce to that
//! expansion or to a triangular basis change, so everything is exact.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{binom, Poly, Rat, Var};
use crate::stirling::{
    change_basis, deg_bell_poly, deg_falling_eval, deg_falling_poly, falling_poly,
    stirling_table, to_falling_basis, DegParams, TriangleKind, TriangleTable,
};

fn m_pow(params: &DegParams, e: usize) -> Rat {
    params.m_rat().pow(e as i64).expect("nonnegative power")
}

/// `(mx + r)_{n,λ}` expanded as a polynomial in `x`.
pub fn shifted_deg_falling_poly(params: &DegParams, n: usize) -> Poly {
    let affine = &Poly::monomial(Var::X, 1, params.m_rat()) + &Poly::constant(params.r_rat());
    deg_falling_poly(n, params.lambda()).compose(&affine)
}

/// Row `n` of the degenerate r-Whitney triangle of the second kind:
/// `W⁽ʳ⁾_{m,λ}(n,k)` for `k = 0..=n`.
pub fn deg_r_whitney2_row(params: &DegParams, n: usize) -> Vec<Rat> {
    let mut coeffs = to_falling_basis(&shifted_deg_falling_poly(params, n));
    coeffs.resize(n + 1, Rat::zero());
    for (k, c) in coeffs.iter_mut().enumerate() {
        *c = c
            .checked_div(&m_pow(params, k))
            .expect("m >= 1 by construction");
    }
    coeffs
}

/// Degenerate r-Whitney number of the second kind `W⁽ʳ⁾_{m,λ}(n,k)`;
/// zero outside `0 <= k <= n`.
pub fn deg_r_whitney2(params: &DegParams, n: usize, k: i64) -> Rat {
    if k < 0 || k as usize > n {
        return Rat::zero();
    }
    deg_r_whitney2_row(params, n)[k as usize].clone()
}

/// Degenerate Whitney number of the second kind `W_{m,λ}(n,k)`, the `r = 1`
/// case.
pub fn deg_whitney2(params: &DegParams, n: usize, k: i64) -> Rat {
    deg_r_whitney2(&params.with_r(1), n, k)
}

/// Classical Whitney numbers of the second kind `W_m(n,k)`, from the
/// expansion `(mx+1)^n = Σ_k W_m(n,k) m^k (x)_k`. Built by raising the
/// affine polynomial to the n-th power directly, so it stays an
/// independent route from the degenerate λ = 0 expansion.
pub fn whitney_classical(m: u32, n: usize, k: i64) -> BigInt {
    if k < 0 || k as usize > n {
        return BigInt::from(0);
    }
    let mrat = Rat::from_int(m as i64);
    let p = (&Poly::monomial(Var::X, 1, mrat.clone()) + &Poly::one()).pow(n);
    let mut coeffs = to_falling_basis(&p);
    coeffs.resize(n + 1, Rat::zero());
    coeffs[k as usize]
        .checked_div(&mrat.pow(k).expect("nonnegative power"))
        .expect("m >= 1")
        .to_bigint()
        .expect("classical Whitney numbers are integers")
}

/// Classical Whitney numbers of the first kind `V_m(n,k)`, defined by
/// `m^n (x)_n = Σ_k V_m(n,k) (mx+1)^k`. The basis `{(mx+1)^k}` is
/// triangular with leading coefficients `m^k`, so back-substitution is
/// exact.
pub fn whitney_first(m: u32, n: usize, k: i64) -> BigInt {
    if k < 0 || k as usize > n {
        return BigInt::from(0);
    }
    let mrat = Rat::from_int(m as i64);
    let target = falling_poly(n).scale(&mrat.pow(n as i64).expect("nonnegative power"));
    let basis =
        |j: usize| (&Poly::monomial(Var::X, 1, mrat.clone()) + &Poly::one()).pow(j);
    let mut coeffs = change_basis(&target, &basis);
    coeffs.resize(n + 1, Rat::zero());
    coeffs[k as usize]
        .to_bigint()
        .expect("classical Whitney numbers are integers")
}

/// Classical Dowling polynomial `D_m(n,x) = Σ_k W_m(n,k) x^k`.
pub fn dowling_poly(m: u32, n: usize) -> Poly {
    let params = DegParams::new(Rat::zero(), m, 1).expect("m >= 1");
    deg_r_dowling_poly(&params, n)
}

/// Degenerate Dowling polynomial `D_{m,λ}(n,x)`, the `r = 1` case.
pub fn deg_dowling_poly(params: &DegParams, n: usize) -> Poly {
    deg_r_dowling_poly(&params.with_r(1), n)
}

/// Degenerate r-Dowling polynomial `D⁽ʳ⁾_{m,λ}(n,x) = Σ_k W⁽ʳ⁾_{m,λ}(n,k) x^k`.
pub fn deg_r_dowling_poly(params: &DegParams, n: usize) -> Poly {
    Poly::from_coeffs(Var::X, deg_r_whitney2_row(params, n))
}

/// Which Whitney triangle a [`WhitneyTable`] holds.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum WhitneyKind {
    /// Classical second kind `W_m(n,k)`.
    WClassical,
    /// Classical first kind `V_m(n,k)`.
    VClassical,
    /// Degenerate second kind `W_{m,λ}(n,k)` (r = 1).
    WDeg,
    /// Degenerate r-shifted second kind `W⁽ʳ⁾_{m,λ}(n,k)`.
    WRDeg,
}

/// Lower-triangular table of Whitney numbers, rows `0..=nmax`.
#[derive(Clone, Debug, Serialize)]
pub struct WhitneyTable {
    kind: WhitneyKind,
    params: DegParams,
    nmax: usize,
    rows: Vec<Vec<Rat>>,
}

impl WhitneyTable {
    pub fn build(kind: WhitneyKind, params: &DegParams, nmax: usize) -> WhitneyTable {
        let eff = match kind {
            WhitneyKind::WClassical | WhitneyKind::VClassical => {
                DegParams::new(Rat::zero(), params.m(), 1).expect("m >= 1")
            }
            WhitneyKind::WDeg => params.with_r(1),
            WhitneyKind::WRDeg => params.clone(),
        };
        let rows = (0..=nmax)
            .map(|n| match kind {
                WhitneyKind::VClassical => (0..=n as i64)
                    .map(|k| Rat::from_bigint(whitney_first(eff.m(), n, k)))
                    .collect(),
                _ => deg_r_whitney2_row(&eff, n),
            })
            .collect();
        WhitneyTable { kind, params: eff, nmax, rows }
    }

    pub fn kind(&self) -> WhitneyKind {
        self.kind
    }

    pub fn params(&self) -> &DegParams {
        &self.params
    }

    pub fn nmax(&self) -> usize {
        self.nmax
    }

    pub fn entry(&self, n: usize, k: i64) -> Rat {
        assert!(n <= self.nmax);
        if k < 0 || k as usize > n {
            return Rat::zero();
        }
        self.rows[n][k as usize].clone()
    }

    pub fn row(&self, n: usize) -> &[Rat] {
        &self.rows[n]
    }
}

/// How the Charlier parameter is supplied.
#[derive(Clone, Debug, PartialEq)]
pub enum CharlierParam {
    Exact(Rat),
    /// Keep the parameter as the symbolic indeterminate `alpha`.
    Symbolic,
}

/// Charlier polynomial `C_n(x; α)`, stored as coefficients in `x` whose
/// entries are polynomials in `alpha` (constants when the parameter is
/// exact). The leading `x`-coefficient is always 1.
#[derive(Clone, Debug, PartialEq)]
pub struct CharlierPoly {
    n: usize,
    coeffs: Vec<Poly>,
}

impl CharlierPoly {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Coefficient of `x^l` as a polynomial in `alpha`.
    pub fn coeff(&self, l: usize) -> Poly {
        self.coeffs.get(l).cloned().unwrap_or_else(Poly::zero)
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    /// Evaluates the `x` argument, leaving a polynomial in `alpha`.
    pub fn eval_x(&self, x: &Rat) -> Poly {
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &acc.scale(x) + c;
        }
        acc
    }

    /// Full evaluation at rational `x` and `α`.
    pub fn eval(&self, x: &Rat, alpha: &Rat) -> Rat {
        self.eval_x(x).eval(alpha)
    }

    /// The polynomial in `x`, available when the parameter was exact.
    pub fn poly_in_x(&self) -> Result<Poly> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                c.as_constant().ok_or_else(|| {
                    Error::InvalidParams(
                        "Charlier coefficients are symbolic in alpha; evaluate alpha first"
                            .into(),
                    )
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::from_coeffs(Var::X, coeffs))
    }
}

/// Charlier polynomial via the double sum
/// `C_n(x;α) = Σ_l (Σ_{k=l}^n C(n,k) (-1)^{n-k} α^{n-k} S1(k,l)) x^l`.
pub fn charlier_poly(n: usize, alpha: &CharlierParam) -> CharlierPoly {
    let s1: Arc<TriangleTable> = stirling_table(TriangleKind::S1, &Rat::zero(), n);
    let alpha_pow = |e: usize| -> Poly {
        match alpha {
            CharlierParam::Exact(a) => {
                Poly::constant(a.pow(e as i64).expect("nonnegative power"))
            }
            CharlierParam::Symbolic => Poly::monomial(Var::Alpha, e, Rat::one()),
        }
    };
    let coeffs = (0..=n)
        .map(|l| {
            let mut acc = Poly::zero();
            for k in l..=n {
                let sign = if (n - k) % 2 == 0 { Rat::one() } else { Rat::from_int(-1) };
                let c = Rat::from_bigint(binom(n as u64, k as i64))
                    * sign
                    * s1.entry(k, l as i64);
                if c.is_zero() {
                    continue;
                }
                acc = &acc + &alpha_pow(n - k).scale(&c);
            }
            acc
        })
        .collect();
    CharlierPoly { n, coeffs }
}

/// Identifier of a closed-form right-hand side from the moment identities.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum ThmId {
    T2,
    C3,
    C5,
    T6,
    T7,
    T8,
    T9,
    T10,
    T11,
}

impl ThmId {
    pub const ALL: [ThmId; 9] = [
        ThmId::T2,
        ThmId::C3,
        ThmId::C5,
        ThmId::T6,
        ThmId::T7,
        ThmId::T8,
        ThmId::T9,
        ThmId::T10,
        ThmId::T11,
    ];
}

impl fmt::Display for ThmId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for ThmId {
    type Err = Error;

    fn from_str(s: &str) -> Result<ThmId> {
        match s.to_ascii_uppercase().as_str() {
            "T2" => Ok(ThmId::T2),
            "C3" => Ok(ThmId::C3),
            "C5" => Ok(ThmId::C5),
            "T6" => Ok(ThmId::T6),
            "T7" => Ok(ThmId::T7),
            "T8" => Ok(ThmId::T8),
            "T9" => Ok(ThmId::T9),
            "T10" => Ok(ThmId::T10),
            "T11" => Ok(ThmId::T11),
            _ => Err(Error::UnknownId(s.to_string())),
        }
    }
}

/// `W⁽ʳ⁾_{m,λ}(n,j)` by the double-sum closed form
/// `Σ_{k=j}^n Σ_{l=j}^k C(n,k) C(k,l) (r-1)_{n-k,λ} (1)_{k-l,λ} m^{l-j} S2_{λ/m}(l,j)`.
pub fn thm7_whitney_rhs(params: &DegParams, n: usize, j: usize) -> Rat {
    let lam = params.lambda();
    let mu = params.lambda_over_m();
    let s2 = stirling_table(TriangleKind::S2Deg, &mu, n);
    let r_minus_1 = params.r_rat() - Rat::one();
    let mut acc = Rat::zero();
    for k in j..=n {
        let outer = Rat::from_bigint(binom(n as u64, k as i64))
            * deg_falling_eval(&r_minus_1, n - k, lam);
        if outer.is_zero() {
            continue;
        }
        for l in j..=k {
            acc += &(outer.clone()
                * Rat::from_bigint(binom(k as u64, l as i64))
                * deg_falling_eval(&Rat::one(), k - l, lam)
                * m_pow(params, l - j)
                * s2.entry(l, j as i64));
        }
    }
    acc
}

/// `W⁽ʳ⁾_{m,λ}(n,j)` by the single-sum closed form
/// `Σ_{l=j}^n C(n,l) (r)_{n-l,λ} m^{l-j} S2_{λ/m}(l,j)`.
pub fn thm8_whitney_rhs(params: &DegParams, n: usize, j: usize) -> Rat {
    let lam = params.lambda();
    let mu = params.lambda_over_m();
    let s2 = stirling_table(TriangleKind::S2Deg, &mu, n);
    let mut acc = Rat::zero();
    for l in j..=n {
        acc += &(Rat::from_bigint(binom(n as u64, l as i64))
            * deg_falling_eval(&params.r_rat(), n - l, lam)
            * m_pow(params, l - j)
            * s2.entry(l, j as i64));
    }
    acc
}

/// Evaluates the named closed form as an exact polynomial in `alpha`.
///
/// Every identity the closed forms participate in has the shape
/// "closed form = (degenerate) Dowling/Bell polynomial", so the evaluator
/// keeps α symbolic and λ pointwise; the verification layer certifies the
/// λ-dependence at enough rational points.
///
/// `C3` is the `m = 1` identity and ignores `params.m`; `T2` is the
/// `r = 1` identity and `T10` the `r = m` identity, both ignore `params.r`.
pub fn thm_rhs(id: ThmId, params: &DegParams, n: usize) -> Poly {
    let alpha = Poly::var(Var::Alpha);
    let lam = params.lambda();
    match id {
        ThmId::T2 => {
            // Σ_j α^j Σ_{k=j}^n C(n,k) (1)_{n-k,λ} m^{k-j} S2_{λ/m}(k,j)
            let mu = params.lambda_over_m();
            let s2 = stirling_table(TriangleKind::S2Deg, &mu, n);
            let coeffs = (0..=n)
                .map(|j| {
                    let mut acc = Rat::zero();
                    for k in j..=n {
                        acc += &(Rat::from_bigint(binom(n as u64, k as i64))
                            * deg_falling_eval(&Rat::one(), n - k, lam)
                            * m_pow(params, k - j)
                            * s2.entry(k, j as i64));
                    }
                    acc
                })
                .collect();
            Poly::from_coeffs(Var::Alpha, coeffs)
        }
        ThmId::C3 => {
            // Σ_k ((k+1) S2λ(n,k+1) + S2λ(n,k)) α^k, with S2λ(n,n+1) = 0
            let s2 = stirling_table(TriangleKind::S2Deg, lam, n + 1);
            let coeffs = (0..=n as i64)
                .map(|k| Rat::from_int(k + 1) * s2.entry(n, k + 1) + s2.entry(n, k))
                .collect();
            Poly::from_coeffs(Var::Alpha, coeffs)
        }
        ThmId::C5 => {
            // Σ_k C(n,k) (r)_{n-k,λ} m^k φ_{k,λ/m}(α/m)
            let mu = params.lambda_over_m();
            let alpha_over_m = alpha.scale(&params.m_rat().recip().expect("m >= 1"));
            let mut acc = Poly::zero();
            for k in 0..=n {
                let c = Rat::from_bigint(binom(n as u64, k as i64))
                    * deg_falling_eval(&params.r_rat(), n - k, lam)
                    * m_pow(params, k);
                if c.is_zero() {
                    continue;
                }
                let bell = deg_bell_poly(k, &mu).compose(&alpha_over_m);
                acc = &acc + &bell.scale(&c);
            }
            acc
        }
        ThmId::T6 => {
            // Σ_j (Σ_{k=j}^n W⁽ʳ⁾_{m,λ}(n,k) m^k S1(k,j)) φ_j(α/m)
            let s1 = stirling_table(TriangleKind::S1, &Rat::zero(), n);
            let whitney = deg_r_whitney2_row(params, n);
            let alpha_over_m = alpha.scale(&params.m_rat().recip().expect("m >= 1"));
            let mut acc = Poly::zero();
            for j in 0..=n {
                let mut c = Rat::zero();
                for k in j..=n {
                    c += &(whitney[k].clone() * m_pow(params, k) * s1.entry(k, j as i64));
                }
                if c.is_zero() {
                    continue;
                }
                let bell = deg_bell_poly(j, &Rat::zero()).compose(&alpha_over_m);
                acc = &acc + &bell.scale(&c);
            }
            acc
        }
        ThmId::T7 => {
            let coeffs = (0..=n).map(|j| thm7_whitney_rhs(params, n, j)).collect();
            Poly::from_coeffs(Var::Alpha, coeffs)
        }
        ThmId::T8 => {
            let coeffs = (0..=n).map(|j| thm8_whitney_rhs(params, n, j)).collect();
            Poly::from_coeffs(Var::Alpha, coeffs)
        }
        ThmId::T9 => {
            // Σ_k C_k(0;α) (-1)^k S2_{λ/m}(n,k)
            let mu = params.lambda_over_m();
            let s2 = stirling_table(TriangleKind::S2Deg, &mu, n);
            let mut acc = Poly::zero();
            for k in 0..=n {
                let sign = if k % 2 == 0 { Rat::one() } else { Rat::from_int(-1) };
                let c = sign * s2.entry(n, k as i64);
                if c.is_zero() {
                    continue;
                }
                let charlier_at_0 =
                    charlier_poly(k, &CharlierParam::Symbolic).eval_x(&Rat::zero());
                acc = &acc + &charlier_at_0.scale(&c);
            }
            acc
        }
        ThmId::T10 => {
            // Σ_k C_k(1; -α/m) m^n S2_{λ/m}(n,k)
            let mu = params.lambda_over_m();
            let s2 = stirling_table(TriangleKind::S2Deg, &mu, n);
            let neg_alpha_over_m = alpha.scale(&(-&params.m_rat().recip().expect("m >= 1")));
            let mn = m_pow(params, n);
            let mut acc = Poly::zero();
            for k in 0..=n {
                let c = mn.clone() * s2.entry(n, k as i64);
                if c.is_zero() {
                    continue;
                }
                let charlier = charlier_poly(k, &CharlierParam::Symbolic)
                    .eval_x(&Rat::one())
                    .compose(&neg_alpha_over_m);
                acc = &acc + &charlier.scale(&c);
            }
            acc
        }
        ThmId::T11 => {
            // m^n Σ_k C_k(r/m; -α/m) S2_{λ/m}(n,k)
            let mu = params.lambda_over_m();
            let s2 = stirling_table(TriangleKind::S2Deg, &mu, n);
            let r_over_m = params.r_rat().checked_div(&params.m_rat()).expect("m >= 1");
            let neg_alpha_over_m = alpha.scale(&(-&params.m_rat().recip().expect("m >= 1")));
            let mut acc = Poly::zero();
            for k in 0..=n {
                let c = s2.entry(n, k as i64);
                if c.is_zero() {
                    continue;
                }
                let charlier = charlier_poly(k, &CharlierParam::Symbolic)
                    .eval_x(&r_over_m)
                    .compose(&neg_alpha_over_m);
                acc = &acc + &charlier.scale(&c);
            }
            acc.scale(&m_pow(params, n))
        }
    }
}
