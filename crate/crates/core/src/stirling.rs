//! Classical and degenerate Stirling numbers, falling factorials, and
//! (degenerate) Bell polynomials.
//!
//! The degenerate Stirling numbers are *defined* here by triangular basis
//! conversion: the second kind expands the degenerate falling factorial
//! `(x)_{n,λ} = x(x-λ)···(x-(n-1)λ)` over the classical falling factorials
//! `(x)_k`, the first kind expands `(x)_n` over `(x)_{k,λ}`. Both bases are
//! monic, so the conversion is exact back-substitution against a
//! unitriangular matrix. The one-step recurrence is kept out of this path
//! and used as an independent oracle by the test suites.
//!
//! λ = 0 is admitted everywhere and reproduces the classical numbers.

use std::collections::HashMap;
use std::sync::{Arc, LazyLock, Mutex};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{Poly, Rat, Var};

/// Parameter triple `(λ, m, r)` for the degenerate families: λ is the
/// degeneracy step, `m >= 1` the group order, `r >= 0` the shift.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct DegParams {
    lambda: Rat,
    m: u32,
    r: u32,
}

impl DegParams {
    pub fn new(lambda: Rat, m: u32, r: u32) -> Result<DegParams> {
        if m < 1 {
            return Err(Error::InvalidParams(format!("m must be >= 1, got {m}")));
        }
        Ok(DegParams { lambda, m, r })
    }

    pub fn lambda(&self) -> &Rat {
        &self.lambda
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn m_rat(&self) -> Rat {
        Rat::from_int(self.m as i64)
    }

    pub fn r_rat(&self) -> Rat {
        Rat::from_int(self.r as i64)
    }

    /// λ/m, the degeneracy step after the `t -> mt` rescaling.
    pub fn lambda_over_m(&self) -> Rat {
        self.lambda
            .checked_div(&self.m_rat())
            .expect("m >= 1 by construction")
    }

    pub fn with_r(&self, r: u32) -> DegParams {
        DegParams { lambda: self.lambda.clone(), m: self.m, r }
    }
}

/// The falling factorial `(x)_n = x(x-1)···(x-n+1)` as a polynomial;
/// `(x)_0 = 1`.
pub fn falling_poly(n: usize) -> Poly {
    deg_falling_poly(n, &Rat::one())
}

/// The degenerate falling factorial `(x)_{n,λ} = x(x-λ)···(x-(n-1)λ)` as a
/// polynomial; reduces to `(x)_n` at λ = 1 and to `x^n` at λ = 0.
pub fn deg_falling_poly(n: usize, lambda: &Rat) -> Poly {
    let x = Poly::var(Var::X);
    let mut acc = Poly::one();
    for j in 0..n {
        let shift = Poly::constant(lambda * &Rat::from_int(j as i64));
        acc = &acc * &(&x - &shift);
    }
    acc
}

/// `(x)_{n,λ}` evaluated at a rational point, as the exact product.
pub fn deg_falling_eval(x: &Rat, n: usize, lambda: &Rat) -> Rat {
    let mut acc = Rat::one();
    let mut term = x.clone();
    for _ in 0..n {
        acc *= &term;
        term -= lambda;
    }
    acc
}

/// Expresses `p` over a triangular basis `b_0, b_1, ...` with
/// `deg b_k = k`, by back-substitution. Exact; the returned list has
/// length `deg p + 1` (a single entry for constants).
pub fn change_basis(p: &Poly, basis: &dyn Fn(usize) -> Poly) -> Vec<Rat> {
    let deg = p.degree().unwrap_or(0);
    let mut out = vec![Rat::zero(); deg + 1];
    let mut rem = p.clone();
    for k in (0..=deg).rev() {
        let c = rem.coeff(k);
        if c.is_zero() {
            continue;
        }
        let b = basis(k);
        debug_assert_eq!(b.degree(), Some(k));
        let q = c
            .checked_div(&b.leading_coeff())
            .expect("triangular basis has nonzero leading coefficients");
        rem = &rem - &b.scale(&q);
        out[k] = q;
    }
    debug_assert!(rem.is_zero(), "basis change left a remainder");
    out
}

/// Coefficients of `p` over the falling-factorial basis `{(x)_k}`.
pub fn to_falling_basis(p: &Poly) -> Vec<Rat> {
    change_basis(p, &falling_poly)
}

/// Coefficients of `p` over the degenerate basis `{(x)_{k,λ}}`.
pub fn to_deg_falling_basis(p: &Poly, lambda: &Rat) -> Vec<Rat> {
    change_basis(p, &|k| deg_falling_poly(k, lambda))
}

/// Which Stirling triangle.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum TriangleKind {
    /// Signed first kind: `(x)_n = Σ_k S1(n,k) x^k`.
    S1,
    /// Second kind: `x^n = Σ_k S2(n,k) (x)_k`.
    S2,
    /// Degenerate first kind: `(x)_n = Σ_k S1λ(n,k) (x)_{k,λ}`.
    S1Deg,
    /// Degenerate second kind: `(x)_{n,λ} = Σ_k S2λ(n,k) (x)_k`.
    S2Deg,
}

impl TriangleKind {
    fn uses_lambda(self) -> bool {
        matches!(self, TriangleKind::S1Deg | TriangleKind::S2Deg)
    }
}

/// Lower-triangular table of Stirling-type numbers, rows `0..=nmax`.
#[derive(Clone, Debug, Serialize)]
pub struct TriangleTable {
    kind: TriangleKind,
    lambda: Rat,
    nmax: usize,
    rows: Vec<Vec<Rat>>,
}

impl TriangleTable {
    fn build(kind: TriangleKind, lambda: &Rat, nmax: usize) -> TriangleTable {
        let rows = (0..=nmax)
            .map(|n| {
                let mut row = match kind {
                    TriangleKind::S1 => falling_poly(n).coeffs().to_vec(),
                    TriangleKind::S2 => {
                        to_falling_basis(&Poly::monomial(Var::X, n, Rat::one()))
                    }
                    TriangleKind::S1Deg => to_deg_falling_basis(&falling_poly(n), lambda),
                    TriangleKind::S2Deg => to_falling_basis(&deg_falling_poly(n, lambda)),
                };
                row.resize(n + 1, Rat::zero());
                row
            })
            .collect();
        TriangleTable { kind, lambda: lambda.clone(), nmax, rows }
    }

    pub fn kind(&self) -> TriangleKind {
        self.kind
    }

    pub fn lambda(&self) -> &Rat {
        &self.lambda
    }

    pub fn nmax(&self) -> usize {
        self.nmax
    }

    /// `entry(n, k)`; zero outside the triangle (including `k < 0` and
    /// `k > n`). Panics if `n` exceeds the table size.
    pub fn entry(&self, n: usize, k: i64) -> Rat {
        assert!(n <= self.nmax, "row {n} beyond table nmax {}", self.nmax);
        if k < 0 || k as usize > n {
            return Rat::zero();
        }
        self.rows[n][k as usize].clone()
    }

    pub fn row(&self, n: usize) -> &[Rat] {
        &self.rows[n]
    }
}

static TABLE_CACHE: LazyLock<Mutex<HashMap<(TriangleKind, Rat), Arc<TriangleTable>>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

/// Memoized triangle lookup, keyed by `(kind, λ)` with λ fixed to zero for
/// the classical kinds. The returned table covers at least `nmax` rows and
/// may be larger when a bigger table is already cached. Thread safe;
/// concurrent misses may duplicate work but never tear values.
pub fn stirling_table(kind: TriangleKind, lambda: &Rat, nmax: usize) -> Arc<TriangleTable> {
    let lam = if kind.uses_lambda() { lambda.clone() } else { Rat::zero() };
    if let Some(t) = TABLE_CACHE.lock().unwrap().get(&(kind, lam.clone())) {
        if t.nmax() >= nmax {
            return Arc::clone(t);
        }
    }
    let fresh = Arc::new(TriangleTable::build(kind, &lam, nmax));
    let mut cache = TABLE_CACHE.lock().unwrap();
    let slot = cache.entry((kind, lam)).or_insert_with(|| Arc::clone(&fresh));
    if slot.nmax() < fresh.nmax() {
        *slot = Arc::clone(&fresh);
    }
    Arc::clone(slot)
}

/// Classical `S2(n, k)`.
pub fn stirling2(n: usize, k: i64) -> Rat {
    stirling_table(TriangleKind::S2, &Rat::zero(), n).entry(n, k)
}

/// Classical signed `S1(n, k)`.
pub fn stirling1(n: usize, k: i64) -> Rat {
    stirling_table(TriangleKind::S1, &Rat::zero(), n).entry(n, k)
}

/// Degenerate second kind `S2λ(n, k)`.
pub fn stirling2_deg(n: usize, k: i64, lambda: &Rat) -> Rat {
    stirling_table(TriangleKind::S2Deg, lambda, n).entry(n, k)
}

/// Degenerate first kind `S1λ(n, k)`.
pub fn stirling1_deg(n: usize, k: i64, lambda: &Rat) -> Rat {
    stirling_table(TriangleKind::S1Deg, lambda, n).entry(n, k)
}

/// Bell polynomial `φ_n(x) = Σ_k S2(n,k) x^k`.
pub fn bell_poly(n: usize) -> Poly {
    deg_bell_poly(n, &Rat::zero())
}

/// Degenerate Bell polynomial `φ_{n,λ}(x) = Σ_k S2λ(n,k) x^k`; equals the
/// classical Bell polynomial at λ = 0.
pub fn deg_bell_poly(n: usize, lambda: &Rat) -> Poly {
    let table = stirling_table(TriangleKind::S2Deg, lambda, n);
    Poly::from_coeffs(Var::X, (0..=n).map(|k| table.entry(n, k as i64)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::binom;
    use crate::test_oracles::partition_counts;

    fn lam_grid() -> Vec<Rat> {
        vec![
            Rat::zero(),
            Rat::frac(1, 2),
            Rat::frac(-1, 3),
            Rat::from_int(2),
        ]
    }

    #[test]
    fn falling_poly_small() {
        assert_eq!(falling_poly(0), Poly::one());
        // (x)_3 = x^3 - 3x^2 + 2x
        assert_eq!(
            falling_poly(3),
            Poly::from_coeffs(
                Var::X,
                vec![Rat::zero(), Rat::from_int(2), Rat::from_int(-3), Rat::one()]
            )
        );
        // (n)_n = n!
        let mut fact = Rat::one();
        for n in 1..=8usize {
            fact *= &Rat::from_int(n as i64);
            assert_eq!(falling_poly(n).eval(&Rat::from_int(n as i64)), fact);
        }
    }

    #[test]
    fn deg_falling_poly_small() {
        let lam = Rat::frac(2, 7);
        // (x)_{2,λ} = x^2 - λx
        assert_eq!(
            deg_falling_poly(2, &lam),
            Poly::from_coeffs(Var::X, vec![Rat::zero(), -&lam, Rat::one()])
        );
        assert_eq!(
            deg_falling_poly(4, &Rat::zero()),
            Poly::monomial(Var::X, 4, Rat::one())
        );
        assert_eq!(deg_falling_poly(3, &Rat::one()), falling_poly(3));
    }

    #[test]
    fn deg_falling_eval_cases() {
        // (1)_{3,1} contains the factor 1-1 = 0
        assert_eq!(deg_falling_eval(&Rat::one(), 3, &Rat::one()), Rat::zero());
        // 5 * (5 - 1/2) = 45/2
        assert_eq!(
            deg_falling_eval(&Rat::from_int(5), 2, &Rat::frac(1, 2)),
            Rat::frac(45, 2)
        );
        assert_eq!(deg_falling_eval(&Rat::frac(-7, 3), 0, &Rat::from_int(9)), Rat::one());
        // matches the polynomial evaluation
        let lam = Rat::frac(-1, 3);
        let x = Rat::frac(5, 4);
        assert_eq!(
            deg_falling_eval(&x, 5, &lam),
            deg_falling_poly(5, &lam).eval(&x)
        );
    }

    #[test]
    fn falling_basis_examples() {
        // x^2 = (x)_2 + (x)_1
        let x2 = Poly::monomial(Var::X, 2, Rat::one());
        assert_eq!(to_falling_basis(&x2), vec![Rat::zero(), Rat::one(), Rat::one()]);
        // basis element maps to a unit vector
        let mut unit = vec![Rat::zero(); 6];
        unit[5] = Rat::one();
        assert_eq!(to_falling_basis(&falling_poly(5)), unit);
        assert_eq!(to_falling_basis(&Poly::one()), vec![Rat::one()]);
    }

    #[test]
    fn deg_falling_basis_examples() {
        let half = Rat::frac(1, 2);
        // x(x-λ) is the λ-basis element of index 2
        let p = deg_falling_poly(2, &half);
        assert_eq!(
            to_deg_falling_basis(&p, &half),
            vec![Rat::zero(), Rat::zero(), Rat::one()]
        );
        // x^2 = (x)_{2,1/2} + (1/2) x
        let x2 = Poly::monomial(Var::X, 2, Rat::one());
        assert_eq!(
            to_deg_falling_basis(&x2, &half),
            vec![Rat::zero(), half, Rat::one()]
        );
        // λ = 0 reduces to the monomial coefficients
        let p = Poly::from_coeffs(
            Var::X,
            vec![Rat::frac(1, 3), Rat::from_int(-2), Rat::from_int(7)],
        );
        assert_eq!(to_deg_falling_basis(&p, &Rat::zero()), p.coeffs().to_vec());
    }

    #[test]
    fn s2_matches_set_partition_counts() {
        for n in 0..=8usize {
            let counts = partition_counts(n);
            let table = stirling_table(TriangleKind::S2, &Rat::zero(), n);
            for k in 0..=n {
                assert_eq!(
                    table.entry(n, k as i64),
                    Rat::from_int(counts[k] as i64),
                    "S2({n},{k})"
                );
            }
        }
    }

    #[test]
    fn triangle_rows() {
        let s2 = stirling_table(TriangleKind::S2, &Rat::zero(), 3);
        assert_eq!(
            s2.row(3),
            &[Rat::zero(), Rat::one(), Rat::from_int(3), Rat::one()]
        );
        let s1 = stirling_table(TriangleKind::S1, &Rat::zero(), 3);
        assert_eq!(
            s1.row(3),
            &[Rat::zero(), Rat::from_int(2), Rat::from_int(-3), Rat::one()]
        );
        let lam = Rat::frac(3, 5);
        let s2d = stirling_table(TriangleKind::S2Deg, &lam, 2);
        assert_eq!(
            s2d.row(2),
            &[Rat::zero(), &Rat::one() - &lam, Rat::one()]
        );
    }

    #[test]
    fn triangle_edges() {
        for kind in [
            TriangleKind::S1,
            TriangleKind::S2,
            TriangleKind::S1Deg,
            TriangleKind::S2Deg,
        ] {
            let t = stirling_table(kind, &Rat::frac(1, 2), 6);
            assert_eq!(t.entry(0, 0), Rat::one());
            for n in 0..=6usize {
                assert_eq!(t.entry(n, n as i64), Rat::one(), "{kind:?}({n},{n})");
                assert_eq!(t.entry(n, n as i64 + 1), Rat::zero());
                assert_eq!(t.entry(n, -1), Rat::zero());
            }
        }
    }

    #[test]
    fn degenerate_triangles_reduce_to_classical_at_lambda_zero() {
        let nmax = 10;
        let s1 = stirling_table(TriangleKind::S1, &Rat::zero(), nmax);
        let s1d = stirling_table(TriangleKind::S1Deg, &Rat::zero(), nmax);
        let s2 = stirling_table(TriangleKind::S2, &Rat::zero(), nmax);
        let s2d = stirling_table(TriangleKind::S2Deg, &Rat::zero(), nmax);
        for n in 0..=nmax {
            assert_eq!(s1.row(n), s1d.row(n));
            assert_eq!(s2.row(n), s2d.row(n));
        }
    }

    #[test]
    fn s2deg_one_step_recurrence() {
        // S2λ(n+1,k) = S2λ(n,k-1) + (k - nλ) S2λ(n,k), from
        // (x)_{n+1,λ} = (x - nλ)(x)_{n,λ}; independent of the basis
        // conversion that defines the table.
        for lam in [Rat::zero(), Rat::frac(1, 2), Rat::frac(-1, 3), Rat::from_int(2)] {
            let t = stirling_table(TriangleKind::S2Deg, &lam, 12);
            for n in 0..12usize {
                for k in 0..=(n + 1) as i64 {
                    let lhs = t.entry(n + 1, k);
                    let rhs = t.entry(n, k - 1)
                        + (Rat::from_int(k) - &lam * &Rat::from_int(n as i64)) * t.entry(n, k);
                    assert_eq!(lhs, rhs, "n={n} k={k} lambda={lam}");
                }
            }
        }
    }

    #[test]
    fn s1deg_s2deg_are_inverse_matrices() {
        let nmax = 12;
        for lam in lam_grid() {
            let s1d = stirling_table(TriangleKind::S1Deg, &lam, nmax);
            let s2d = stirling_table(TriangleKind::S2Deg, &lam, nmax);
            for n in 0..=nmax {
                for j in 0..=n {
                    let mut sum1 = Rat::zero();
                    let mut sum2 = Rat::zero();
                    for k in j..=n {
                        sum1 += &(s1d.entry(n, k as i64) * s2d.entry(k, j as i64));
                        sum2 += &(s2d.entry(n, k as i64) * s1d.entry(k, j as i64));
                    }
                    let expected = if n == j { Rat::one() } else { Rat::zero() };
                    assert_eq!(sum1, expected, "S1λ·S2λ at ({n},{j}), λ={lam}");
                    assert_eq!(sum2, expected, "S2λ·S1λ at ({n},{j}), λ={lam}");
                }
            }
        }
    }

    #[test]
    fn deg_falling_vandermonde() {
        // (x+y)_{n,λ} = Σ_k C(n,k) (x)_{k,λ} (y)_{n-k,λ}
        let pairs = [
            (Rat::frac(3, 2), Rat::frac(-1, 4)),
            (Rat::from_int(2), Rat::frac(5, 3)),
            (Rat::frac(-7, 5), Rat::frac(2, 9)),
            (Rat::zero(), Rat::frac(11, 6)),
            (Rat::frac(8, 7), Rat::from_int(-3)),
        ];
        for lam in lam_grid() {
            for n in 0..=10usize {
                for (x, y) in &pairs {
                    let lhs = deg_falling_eval(&(x + y), n, &lam);
                    let mut rhs = Rat::zero();
                    for k in 0..=n {
                        rhs += &(Rat::from_bigint(binom(n as u64, k as i64))
                            * deg_falling_eval(x, k, &lam)
                            * deg_falling_eval(y, n - k, &lam));
                    }
                    assert_eq!(lhs, rhs, "n={n} λ={lam}");
                }
            }
        }
    }

    #[test]
    fn basis_round_trip_recovers_polynomial() {
        // reconstructing from the coefficient list is the identity
        let p = Poly::from_coeffs(
            Var::X,
            vec![
                Rat::frac(1, 3),
                Rat::from_int(-2),
                Rat::zero(),
                Rat::frac(7, 2),
                Rat::one(),
            ],
        );
        for lam in lam_grid() {
            let coeffs = to_deg_falling_basis(&p, &lam);
            let mut back = Poly::zero();
            for (k, c) in coeffs.iter().enumerate() {
                back = &back + &deg_falling_poly(k, &lam).scale(c);
            }
            assert_eq!(back, p, "λ={lam}");
        }
    }

    #[test]
    fn bell_polys() {
        // φ_2 = x + x^2
        assert_eq!(
            bell_poly(2),
            Poly::from_coeffs(Var::X, vec![Rat::zero(), Rat::one(), Rat::one()])
        );
        // φ_3(1) = 5, the number of partitions of a 3-set
        assert_eq!(bell_poly(3).eval(&Rat::one()), Rat::from_int(5));
        assert_eq!(bell_poly(0), Poly::one());
        // degenerate: φ_{2,λ} = (1-λ)x + x^2, and φ_{1,λ} = x for any λ
        let lam = Rat::frac(2, 5);
        assert_eq!(
            deg_bell_poly(2, &lam),
            Poly::from_coeffs(Var::X, vec![Rat::zero(), &Rat::one() - &lam, Rat::one()])
        );
        assert_eq!(deg_bell_poly(1, &lam), Poly::var(Var::X));
        assert_eq!(deg_bell_poly(3, &Rat::zero()), bell_poly(3));
        // φ_{2,1/3}(1) = 5/3
        assert_eq!(
            deg_bell_poly(2, &Rat::frac(1, 3)).eval(&Rat::one()),
            Rat::frac(5, 3)
        );
    }

    #[test]
    fn deg_params_validation() {
        assert!(DegParams::new(Rat::zero(), 0, 0).is_err());
        let p = DegParams::new(Rat::frac(1, 2), 2, 3).unwrap();
        assert_eq!(p.lambda_over_m(), Rat::frac(1, 4));
    }

    #[test]
    fn tables_support_nmax_32() {
        let lam = Rat::frac(-2, 7);
        let t = stirling_table(TriangleKind::S2Deg, &lam, 32);
        assert_eq!(t.entry(32, 32), Rat::one());
        assert_eq!(t.entry(32, 0), Rat::zero());
        // the one-step recurrence still holds at the top row
        let rec = t.entry(31, 30)
            + (Rat::from_int(31) - &lam * &Rat::from_int(31)) * t.entry(31, 31);
        assert_eq!(t.entry(32, 31), rec);
    }

    #[test]
    fn table_cache_is_consistent_across_threads() {
        let lam = Rat::frac(5, 9);
        let handles: Vec<_> = (0..8)
            .map(|i| {
                let lam = lam.clone();
                std::thread::spawn(move || {
                    let t = stirling_table(TriangleKind::S2Deg, &lam, 6 + i % 3);
                    t.entry(5, 3)
                })
            })
            .collect();
        let values: Vec<Rat> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        let reference = stirling_table(TriangleKind::S2Deg, &lam, 8).entry(5, 3);
        for v in values {
            assert_eq!(v, reference);
        }
    }
}
