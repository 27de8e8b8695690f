//! Property tests for the exact substrate: field axioms, evaluation as a
//! ring homomorphism, exponential additivity of series, composition vs
//! direct expansion, and the falling-basis round trip.

mod common;

use degenlab::stirling::{deg_falling_poly, to_deg_falling_basis};
use degenlab::{Poly, Rat, Series, Var};
use proptest::prelude::*;

use common::lambda_grid;

fn arb_rat() -> impl Strategy<Value = Rat> {
    (-12i64..=12, 1i64..=9).prop_map(|(p, q)| Rat::frac(p, q))
}

fn arb_nonzero_rat() -> impl Strategy<Value = Rat> {
    arb_rat().prop_filter("nonzero", |r| !r.is_zero())
}

fn arb_poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(arb_rat(), 0..=max_deg + 1)
        .prop_map(|coeffs| Poly::from_coeffs(Var::X, coeffs))
}

/// Series with zero constant term, random order in `1..=max_order`.
fn arb_exp_arg(max_order: usize) -> impl Strategy<Value = Series<Rat>> {
    (1..=max_order).prop_flat_map(|order| {
        prop::collection::vec(arb_rat(), order).prop_map(move |mut tail| {
            let mut coeffs = vec![Rat::zero()];
            coeffs.append(&mut tail);
            Series::from_coeffs(coeffs)
        })
    })
}

/// Direct expansion `Σ_k c_k · inner^k`, the independent route against
/// which Horner composition is checked.
fn compose_direct(outer: &Series<Rat>, inner: &Series<Rat>) -> Series<Rat> {
    let order = outer.order();
    let mut acc = Series::zero(order);
    let mut power = Series::one(order);
    for k in 0..=order {
        acc = acc
            .checked_add(&power.scale(outer.coeff(k)))
            .expect("same order");
        power = power.checked_mul(inner).expect("same order");
    }
    acc
}

proptest! {
    #[test]
    fn rat_field_axioms(a in arb_rat(), b in arb_rat(), c in arb_rat()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &(-&a), Rat::zero());
    }

    #[test]
    fn rat_multiplicative_inverse(a in arb_nonzero_rat()) {
        prop_assert_eq!(&a * &a.recip().unwrap(), Rat::one());
    }

    #[test]
    fn poly_eval_is_ring_homomorphism(
        p in arb_poly(6),
        q in arb_poly(6),
        c in arb_rat(),
    ) {
        let sum = p.checked_add(&q).unwrap();
        let prod = p.checked_mul(&q).unwrap();
        prop_assert_eq!(sum.eval(&c), p.eval(&c) + q.eval(&c));
        prop_assert_eq!(prod.eval(&c), p.eval(&c) * q.eval(&c));
    }

    #[test]
    fn series_exp_is_additive(
        a in arb_exp_arg(16),
        b_coeffs in prop::collection::vec(arb_rat(), 16),
    ) {
        // bring b to a's order with zero constant term
        let order = a.order();
        let mut coeffs = vec![Rat::zero()];
        coeffs.extend(b_coeffs.into_iter().take(order));
        coeffs.resize(order + 1, Rat::zero());
        let b = Series::from_coeffs(coeffs);

        let lhs = a.exp().unwrap().checked_mul(&b.exp().unwrap()).unwrap();
        let rhs = a.checked_add(&b).unwrap().exp().unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn series_compose_matches_direct_expansion(
        s in arb_exp_arg(8),
        inner_tail in prop::collection::vec(arb_rat(), 8),
    ) {
        let order = s.order();
        let outer = s.exp().unwrap();
        let mut coeffs = vec![Rat::zero()];
        coeffs.extend(inner_tail.into_iter().take(order));
        coeffs.resize(order + 1, Rat::zero());
        let inner = Series::from_coeffs(coeffs);

        prop_assert_eq!(
            outer.compose(&inner).unwrap(),
            compose_direct(&outer, &inner)
        );
    }

    #[test]
    fn deg_falling_basis_round_trip(p in arb_poly(8)) {
        for lam in lambda_grid() {
            let coeffs = to_deg_falling_basis(&p, &lam);
            let mut back = Poly::zero();
            for (k, c) in coeffs.iter().enumerate() {
                back = back
                    .checked_add(&deg_falling_poly(k, &lam).scale(c))
                    .unwrap();
            }
            prop_assert_eq!(&back, &p, "λ = {}", lam);
        }
    }
}
