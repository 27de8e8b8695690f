//! Brute-force oracles for the integration suites. Deliberately naive and
//! independent of the library's triangle/basis machinery: partitions are
//! enumerated one by one, polynomials expanded factor by factor.

// each test binary uses its own subset of these helpers
#![allow(dead_code)]

use degenlab::{Poly, Rat, Var};

/// Partitions of an n-set counted by block count, via restricted-growth
/// enumeration. `counts[k]` = number of partitions into `k` blocks.
pub fn partition_counts(n: usize) -> Vec<u64> {
    fn go(remaining: usize, blocks: usize, counts: &mut Vec<u64>) {
        if remaining == 0 {
            counts[blocks] += 1;
            return;
        }
        for _ in 0..blocks {
            go(remaining - 1, blocks, counts);
        }
        go(remaining - 1, blocks + 1, counts);
    }
    let mut counts = vec![0u64; n + 1];
    if n == 0 {
        counts[0] = 1;
    } else {
        go(n - 1, 1, &mut counts);
    }
    counts
}

/// `(mx + r)_{n,λ}` multiplied out factor by factor.
pub fn expand_shifted_falling(m: i64, r: i64, n: usize, lambda: &Rat) -> Poly {
    let affine = Poly::from_coeffs(Var::X, vec![Rat::from_int(r), Rat::from_int(m)]);
    let mut acc = Poly::one();
    for j in 0..n {
        let shift = Poly::constant(lambda * &Rat::from_int(j as i64));
        acc = acc
            .checked_mul(&affine.checked_sub(&shift).expect("same var"))
            .expect("same var");
    }
    acc
}

/// The λ set the acceptance grids sweep.
pub fn lambda_grid() -> Vec<Rat> {
    vec![
        Rat::zero(),
        Rat::frac(1, 2),
        Rat::frac(-1, 3),
        Rat::from_int(2),
        Rat::from_int(-5),
    ]
}
