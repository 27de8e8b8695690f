//! Brute-force oracles shared by the unit tests. Everything here counts or
//! expands from first principles and must stay independent of the
//! triangle/basis machinery it is used to check.

use crate::exact::Rat;

/// Partitions of an n-set counted by number of blocks, enumerated as
/// restricted-growth strings. `counts[k]` = number of partitions into `k`
/// blocks, so `S2(n,k)` and Bell numbers fall out directly.
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

/// Bell number `B_n` from the same enumeration.
pub fn bell_number(n: usize) -> u64 {
    partition_counts(n).iter().sum()
}

/// The λ grid the property tests sweep.
pub fn lambda_grid() -> Vec<Rat> {
    vec![
        Rat::zero(),
        Rat::frac(1, 2),
        Rat::frac(-1, 3),
        Rat::from_int(2),
        Rat::from_int(-5),
    ]
}
