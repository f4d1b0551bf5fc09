//! Arithmetic modulo the Mersenne prime `2^61 - 1`.
//!
//! Used only as an accelerator: a matrix with integer entries that has full
//! rank modulo `P` has full rank over the rationals, while a modular rank drop
//! must be confirmed by exact elimination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

pub const P: u64 = (1u64 << 61) - 1;

#[inline]
pub fn add(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= P {
        s - P
    } else {
        s
    }
}

#[inline]
pub fn sub(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + P - b
    }
}

#[inline]
pub fn mul(a: u64, b: u64) -> u64 {
    let prod = (a as u128) * (b as u128);
    let lo = (prod as u64) & P;
    let hi = (prod >> 61) as u64;
    add(lo, hi)
}

pub fn pow(mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul(acc, base);
        }
        base = mul(base, base);
        exp >>= 1;
    }
    acc
}

pub fn inv(a: u64) -> u64 {
    debug_assert!(a != 0);
    pow(a, P - 2)
}

pub fn from_i64(v: i64) -> u64 {
    if v >= 0 {
        (v as u64) % P
    } else {
        sub(0, ((-(v as i128)) as u128 % P as u128) as u64)
    }
}

pub fn from_bigint(v: &BigInt) -> u64 {
    let p = BigInt::from(P);
    let r = v.mod_floor(&p);
    r.to_u64().expect("residue fits in u64")
}

/// Residue of a rational, `None` when the denominator vanishes mod `P`.
pub fn from_rational(v: &BigRational) -> Option<u64> {
    let den = from_bigint(v.denom());
    if den == 0 {
        return None;
    }
    Some(mul(from_bigint(v.numer()), inv(den)))
}

pub fn is_residue_zero(v: &BigInt) -> bool {
    v.is_zero() || (v.abs() % BigInt::from(P)).is_zero()
}

/// Rank of a dense matrix over `F_P` and the pivot rows used, in pivot order.
pub fn rank_with_pivots(mut rows: Vec<Vec<u64>>) -> (usize, Vec<usize>) {
    let m = rows.len();
    if m == 0 {
        return (0, Vec::new());
    }
    let n = rows[0].len();
    let mut order: Vec<usize> = (0..m).collect();
    let mut rank = 0;
    for col in 0..n {
        let Some(piv) = (rank..m).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        order.swap(rank, piv);
        let inv_p = inv(rows[rank][col]);
        let pivot_row: Vec<u64> = rows[rank][col..].iter().map(|&v| mul(v, inv_p)).collect();
        for i in (rank + 1)..m {
            let factor = rows[i][col];
            if factor == 0 {
                continue;
            }
            let row = &mut rows[i][col..];
            for (x, &pv) in row.iter_mut().zip(&pivot_row) {
                if pv != 0 {
                    *x = sub(*x, mul(factor, pv));
                }
            }
        }
        rank += 1;
        if rank == m {
            break;
        }
    }
    let mut pivots = order[..rank].to_vec();
    pivots.sort_unstable();
    (rank, pivots)
}

pub fn rank(rows: Vec<Vec<u64>>) -> usize {
    rank_with_pivots(rows).0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_basics() {
        assert_eq!(mul(P - 1, P - 1), 1);
        assert_eq!(mul(inv(12345), 12345), 1);
        assert_eq!(from_i64(-1), P - 1);
        assert_eq!(from_bigint(&BigInt::from(-5)), P - 5);
    }

    #[test]
    fn small_ranks() {
        assert_eq!(rank(vec![vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(rank(vec![vec![0, 1], vec![1, 0]]), 2);
        let (r, piv) = rank_with_pivots(vec![vec![0, 0], vec![3, 1], vec![6, 2]]);
        assert_eq!((r, piv), (1, vec![1]));
    }
}
