//! Independent oracles for the integration tests. Nothing here calls the
//! library's numerics, so agreement is a real cross-check.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};

/// Fixed-point number `v / 2^BITS`.
pub const BITS: u64 = 800;

fn one() -> BigInt {
    BigInt::one() << BITS
}

/// `2 atanh(1/k)` in fixed point, for odd `k >= 3`.
fn two_atanh_inv(k: u64) -> BigInt {
    let k = BigInt::from(k);
    let k2 = &k * &k;
    let mut term = one() / &k;
    let mut sum = BigInt::zero();
    let mut n = 1u64;
    while !term.is_zero() {
        sum += &term / BigInt::from(n);
        term /= &k2;
        n += 2;
    }
    sum * 2
}

/// `(ln 2, ln 3, ln 5)` from `ln(k+1) - ln(k-1) = 2 atanh(1/k)`.
pub fn logs() -> (BigInt, BigInt, BigInt) {
    let ln2 = two_atanh_inv(3);
    let ln3 = &ln2 + two_atanh_inv(5);
    let ln5 = &ln2 * 2 + two_atanh_inv(9);
    (ln2, ln3, ln5)
}

pub fn to_f64(v: &BigInt) -> f64 {
    let shift = v.bits().saturating_sub(60);
    let top: i64 = num_traits::ToPrimitive::to_i64(&(v >> shift)).unwrap();
    top as f64 * 2f64.powi(shift as i32) / 2f64.powi(BITS as i32)
}

/// Distance from `v` (fixed point) to the nearest integer, fixed point.
pub fn dist_to_int(v: &BigInt) -> BigInt {
    let o = one();
    let r = v.mod_floor(&o);
    let s = &o - &r;
    r.min(s)
}

/// `ln n` for a positive integer `n`, fixed point, via `n = 2^e m` with `m in [1, 2)`.
pub fn ln_int(n: &BigInt) -> BigInt {
    assert!(n.is_positive());
    let (ln2, _, _) = logs();
    let e = n.bits() - 1;
    // m = n / 2^e, as fixed point
    let m = (n << BITS) >> e;
    // ln m = 2 atanh((m - 1)/(m + 1))
    let o = one();
    let t = ((&m - &o) << BITS) / (&m + &o);
    let t2 = (&t * &t) >> BITS;
    let mut term = t.clone();
    let mut sum = BigInt::zero();
    let mut k = 1u64;
    while !term.is_zero() {
        sum += &term / BigInt::from(k);
        term = (&term * &t2) >> BITS;
        k += 2;
    }
    ln2 * BigInt::from(e) + sum * 2
}

/// Float evaluation of the Matveev constant for degree 1:
/// `1.4 * 30^(l+3) * l^4.5 * prod A_j`.
pub fn matveev_f64(heights: &[f64]) -> f64 {
    let l = heights.len() as f64;
    1.4 * 30f64.powf(l + 3.0) * l.powf(4.5) * heights.iter().product::<f64>()
}

pub fn pow(b: u64, e: u64) -> BigInt {
    Pow::pow(BigInt::from(b), e)
}

/// Naive quadruple loop, no pruning, exact arithmetic.
pub fn brute_force(
    x1: std::ops::RangeInclusive<u64>,
    x2: std::ops::RangeInclusive<u64>,
    y1: std::ops::RangeInclusive<u64>,
    y2: std::ops::RangeInclusive<u64>,
    ordered: bool,
) -> Vec<[u64; 4]> {
    let mut out = Vec::new();
    for a in x1.clone() {
        for b in x2.clone() {
            if ordered && a > b {
                continue;
            }
            let l = (pow(3, a) - 1) * (pow(3, b) - 1);
            for c in y1.clone() {
                for d in y2.clone() {
                    if ordered && c > d {
                        continue;
                    }
                    if l == (pow(5, c) - 1) * (pow(5, d) - 1) {
                        out.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    out.sort();
    out
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    ((got - want) / want).abs()
}
