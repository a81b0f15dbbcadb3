use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::real::pow2;
use super::{PrecisionContext, RigorousReal};
use crate::error::{Error, Result};

const GUARD_BITS: u32 = 32;

/// `2·atanh(u/v)` in fixed point with `w` fractional bits, for
/// `0 <= u/v <= 1/3`. Returns a lower bound `s` and an error `e` in ulps
/// such that the true value lies in `[s, s + e]`.
fn two_atanh_fixed(u: &BigInt, v: &BigInt, w: u32) -> (BigInt, u64) {
    debug_assert!(!u.is_negative() && (u * 3u32) <= *v);
    let u2 = u * u;
    let v2 = v * v;
    let mut term = (u << w as usize) / v;
    let mut sum = BigInt::zero();
    let mut i: u64 = 0;
    while !term.is_zero() {
        sum += &term / (2 * i + 1);
        term = (&term * &u2) / &v2;
        i += 1;
    }
    // term i undershoots by at most i+1 ulps, each quotient adds one more,
    // and the truncated tail is bounded by 9/8 of the last undershoot
    let err = 4 * (i + 2);
    (sum << 1usize, 2 * err)
}

fn fixed_to_ball(sum: BigInt, err: u64, w: u32, precision: u32) -> RigorousReal {
    let scale = pow2(-(w as i64));
    let half_err = BigRational::new(BigInt::from(err), BigInt::from(2));
    let center = (BigRational::from_integer(sum) + &half_err) * &scale;
    RigorousReal::from_center_radius(center, half_err * scale, precision)
}

fn ln2_cache() -> &'static Mutex<HashMap<u32, RigorousReal>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, RigorousReal>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `log 2 = 2·atanh(1/3)`, memoised per fixed-point width.
fn ln2_fixed_width(w: u32, precision: u32) -> RigorousReal {
    if let Some(hit) = ln2_cache().lock().unwrap().get(&w) {
        return hit.clone().with_precision(precision);
    }
    let (s, e) = two_atanh_fixed(&BigInt::one(), &BigInt::from(3), w);
    let ball = fixed_to_ball(s, e, w, w);
    ln2_cache().lock().unwrap().insert(w, ball.clone());
    ball.with_precision(precision)
}

pub fn ln2(ctx: &PrecisionContext) -> RigorousReal {
    ln2_fixed_width(ctx.working() + GUARD_BITS, ctx.working())
}

/// Natural logarithm of a positive rational.
pub fn log_of_rational(q: &BigRational, ctx: &PrecisionContext) -> Result<RigorousReal> {
    if !q.is_positive() {
        return Err(Error::domain("logarithm of a nonpositive rational"));
    }
    if q.is_one() {
        return Ok(RigorousReal::zero(ctx));
    }
    let (n, d) = (q.numer().clone(), q.denom().clone());
    // find k with 1 <= n / (d·2^k) < 2
    let mut k = n.bits() as i64 - d.bits() as i64;
    let scaled = |k: i64| -> (BigInt, BigInt) {
        if k >= 0 {
            (n.clone(), &d << k as usize)
        } else {
            (&n << (-k) as usize, d.clone())
        }
    };
    let (mut num, mut den) = scaled(k);
    while num < den {
        k -= 1;
        (num, den) = scaled(k);
    }
    while num >= (&den << 1usize) {
        k += 1;
        (num, den) = scaled(k);
    }
    let u = &num - &den;
    let v = &num + &den;
    let k_bits = 64 - k.unsigned_abs().leading_zeros();
    let w = ctx.working() + GUARD_BITS + k_bits;
    let (s, e) = two_atanh_fixed(&u, &v, w);
    let mantissa_log = fixed_to_ball(s, e, w, ctx.working());
    if k == 0 {
        return Ok(mantissa_log);
    }
    let l2 = ln2_fixed_width(w, ctx.working());
    let k_ball = RigorousReal::from_int(k, ctx);
    Ok(&k_ball * &l2 + mantissa_log)
}

/// Natural logarithm of an integer `n >= 2`.
pub fn log_of_int(n: &BigInt, ctx: &PrecisionContext) -> Result<RigorousReal> {
    if *n < BigInt::from(2) {
        return Err(Error::domain(format!("log_of_int requires n >= 2, got {n}")));
    }
    log_of_rational(&BigRational::from_integer(n.clone()), ctx)
}

/// Absolute logarithmic height of a positive rational integer: the minimal
/// polynomial is `X - n`, so the height is `log n`.
pub fn weil_height(n: &BigInt, ctx: &PrecisionContext) -> Result<RigorousReal> {
    if !n.is_positive() {
        return Err(Error::domain(format!("height requires n >= 1, got {n}")));
    }
    if n.is_one() {
        return Ok(RigorousReal::zero(ctx));
    }
    log_of_int(n, ctx)
}
