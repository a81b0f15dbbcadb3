//! Continued fractions of rigorous reals.
//!
//! A partial quotient is certified only when both endpoints of the input
//! ball produce it: the set of reals sharing a given quotient prefix is an
//! interval, so agreement at the endpoints covers everything in between.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{with_precision_retry, PrecisionContext, RigorousReal};

/// `p/q` is the convergent `[a0; a1, ..., a_index]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Convergent {
    pub index: usize,
    pub p: BigInt,
    pub q: BigInt,
}

impl Convergent {
    pub fn as_rational(&self) -> BigRational {
        BigRational::new(self.p.clone(), self.q.clone())
    }
}

#[derive(Debug, Clone)]
pub struct CFExpansion {
    source: RigorousReal,
    quotients: Vec<BigInt>,
    /// The source is an exact rational and `quotients` is its full expansion.
    complete: bool,
}

/// Floor-based expansion of an exact rational, at most `limit` terms.
fn rational_quotients(q: &BigRational, limit: usize) -> (Vec<BigInt>, bool) {
    let mut out = Vec::new();
    let (mut n, mut d) = (q.numer().clone(), q.denom().clone());
    while out.len() < limit {
        let (a, r) = n.div_mod_floor(&d);
        out.push(a);
        if r.is_zero() {
            return (out, true);
        }
        n = d;
        d = r;
    }
    (out, false)
}

impl CFExpansion {
    /// Every quotient the ball certifies, capped at `limit`.
    pub fn certify(x: &RigorousReal, limit: usize) -> Result<Self> {
        if !x.is_positive() {
            return Err(Error::domain("continued fraction source must be positive"));
        }
        let (lo_q, lo_done) = rational_quotients(&x.lo(), limit);
        if x.is_exact() {
            return Ok(Self {
                source: x.clone(),
                quotients: lo_q,
                complete: lo_done,
            });
        }
        let (hi_q, _) = rational_quotients(&x.hi(), limit);
        let common = lo_q
            .iter()
            .zip(&hi_q)
            .take_while(|(a, b)| a == b)
            .count();
        let mut quotients = lo_q;
        quotients.truncate(common);
        Ok(Self {
            source: x.clone(),
            quotients,
            complete: false,
        })
    }

    pub fn source(&self) -> &RigorousReal {
        &self.source
    }

    pub fn quotients(&self) -> &[BigInt] {
        &self.quotients
    }

    pub fn certified_depth(&self) -> usize {
        self.quotients.len()
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn convergents(&self) -> Convergents<'_> {
        Convergents {
            quotients: &self.quotients,
            index: 0,
            p: (BigInt::zero(), BigInt::one()),
            q: (BigInt::one(), BigInt::zero()),
        }
    }

    /// The convergent of least index whose denominator exceeds `bound`.
    pub fn first_denominator_exceeding(&self, bound: &BigInt) -> Option<Convergent> {
        self.convergents().find(|c| &c.q > bound)
    }
}

/// Iterator over `p_k / q_k` via `p_k = a_k p_{k-1} + p_{k-2}`.
pub struct Convergents<'a> {
    quotients: &'a [BigInt],
    index: usize,
    // (p_{k-2}, p_{k-1}) and (q_{k-2}, q_{k-1})
    p: (BigInt, BigInt),
    q: (BigInt, BigInt),
}

impl Iterator for Convergents<'_> {
    type Item = Convergent;

    fn next(&mut self) -> Option<Convergent> {
        let a = self.quotients.get(self.index)?;
        let p = a * &self.p.1 + &self.p.0;
        let q = a * &self.q.1 + &self.q.0;
        self.p = (std::mem::take(&mut self.p.1), p.clone());
        self.q = (std::mem::take(&mut self.q.1), q.clone());
        let c = Convergent {
            index: self.index,
            p,
            q,
        };
        self.index += 1;
        Some(c)
    }
}

/// The first `depth` quotients of `x`, or a precision error if the ball is
/// too wide to certify them.
pub fn expand(x: &RigorousReal, depth: usize) -> Result<CFExpansion> {
    let cf = CFExpansion::certify(x, depth)?;
    if cf.certified_depth() < depth && !cf.is_complete() {
        return Err(Error::PrecisionExhausted {
            bits: x.precision(),
            what: format!(
                "certifying {depth} partial quotients (only {} certified)",
                cf.certified_depth()
            ),
        });
    }
    Ok(cf)
}

/// [`expand`] with the source recomputed at doubled precision on failure.
pub fn expand_with(
    ctx: &PrecisionContext,
    source: impl Fn(&PrecisionContext) -> Result<RigorousReal>,
    depth: usize,
) -> Result<CFExpansion> {
    with_precision_retry(ctx, |c| expand(&source(c)?, depth))
}

pub fn first_denominator_exceeding(x: &RigorousReal, bound: &BigInt) -> Result<Convergent> {
    if bound < &BigInt::one() {
        return Err(Error::precondition("denominator bound must be at least 1"));
    }
    // each quotient at least doubles q every two steps
    let limit = 2 * bound.bits() as usize + 8;
    let cf = CFExpansion::certify(x, limit)?;
    cf.first_denominator_exceeding(bound).ok_or_else(|| {
        if cf.is_complete() {
            Error::domain(format!("rational source has no denominator exceeding {bound}"))
        } else {
            Error::PrecisionExhausted {
                bits: x.precision(),
                what: format!("finding a convergent denominator above {bound}"),
            }
        }
    })
}

pub fn first_denominator_exceeding_with(
    ctx: &PrecisionContext,
    source: impl Fn(&PrecisionContext) -> Result<RigorousReal>,
    bound: &BigInt,
) -> Result<Convergent> {
    with_precision_retry(ctx, |c| first_denominator_exceeding(&source(c)?, bound))
}

/// `min_n |x - n|`, as a ball inside `[0, 1/2]`. The map is 1-Lipschitz, so
/// the input radius carries over unchanged.
pub fn dist_to_nearest_int(x: &RigorousReal) -> RigorousReal {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let c = x.center();
    let nearest = (c + &half).floor();
    let d = (c - nearest).abs();
    let r = x.radius();
    let lo = (&d - r).max(BigRational::zero());
    let hi = (&d + r).min(half);
    RigorousReal::from_interval(lo, hi, x.precision())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::log_of_int;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    fn inv_lambda(c: &PrecisionContext) -> Result<RigorousReal> {
        log_of_int(&3.into(), c)?.checked_div(&log_of_int(&5.into(), c)?)
    }

    #[test]
    fn exact_rational_expansion() {
        let x = RigorousReal::from_ratio(7, 3, &ctx()).unwrap();
        let cf = expand(&x, 10).unwrap();
        assert_eq!(cf.quotients(), &[BigInt::from(2), BigInt::from(3)]);
        assert!(cf.is_complete());
        let c = first_denominator_exceeding(&x, &BigInt::one()).unwrap();
        assert_eq!((c.p, c.q), (BigInt::from(7), BigInt::from(3)));
    }

    #[test]
    fn lambda_starts_with_one() {
        let c = ctx();
        let lambda = inv_lambda(&c).unwrap().recip().unwrap();
        let cf = expand(&lambda, 5).unwrap();
        assert_eq!(cf.quotients()[0], BigInt::one());
    }

    #[test]
    fn small_bound_matches_brute_force() {
        let c = ctx();
        let k = inv_lambda(&c).unwrap();
        let conv = first_denominator_exceeding(&k, &BigInt::from(10)).unwrap();
        // brute force: best approximations with q <= 60 of 0.682606...
        let target = 3f64.ln() / 5f64.ln();
        let mut best = (f64::MAX, 0, 0);
        let mut denominators = Vec::new();
        for q in 1..=60i64 {
            let p = (target * q as f64).round() as i64;
            let err = (target * q as f64 - p as f64).abs();
            if err < best.0 {
                best = (err, p, q);
                denominators.push(q);
            }
        }
        let first = denominators.into_iter().find(|&q| q > 10).unwrap();
        assert_eq!(conv.q, BigInt::from(first));
    }

    #[test]
    fn wide_ball_reports_precision() {
        let x = RigorousReal::from_interval(
            BigRational::new(2.into(), 3.into()),
            BigRational::new(7.into(), 10.into()),
            64,
        );
        assert!(expand(&x, 5).unwrap_err().is_precision());
    }

    #[test]
    fn distances() {
        let c = ctx();
        let d = dist_to_nearest_int(&RigorousReal::from_ratio(9, 4, &c).unwrap());
        assert_eq!(d.center(), &BigRational::new(1.into(), 4.into()));
        let z = dist_to_nearest_int(&RigorousReal::from_int(3, &c));
        assert!(z.center().is_zero() && z.is_exact());
        let neg = dist_to_nearest_int(&RigorousReal::from_ratio(-13, 4, &c).unwrap());
        assert_eq!(neg.center(), &BigRational::new(1.into(), 4.into()));
    }

    #[test]
    fn non_positive_source_rejected() {
        assert!(expand(&RigorousReal::zero(&ctx()), 3).is_err());
    }
}
