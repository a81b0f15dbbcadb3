//! Baker-Davenport reduction: from `0 < |m κ - n + μ| < A B^{-k}` with
//! `m <= M`, a convergent `P/Q` of `κ` with `Q > 6M` and
//! `ξ = ‖μQ‖ - M‖κQ‖ > 0` give `k < log(AQ/ξ) / log B`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use rayon::prelude::*;
use serde::Serialize;

use crate::contfrac::{dist_to_nearest_int, CFExpansion, Convergent};
use crate::error::{Error, Result};
use crate::numerics::{log_of_rational, with_precision_retry, PrecisionContext, RigorousReal};

/// Convergents tried after the first one with `Q > 6M`.
pub const EXTRA_CONVERGENTS: usize = 10;

#[derive(Debug, Clone)]
pub struct ReductionProblem {
    pub kappa: RigorousReal,
    pub mu: RigorousReal,
    pub m_bound: BigInt,
    pub a: BigRational,
    pub b: BigRational,
}

impl ReductionProblem {
    pub fn new(
        kappa: RigorousReal,
        mu: RigorousReal,
        m_bound: BigInt,
        a: BigRational,
        b: BigRational,
    ) -> Result<Self> {
        if m_bound < BigInt::one() {
            return Err(Error::precondition("M must be at least 1"));
        }
        if !a.is_positive() {
            return Err(Error::precondition("A must be positive"));
        }
        if b <= BigRational::one() {
            return Err(Error::precondition("B must exceed 1"));
        }
        if kappa.contains_zero() {
            return Err(Error::precondition("kappa must be nonzero"));
        }
        Ok(Self {
            kappa,
            mu,
            m_bound,
            a,
            b,
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReductionOutcome {
    pub convergent: Convergent,
    #[serde(serialize_with = "ser_real")]
    pub xi: RigorousReal,
    /// Upper end of `log(AQ/ξ) / log B`.
    #[serde(serialize_with = "ser_real")]
    pub threshold: RigorousReal,
    /// `floor` of the threshold; every solution has `k <= k_bound`.
    pub k_bound: BigInt,
}

fn ser_real<S: serde::Serializer>(x: &RigorousReal, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub fn bd_reduce(p: &ReductionProblem, ctx: &PrecisionContext) -> Result<ReductionOutcome> {
    let six_m: BigInt = &p.m_bound * BigInt::from(6);
    let limit = 2 * six_m.bits() as usize + 8 + 2 * EXTRA_CONVERGENTS;
    let kappa = p.kappa.abs();
    let cf = CFExpansion::certify(&kappa, limit)?;
    let candidates: Vec<Convergent> = cf
        .convergents()
        .skip_while(|c| c.q <= six_m)
        .take(EXTRA_CONVERGENTS + 1)
        .collect();
    if candidates.is_empty() {
        return Err(Error::PrecisionExhausted {
            bits: ctx.working(),
            what: format!("finding a convergent denominator above 6M = {six_m}"),
        });
    }
    let m_real = RigorousReal::from_int(p.m_bound.clone(), ctx);
    let log_b = log_of_rational(&p.b, ctx)?;
    let mut undecided = false;
    for conv in candidates.iter() {
        let q = RigorousReal::from_int(conv.q.clone(), ctx);
        let xi = dist_to_nearest_int(&(&p.mu * &q)) - &m_real * &dist_to_nearest_int(&(&kappa * &q));
        if !xi.is_positive() {
            undecided |= !xi.is_negative();
            continue;
        }
        let aq = q.mul_rational(&p.a);
        let threshold = aq.checked_div(&xi)?.ln()?.checked_div(&log_b)?;
        let k_bound = threshold.floor_hi();
        return Ok(ReductionOutcome {
            convergent: conv.clone(),
            xi,
            threshold,
            k_bound,
        });
    }
    if undecided || candidates.len() <= EXTRA_CONVERGENTS {
        return Err(Error::PrecisionExhausted {
            bits: ctx.working(),
            what: "deciding the sign of xi".into(),
        });
    }
    Err(Error::ReductionFailed(format!(
        "xi <= 0 for {} convergents starting at index {}",
        candidates.len(),
        candidates[0].index
    )))
}

/// [`bd_reduce`] with the problem rebuilt at doubled precision on failure.
pub fn bd_reduce_with(
    ctx: &PrecisionContext,
    problem: impl Fn(&PrecisionContext) -> Result<ReductionProblem>,
) -> Result<ReductionOutcome> {
    with_precision_retry(ctx, |c| bd_reduce(&problem(c)?, c))
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyOutcome {
    pub cases: Vec<(u64, ReductionOutcome)>,
    pub max_k: BigInt,
}

impl FamilyOutcome {
    pub fn len(&self) -> usize {
        self.cases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cases.is_empty()
    }
}

/// Runs one reduction per case, in parallel, and keeps the family maximum.
pub fn run_case_family<F>(
    ctx: &PrecisionContext,
    template: F,
    cases: &[u64],
    expected: Option<usize>,
) -> Result<FamilyOutcome>
where
    F: Fn(u64, &PrecisionContext) -> Result<ReductionProblem> + Sync,
{
    if cases.is_empty() {
        return Err(Error::precondition("case family is empty"));
    }
    if let Some(n) = expected {
        if n != cases.len() {
            return Err(Error::precondition(format!(
                "case family has {} cases, expected {n}",
                cases.len()
            )));
        }
    }
    let results: Vec<Result<(u64, ReductionOutcome)>> = cases
        .par_iter()
        .map(|&c| {
            bd_reduce_with(ctx, |pc| template(c, pc))
                .map(|o| (c, o))
                .map_err(|e| Error::Family {
                    case: c.to_string(),
                    source: Box::new(e),
                })
        })
        .collect();
    let cases = results.into_iter().collect::<Result<Vec<_>>>()?;
    let max_k = cases
        .iter()
        .map(|(_, o)| o.k_bound.clone())
        .max()
        .expect("nonempty family");
    Ok(FamilyOutcome { cases, max_k })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::log_of_int;
    use num_traits::Pow;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn log(n: u64, c: &PrecisionContext) -> RigorousReal {
        log_of_int(&n.into(), c).unwrap()
    }

    fn case1(x1: u64, c: &PrecisionContext) -> Result<ReductionProblem> {
        let kappa = log(3, c).checked_div(&log(5, c))?;
        let mu = log(3u64.pow(x1 as u32) - 1, c).checked_div(&log(5, c))?;
        let m = BigInt::from(3) * Pow::pow(BigInt::from(10), 51u32);
        ReductionProblem::new(kappa, mu, m, q(19, 5), q(5, 1))
    }

    #[test]
    fn case1_single_reduction() {
        let o = bd_reduce_with(&ctx(), |c| case1(3, c)).unwrap();
        assert!(o.k_bound <= BigInt::from(82), "{}", o.k_bound);
        assert!(o.convergent.q > BigInt::from(18) * Pow::pow(BigInt::from(10), 51u32));
        assert!(o.xi.is_positive());
    }

    #[test]
    fn case2_single_reduction() {
        let o = bd_reduce_with(&ctx(), |c| {
            let kappa = log(5, c).checked_div(&log(3, c))?;
            let mu = log(124, c).checked_div(&log(3, c))?;
            let m = BigInt::from(21) * Pow::pow(BigInt::from(10), 50u32);
            ReductionProblem::new(kappa, mu, m, q(11, 2), q(3, 1))
        })
        .unwrap();
        assert!(o.k_bound <= BigInt::from(115), "{}", o.k_bound);
    }

    #[test]
    fn integer_mu_fails() {
        let c = ctx();
        let kappa = log(3, &c).checked_div(&log(5, &c)).unwrap();
        let p = ReductionProblem::new(kappa, RigorousReal::from_int(2, &c), 1000.into(), q(19, 5), q(5, 1))
            .unwrap();
        assert!(matches!(bd_reduce(&p, &c), Err(Error::ReductionFailed(_))));
    }

    #[test]
    fn invalid_problems_rejected() {
        let c = ctx();
        let one = RigorousReal::from_int(1, &c);
        assert!(ReductionProblem::new(one.clone(), one.clone(), 0.into(), q(1, 1), q(5, 1)).is_err());
        assert!(ReductionProblem::new(one.clone(), one.clone(), 1.into(), q(0, 1), q(5, 1)).is_err());
        assert!(ReductionProblem::new(one.clone(), one, 1.into(), q(1, 1), q(1, 1)).is_err());
    }

    #[test]
    fn family_count_validated() {
        let err = run_case_family(&ctx(), case1, &[3, 5, 6], Some(4)).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
        let fam = run_case_family(&ctx(), case1, &[3, 5, 6], Some(3)).unwrap();
        assert_eq!(fam.len(), 3);
        assert_eq!(fam.max_k, fam.cases.iter().map(|(_, o)| o.k_bound.clone()).max().unwrap());
    }

    #[test]
    fn doubled_precision_agrees() {
        let c = ctx();
        let a = bd_reduce(&case1(7, &c).unwrap(), &c).unwrap();
        let d = c.doubled().unwrap();
        let b = bd_reduce(&case1(7, &d).unwrap(), &d).unwrap();
        assert_eq!(a.convergent, b.convergent);
        assert_eq!(a.k_bound, b.k_bound);
        assert!(b.xi.is_positive());
    }
}
