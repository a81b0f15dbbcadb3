//! Stages 1-5: the main region `x1 >= 3`, `y1 >= 2`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Pow, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{linear_form_lower_bound, FormBoundQuery};
use crate::linforms::{
    derive_min_bound, linearize, matveev_lower_bound, solve_log_inequality, DBound, ExpShape, LogPowerBound,
    MatveevInput, PolylogInequality,
};
use crate::numerics::{log_of_int, PrecisionContext, RigorousReal};
use crate::reduction::{run_case_family, FamilyOutcome, ReductionProblem};
use crate::search::{Equation, SearchBox, SearchOutcome};

pub(crate) fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub(crate) fn log_n(n: impl Into<BigInt>, ctx: &PrecisionContext) -> Result<RigorousReal> {
    log_of_int(&n.into(), ctx)
}

pub(crate) fn exact(x: BigRational, ctx: &PrecisionContext) -> RigorousReal {
    RigorousReal::exact(x, ctx.working())
}

/// Largest integer strictly below `t`.
pub(crate) fn strictly_below(t: &RigorousReal) -> BigInt {
    t.ceil_hi() - 1
}

pub(crate) fn to_u64(n: &BigInt, what: &str) -> Result<u64> {
    n.to_u64()
        .ok_or_else(|| Error::domain(format!("{what} = {n} does not fit the search range")))
}

pub(crate) fn pow_big(base: u64, e: u64) -> BigInt {
    Pow::pow(BigInt::from(base), e)
}

/// `k` with `c / B^k > L` for every admissible `k`, i.e. `k < log(c/L)/log B`.
pub(crate) fn exponent_below(c: i64, lower: &RigorousReal, base: u64, ctx: &PrecisionContext) -> Result<RigorousReal> {
    exact(q(c, 1), ctx).checked_div(lower)?.ln()?.checked_div(&log_n(base, ctx)?)
}

/// Checks `num / log(base) < a`, the over-approximation used for `A`.
pub(crate) fn check_a_value(num: i64, base: u64, a: &BigRational, ctx: &PrecisionContext) -> Result<()> {
    let v = exact(q(num, 1), ctx).checked_div(&log_n(base, ctx)?)?;
    if v.definitely_lt(&exact(a.clone(), ctx)) {
        Ok(())
    } else {
        Err(Error::precondition(format!("{num}/log {base} < {a} not certified")))
    }
}

#[derive(Debug, Clone)]
pub struct Stage1 {
    /// `log|Gamma_1| > -C1 Z`
    pub gamma1: LogPowerBound,
    /// `min{x1/lambda, y1} < m Z`
    pub min_bound: LogPowerBound,
    /// Height bound for `3^x1 - 1` (Case 1) and `5^y1 - 1` (Case 2).
    pub a1: LogPowerBound,
    /// `log|Gamma_{2,i}| > -C2 Z^2`
    pub gamma2: LogPowerBound,
    /// `(log 5) y1 < h1 Z^2` and `(log 3) x1 < h1 Z^2`
    pub h1: LogPowerBound,
    /// `log|Gamma_{3,i}| > -C3 Z^4`
    pub gamma3: LogPowerBound,
    pub h2: LogPowerBound,
    /// Inclusive bounds.
    pub z_max: BigInt,
    pub ysum_max: BigInt,
}

pub fn stage1(ctx: &PrecisionContext) -> Result<Stage1> {
    let log3 = log_n(3, ctx)?;
    let log5 = log_n(5, ctx)?;
    let gamma1 = matveev_lower_bound(&MatveevInput::for_bases(&[3, 5], DBound::Symbolic, ctx)?, ctx)?;
    let min_bound = derive_min_bound(&gamma1, &ExpShape::new(q(12, 1), 5), ctx)?;
    // h(3^x1 - 1) < x1 log 3 = (log 5) x1/lambda, and h(5^y1 - 1) < (log 5) y1
    let a1 = LogPowerBound::new(&min_bound.coeff * &log5, min_bound.power);
    let input2 = MatveevInput {
        degree: 1,
        d: DBound::Symbolic,
        heights: vec![a1.clone(), LogPowerBound::constant(log3.clone()), LogPowerBound::constant(log5.clone())],
    };
    let gamma2 = matveev_lower_bound(&input2, ctx)?;
    // from |Gamma_2| < 3/5^y1 (resp. 3/3^x1)
    let h1 = LogPowerBound::new(&gamma2.coeff + &log3, gamma2.power);
    let input3 = MatveevInput {
        degree: 1,
        d: DBound::Symbolic,
        heights: vec![
            a1.clone(),
            LogPowerBound::constant(log3.clone()),
            h1.clone(),
            LogPowerBound::constant(log5.clone()),
        ],
    };
    let gamma3 = matveev_lower_bound(&input3, ctx)?;
    let h2 = LogPowerBound::new(&gamma3.coeff + &log3, gamma3.power);
    // Case 1: (log 3)(z - 1) < (log 5)(y1 + y2) < h1 Z^2 + h2 Z^4; Case 2 is tighter
    let ineq = PolylogInequality {
        alpha: log3.clone(),
        beta0: log3.clone(),
        terms: vec![h1.clone(), h2.clone()],
    };
    let t = solve_log_inequality(&ineq, ctx)?;
    let z_max: BigInt = &t - 1;
    // (y1 + y2 - 1) log 5 < z log 3
    let y_real = RigorousReal::from_int(1, ctx) + RigorousReal::from_int(z_max.clone(), ctx) * log3.checked_div(&log5)?;
    let ysum_max = strictly_below(&y_real);
    Ok(Stage1 {
        gamma1,
        min_bound,
        a1,
        gamma2,
        h1,
        gamma3,
        h2,
        z_max,
        ysum_max,
    })
}

#[derive(Debug, Clone)]
pub struct Stage2 {
    pub lattice_lower: RigorousReal,
    pub scaling: BigInt,
    /// `min{x1/lambda, y1} < min_bound`
    pub min_bound: RigorousReal,
    /// Case 1: `x1 < lambda * min_bound`.
    pub case1_x1_max: u64,
    /// Case 2: `y1 < min_bound`.
    pub case2_y1_max: u64,
}

pub fn stage2(s1: &Stage1, ctx: &PrecisionContext) -> Result<Stage2> {
    // min{x1/lambda, y1} >= 2 puts the Gamma_1 bound at 12/25 < 3/4
    linearize(&exact(q(12, 25), ctx))?;
    let query = FormBoundQuery::new(
        vec![3.into(), 5.into()],
        None,
        vec![s1.z_max.clone(), s1.ysum_max.clone()],
    )?;
    let lb = linear_form_lower_bound(&query, ctx)?;
    let min_bound = exponent_below(24, &lb.lower, 5, ctx)?;
    let lambda = log_n(5, ctx)?.checked_div(&log_n(3, ctx)?)?;
    let case1_x1_max = to_u64(&strictly_below(&(&lambda * &min_bound)), "x1")?;
    let case2_y1_max = to_u64(&strictly_below(&min_bound), "y1")?;
    Ok(Stage2 {
        lattice_lower: lb.lower,
        scaling: lb.scaling,
        min_bound,
        case1_x1_max,
        case2_y1_max,
    })
}

#[derive(Debug, Clone)]
pub struct Stage3 {
    pub case1_x1: Vec<u64>,
    pub case2_y1: Vec<u64>,
    pub case1: FamilyOutcome,
    pub case2: FamilyOutcome,
    /// Merged bounds for the main region after Lemma 4 filtering.
    pub x1_max: u64,
    pub y1_max: u64,
}

pub fn case1_x1_range(s2: &Stage2, floor: u64) -> Vec<u64> {
    (3..=s2.case1_x1_max.max(floor)).filter(|x| x % 4 != 0).collect()
}

pub fn case2_y1_range(s2: &Stage2, floor: u64) -> Vec<u64> {
    (3..=s2.case2_y1_max.max(floor)).filter(|y| y % 2 == 1).collect()
}

pub fn case1_problem(x1: u64, z_max: &BigInt, ctx: &PrecisionContext) -> Result<ReductionProblem> {
    let log5 = log_n(5, ctx)?;
    let kappa = log_n(3, ctx)?.checked_div(&log5)?;
    let mu = log_n(pow_big(3, x1) - 1, ctx)?.checked_div(&log5)?;
    ReductionProblem::new(kappa, mu, z_max.clone(), q(19, 5), q(5, 1))
}

pub fn case2_problem(y1: u64, ysum_max: &BigInt, ctx: &PrecisionContext) -> Result<ReductionProblem> {
    let log3 = log_n(3, ctx)?;
    let kappa = log_n(5, ctx)?.checked_div(&log3)?;
    let mu = log_n(pow_big(5, y1) - 1, ctx)?.checked_div(&log3)?;
    ReductionProblem::new(kappa, mu, ysum_max.clone(), q(11, 2), q(3, 1))
}

pub(crate) fn largest_not_divisible(mut n: u64, d: u64) -> u64 {
    while n > 0 && n % d == 0 {
        n -= 1;
    }
    n
}

pub(crate) fn largest_odd(n: u64) -> u64 {
    if n % 2 == 0 {
        n.saturating_sub(1)
    } else {
        n
    }
}

pub fn stage3(s1: &Stage1, s2: &Stage2, x1_floor: u64, y1_floor: u64, ctx: &PrecisionContext) -> Result<Stage3> {
    // 6/(5^y1 log 5) < 3.8 * 5^-y1 and 6/(3^x1 log 3) < 5.5 * 3^-x1
    check_a_value(6, 5, &q(19, 5), ctx)?;
    check_a_value(6, 3, &q(11, 2), ctx)?;
    // Case 1 needs 3/5^y1 < 3/4 and Case 2 needs 3/3^x1 < 3/4
    linearize(&exact(q(3, 5), ctx))?;
    linearize(&exact(q(3, 27), ctx))?;
    let case1_x1 = case1_x1_range(s2, x1_floor);
    let case2_y1 = case2_y1_range(s2, y1_floor);
    let case1 = run_case_family(ctx, |x1, c| case1_problem(x1, &s1.z_max, c), &case1_x1, Some(case1_x1.len()))?;
    let case2 = run_case_family(ctx, |y1, c| case2_problem(y1, &s1.ysum_max, c), &case2_y1, Some(case2_y1.len()))?;
    let case1_y1 = to_u64(&case1.max_k, "y1")?;
    let case2_x1 = to_u64(&case2.max_k, "x1")?;
    let x1_max = largest_not_divisible(s2.case1_x1_max.max(case2_x1), 4);
    let y1_max = largest_odd(case1_y1.max(s2.case2_y1_max));
    Ok(Stage3 {
        case1_x1,
        case2_y1,
        case1,
        case2,
        x1_max,
        y1_max,
    })
}

/// Lattice bound for one `(x1, y1)` pair of stage 4.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairBound {
    pub x1: u64,
    pub y1: u64,
    /// `y2` (Case 1) or `x2` (Case 2) is at most this.
    pub bound: u64,
    pub lower: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Stage4 {
    pub case1_pairs: Vec<PairBound>,
    pub case2_pairs: Vec<PairBound>,
    pub case1_y2_max: u64,
    /// `x2` from the size step, before and after `4 ∤ x2`.
    pub case1_x2_size: u64,
    pub case1_x2_max: u64,
    pub case2_x2_max: u64,
    pub case2_y2_size: u64,
    pub case2_y2_max: u64,
    pub x2_max: u64,
    pub y2_max: u64,
}

fn pair_bound(
    x1: u64,
    y1: u64,
    case1: bool,
    s1: &Stage1,
    ctx: &PrecisionContext,
) -> Result<PairBound> {
    let a = pow_big(3, x1) - 1;
    let b = pow_big(5, y1) - 1;
    let (bases, constant, bounds, base) = if case1 {
        // |x2 log 3 - y2 log 5 + log((3^x1-1)/(5^y1-1))| < 6/5^y2
        (vec![3.into(), 5.into()], BigRational::new(a, b), vec![s1.z_max.clone(), s1.ysum_max.clone()], 5)
    } else {
        (vec![5.into(), 3.into()], BigRational::new(b, a), vec![s1.ysum_max.clone(), s1.z_max.clone()], 3)
    };
    let query = FormBoundQuery::new(bases, Some(constant), bounds)?;
    let lb = linear_form_lower_bound(&query, ctx).map_err(|e| Error::Family {
        case: format!("(x1, y1) = ({x1}, {y1})"),
        source: Box::new(e),
    })?;
    let t = exponent_below(6, &lb.lower, base, ctx)?;
    Ok(PairBound {
        x1,
        y1,
        bound: to_u64(&strictly_below(&t), "exponent")?,
        lower: format!("{:.4e}", lb.lower.to_f64()),
    })
}

/// Largest `e` with `k * (c^e - 1) < n`.
pub(crate) fn largest_exponent(c: u64, k: &BigInt, n: &BigInt) -> u64 {
    let mut e = 0u64;
    while k * (pow_big(c, e + 1) - 1) < *n {
        e += 1;
    }
    e
}

pub fn stage4_pairs(s1: &Stage1, s3: &Stage3, ctx: &PrecisionContext) -> Result<(Vec<PairBound>, Vec<PairBound>)> {
    let pairs: Vec<(u64, u64, bool)> = (3..=s3.x1_max)
        .filter(|x| x % 4 != 0)
        .flat_map(|x1| {
            (3..=s3.y1_max)
                .filter(|y| y % 2 == 1)
                .map(move |y1| (x1, y1, pow_big(3, x1) < pow_big(5, y1)))
        })
        .collect();
    let results: Vec<Result<(bool, PairBound)>> = pairs
        .par_iter()
        .map(|&(x1, y1, case1)| pair_bound(x1, y1, case1, s1, ctx).map(|p| (case1, p)))
        .collect();
    let mut c1 = Vec::new();
    let mut c2 = Vec::new();
    for r in results {
        let (case1, p) = r?;
        if case1 {
            c1.push(p);
        } else {
            c2.push(p);
        }
    }
    Ok((c1, c2))
}

pub fn stage4_finish(s3: &Stage3, case1_pairs: Vec<PairBound>, case2_pairs: Vec<PairBound>, ctx: &PrecisionContext) -> Result<Stage4> {
    // 3/5^y2 < 3/4 and 3/3^x2 < 3/4 for y2 >= 3, x2 >= 3
    linearize(&exact(q(3, 125), ctx))?;
    linearize(&exact(q(3, 27), ctx))?;
    let case1_y2_max = case1_pairs.iter().map(|p| p.bound).max().unwrap_or(0);
    let case2_x2_max = case2_pairs.iter().map(|p| p.bound).max().unwrap_or(0);
    // 3^x2 < 1 + 5^(y1+y2) / (3^x1 - 1) with x1 >= 3
    let case1_x2_size = largest_exponent(3, &BigInt::from(26), &pow_big(5, s3.y1_max + case1_y2_max));
    let case1_x2_max = largest_not_divisible(case1_x2_size, 4);
    // 5^y2 < 1 + 3^(x1+x2) / (5^y1 - 1) with y1 >= 3
    let case2_y2_size = largest_exponent(5, &BigInt::from(124), &pow_big(3, s3.x1_max + case2_x2_max));
    let case2_y2_max = largest_odd(case2_y2_size);
    Ok(Stage4 {
        x2_max: case1_x2_max.max(largest_not_divisible(case2_x2_max, 4)),
        y2_max: largest_odd(case1_y2_max).max(case2_y2_max),
        case1_pairs,
        case2_pairs,
        case1_y2_max,
        case1_x2_size,
        case1_x2_max,
        case2_x2_max,
        case2_y2_size,
        case2_y2_max,
    })
}

pub fn main_box(s3: &Stage3, s4: &Stage4) -> Result<SearchBox> {
    Ok(SearchBox::new(3..=s3.x1_max, 3..=s4.x2_max.max(3), 2..=s3.y1_max, 2..=s4.y2_max.max(2))?.with_filters(true))
}

pub fn stage5(bx: &SearchBox) -> Result<SearchOutcome> {
    Equation::default().enumerate(bx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_helpers() {
        // 26 (3^e - 1) < 5^240 for e up to the paper's 348
        assert_eq!(largest_exponent(3, &BigInt::from(26), &pow_big(5, 240)), 348);
        assert_eq!(largest_not_divisible(348, 4), 347);
        assert_eq!(largest_odd(238), 237);
        assert_eq!(largest_exponent(5, &BigInt::from(124), &pow_big(3, 118 + 235)), 237);
    }

    #[test]
    fn strict_bounds() {
        let c = PrecisionContext::default();
        assert_eq!(strictly_below(&exact(q(5, 1), &c)), BigInt::from(4));
        assert_eq!(strictly_below(&exact(q(9, 2), &c)), BigInt::from(4));
    }
}
