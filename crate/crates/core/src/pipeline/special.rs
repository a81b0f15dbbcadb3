//! Stage 6: the cases `x1 = 2`, `x1 = 1` and `y1 = 1`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use super::stages::{
    check_a_value, exact, exponent_below, log_n, pow_big, q, strictly_below, to_u64,
};
use crate::error::Result;
use crate::lattice::{linear_form_lower_bound, FormBoundQuery};
use crate::linforms::{
    derive_min_bound, linearize, matveev_lower_bound, solve_log_inequality, DBound, ExpShape, LogPowerBound,
    MatveevInput, PolylogInequality,
};
use crate::numerics::{log_of_rational, PrecisionContext, RigorousReal};
use crate::reduction::{run_case_family, FamilyOutcome, ReductionProblem};
use crate::search::{Solution, SolutionSet};
use crate::sieve::{sieve_case, ResidueFn, SieveResult, SieveSpec, SieveVariable};

/// `8 (3^x2 - 1) - (5^y1 - 1)(5^y2 - 1)` over `x2 >= 2`, `y1, y2 >= 1`.
pub fn x1_two_spec(modulus: u64) -> Result<SieveSpec> {
    let vars = vec![
        SieveVariable::new("x2", 3, 2),
        SieveVariable::new("y1", 5, 1),
        SieveVariable::new("y2", 5, 1),
    ];
    let expr: ResidueFn = Arc::new(|p: &[u64], m: u64| {
        let m = m as u128;
        let dec = |v: u64| (v as u128 + m - 1) % m;
        let l = 8 * dec(p[0]) % m;
        let r = dec(p[1]) * dec(p[2]) % m;
        ((l + m - r) % m) as u64
    });
    SieveSpec::new(modulus, vars, expr)
}

pub fn x1_two(modulus: u64) -> Result<SieveResult> {
    Ok(sieve_case(&x1_two_spec(modulus)?))
}

fn constant_height(x: RigorousReal) -> LogPowerBound {
    LogPowerBound::constant(x)
}

#[derive(Debug, Clone)]
pub struct X1One {
    /// `log|Gamma_6| > -C W`, `W = 1 + log x2`
    pub gamma6: LogPowerBound,
    /// `y1 < K1 W`
    pub k1: LogPowerBound,
    pub gamma7: LogPowerBound,
    /// `y2 < K2 W^2`
    pub k2: LogPowerBound,
    /// Inclusive.
    pub x2_bound: BigInt,
    pub lll_lower: RigorousReal,
    pub k1_star: u64,
    pub gamma7_star: LogPowerBound,
    pub k2_star: LogPowerBound,
    pub x2_bound_star: BigInt,
    pub y1_cases: Vec<u64>,
    pub bd: FamilyOutcome,
    pub y2_max: u64,
    pub solutions: SolutionSet,
    pub checked: u64,
}

/// Heights for `Gamma_7 = (5^y1 - 1) 2^-1 5^y2 3^-x2 - 1`.
fn gamma7_input(a1: LogPowerBound, ctx: &PrecisionContext) -> Result<MatveevInput> {
    Ok(MatveevInput {
        degree: 1,
        d: DBound::Symbolic,
        heights: vec![
            a1,
            constant_height(log_n(2, ctx)?),
            constant_height(log_n(5, ctx)?),
            constant_height(log_n(3, ctx)?),
        ],
    })
}

/// `x1 = 1`: `2 (3^x2 - 1) = (5^y1 - 1)(5^y2 - 1)` with `y1 + y2 >= 4`, so
/// `x2 >= y1 + y2` and `D` can be taken as `x2`.
pub fn x1_one(ctx: &PrecisionContext) -> Result<X1One> {
    let log3 = log_n(3, ctx)?;
    let log5 = log_n(5, ctx)?;
    let kappa_inv = log3.checked_div(&log5)?;

    let gamma6 = matveev_lower_bound(&MatveevInput::for_bases(&[2, 3, 5], DBound::Symbolic, ctx)?, ctx)?;
    let k1 = derive_min_bound(&gamma6, &ExpShape::new(q(2, 1), 5), ctx)?;
    // h(5^y1 - 1) < (log 5) y1 < (log 5) K1 W
    let a1 = LogPowerBound::new(&k1.coeff * &log5, k1.power);
    let gamma7 = matveev_lower_bound(&gamma7_input(a1, ctx)?, ctx)?;
    let k2 = derive_min_bound(&gamma7, &ExpShape::new(q(5, 1), 5), ctx)?;
    // (log 3 / log 5) x2 < y1 + y2 < K1 W + K2 W^2
    let ineq = PolylogInequality {
        alpha: kappa_inv.clone(),
        beta0: RigorousReal::zero(ctx),
        terms: vec![k1.clone(), k2.clone()],
    };
    let x2_bound: BigInt = solve_log_inequality(&ineq, ctx)? - 1;

    // |x2 log 3 - (y1 + y2) log 5 + log 2| < 4/5^y1
    linearize(&exact(q(2, 5), ctx))?;
    let query = FormBoundQuery::new(
        vec![3.into(), 5.into()],
        Some(q(2, 1)),
        vec![x2_bound.clone(), x2_bound.clone()],
    )?;
    let lll_lower = linear_form_lower_bound(&query, ctx)?.lower;
    let k1_star = to_u64(&strictly_below(&exponent_below(4, &lll_lower, 5, ctx)?), "y1")?;

    let a1_star = constant_height(RigorousReal::from_int(k1_star, ctx) * &log5);
    let gamma7_star = matveev_lower_bound(&gamma7_input(a1_star, ctx)?, ctx)?;
    let k2_star = derive_min_bound(&gamma7_star, &ExpShape::new(q(5, 1), 5), ctx)?;
    let ineq = PolylogInequality {
        alpha: kappa_inv,
        beta0: RigorousReal::from_int(k1_star, ctx),
        terms: vec![k2_star.clone()],
    };
    let x2_bound_star = (solve_log_inequality(&ineq, ctx)? - BigInt::from(1)).min(x2_bound.clone());

    // |y2 lambda - x2 + log((5^y1 - 1)/2)/log 3| < 10/(5^y2 log 3) < 10/5^y2
    linearize(&exact(q(5, 25), ctx))?;
    check_a_value(10, 3, &q(10, 1), ctx)?;
    let y1_cases: Vec<u64> = (3..=k1_star).filter(|y| y % 2 == 1).collect();
    let m = x2_bound_star.clone();
    let bd = run_case_family(
        ctx,
        |y1, c| {
            let l3 = log_n(3, c)?;
            let kappa = log_n(5, c)?.checked_div(&l3)?;
            let mu = log_of_rational(&BigRational::new(pow_big(5, y1) - 1, 2.into()), c)?.checked_div(&l3)?;
            ReductionProblem::new(kappa, mu, m.clone(), q(10, 1), q(5, 1))
        },
        &y1_cases,
        Some(y1_cases.len()),
    )?;
    let y2_max = to_u64(&bd.max_k, "y2")?;

    // y1 <= y2 <= y2_max; y1 + y2 <= 3 is the small-case lemma
    let mut found: Vec<Solution> = Vec::new();
    let mut checked = 0;
    for y1 in 1..=y2_max {
        for y2 in y1..=y2_max {
            if y1 + y2 < 4 {
                continue;
            }
            checked += 1;
            let r: BigInt = (pow_big(5, y1) - 1) * (pow_big(5, y2) - 1);
            if r.is_odd() {
                continue;
            }
            if let Some(x2) = exact_power(&(r / 2 + 1), 3) {
                found.push([1, x2, y1, y2]);
            }
        }
    }
    Ok(X1One {
        gamma6,
        k1,
        gamma7,
        k2,
        x2_bound,
        lll_lower,
        k1_star,
        gamma7_star,
        k2_star,
        x2_bound_star,
        y1_cases,
        bd,
        y2_max,
        solutions: SolutionSet::from_unsorted(found),
        checked,
    })
}

/// `e` with `n = c^e`, if any.
fn exact_power(n: &BigInt, c: u64) -> Option<u64> {
    let c = BigInt::from(c);
    let mut v = n.clone();
    let mut e = 0;
    while v > BigInt::from(1) {
        let (qt, r) = v.div_rem(&c);
        if !r.is_zero() {
            return None;
        }
        v = qt;
        e += 1;
    }
    (v == BigInt::from(1)).then_some(e)
}

#[derive(Debug, Clone)]
pub struct Y1One {
    /// `log|3^(x1+x2) 4^-1 5^-y2 - 1| > -C W`, `W = 1 + log(x1 + x2)`
    pub gamma_first: LogPowerBound,
    /// `x1 < K1 W`
    pub k1: LogPowerBound,
    pub gamma_second: LogPowerBound,
    /// `x2 < K2 W^2`
    pub k2: LogPowerBound,
    /// Inclusive bound on `z = x1 + x2`.
    pub z_bound: BigInt,
    pub lll_lower: RigorousReal,
    pub k1_star: u64,
    pub x1_cases: Vec<u64>,
    pub bd: FamilyOutcome,
    pub x2_max: u64,
    pub solutions: SolutionSet,
    pub checked: u64,
}

/// `y1 = 1`: `(3^x1 - 1)(3^x2 - 1) = 4 (5^y2 - 1)`.
pub fn y1_one(ctx: &PrecisionContext) -> Result<Y1One> {
    let log3 = log_n(3, ctx)?;
    let log5 = log_n(5, ctx)?;

    let gamma_first = matveev_lower_bound(&MatveevInput::for_bases(&[3, 4, 5], DBound::Symbolic, ctx)?, ctx)?;
    let k1 = derive_min_bound(&gamma_first, &ExpShape::new(q(6, 1), 3), ctx)?;
    // h(3^x1 - 1) < (log 3) x1 < (log 3) K1 W
    let a1 = LogPowerBound::new(&k1.coeff * &log3, k1.power);
    let input = MatveevInput {
        degree: 1,
        d: DBound::Symbolic,
        heights: vec![
            a1,
            constant_height(log3.clone()),
            constant_height(log_n(4, ctx)?),
            constant_height(log5.clone()),
        ],
    };
    let gamma_second = matveev_lower_bound(&input, ctx)?;
    let k2 = derive_min_bound(&gamma_second, &ExpShape::new(q(3, 1), 3), ctx)?;
    let ineq = PolylogInequality {
        alpha: RigorousReal::from_int(1, ctx),
        beta0: RigorousReal::zero(ctx),
        terms: vec![k1.clone(), k2.clone()],
    };
    let z_bound: BigInt = solve_log_inequality(&ineq, ctx)? - 1;

    // for x1 >= 2: |z log 3 - y2 log 5 - log 4| < 12/3^x1, with y2 < z
    linearize(&exact(q(6, 9), ctx))?;
    let query = FormBoundQuery::new(
        vec![3.into(), 5.into()],
        Some(q(1, 4)),
        vec![z_bound.clone(), z_bound.clone()],
    )?;
    let lll_lower = linear_form_lower_bound(&query, ctx)?.lower;
    let k1_star = to_u64(&strictly_below(&exponent_below(12, &lll_lower, 3, ctx)?), "x1")?.max(1);

    // |x2/lambda - y2 + log((3^x1 - 1)/4)/log 5| < 6/(3^x2 log 5) < 3.8/3^x2
    linearize(&exact(q(3, 9), ctx))?;
    check_a_value(6, 5, &q(19, 5), ctx)?;
    let x1_cases: Vec<u64> = (1..=k1_star).filter(|x| x % 4 != 0).collect();
    let m = z_bound.clone();
    let bd = run_case_family(
        ctx,
        |x1, c| {
            let l5 = log_n(5, c)?;
            let kappa = log_n(3, c)?.checked_div(&l5)?;
            let mu = log_of_rational(&BigRational::new(pow_big(3, x1) - 1, 4.into()), c)?.checked_div(&l5)?;
            ReductionProblem::new(kappa, mu, m.clone(), q(19, 5), q(3, 1))
        },
        &x1_cases,
        Some(x1_cases.len()),
    )?;
    let x2_max = to_u64(&bd.max_k, "x2")?.max(k1_star);

    let mut found: Vec<Solution> = Vec::new();
    let mut checked = 0;
    for x1 in 1..=k1_star {
        for x2 in x1..=x2_max {
            checked += 1;
            let l: BigInt = (pow_big(3, x1) - 1) * (pow_big(3, x2) - 1);
            if !(&l % 4u32).is_zero() {
                continue;
            }
            if let Some(y2) = exact_power(&(l / 4 + 1), 5) {
                if y2 >= 1 {
                    found.push([x1, x2, 1, y2]);
                }
            }
        }
    }
    Ok(Y1One {
        gamma_first,
        k1,
        gamma_second,
        k2,
        z_bound,
        lll_lower,
        k1_star,
        x1_cases,
        bd,
        x2_max,
        solutions: SolutionSet::from_unsorted(found),
        checked,
    })
}
