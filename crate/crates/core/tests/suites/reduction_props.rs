
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use proptest::prelude::*;

use baker_core::contfrac::expand;
use baker_core::numerics::{log_of_int, PrecisionContext, RigorousReal};
use baker_core::reduction::{bd_reduce, ReductionProblem};

use crate::common::{dist_to_int, ln_int, pow, to_f64, BITS};

fn ctx() -> PrecisionContext {
    PrecisionContext::default()
}

fn log_ratio(a: u64, b: u64) -> RigorousReal {
    let c = ctx();
    log_of_int(&a.into(), &c)
        .unwrap()
        .checked_div(&log_of_int(&b.into(), &c).unwrap())
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_expansion_recovers_value(p in 1i64..1_000_000, q in 1i64..1_000_000) {
        let x = BigRational::new(p.into(), q.into());
        let cf = expand(&RigorousReal::exact(x.clone(), 64), 200).unwrap();
        prop_assert!(cf.is_complete());
        let last = cf.convergents().last().unwrap();
        prop_assert_eq!(last.as_rational(), x.clone());
        for c in cf.convergents() {
            let err = (&x - c.as_rational()).abs();
            let q2 = BigRational::from_integer(&c.q * &c.q);
            prop_assert!(err * q2 <= BigRational::from_integer(1.into()));
        }
    }

    #[test]
    fn log_ratio_convergents_are_good(a in 2u64..40, b in 2u64..40) {
        prop_assume!(a != b && !baker_core::pipeline::config::multiplicatively_dependent(a, b));
        let cf = expand(&log_ratio(a, b), 40).unwrap();
        let (la, lb) = (ln_int(&a.into()), ln_int(&b.into()));
        for c in cf.convergents() {
            // |q la - p lb| < lb / q, i.e. |x - p/q| < 1/q^2
            let e = (&c.q * &la - &c.p * &lb).abs();
            prop_assert!(e * &c.q < lb);
        }
    }
}

/// Every `m <= M` and every `k` with `|m kappa - n + mu| < A B^-k` has
/// `k <= k_bound`, checked by brute force over `m`.
fn bd_sound(x1: u64, m_bound: u64) {
    let c = ctx();
    let log5 = log_of_int(&5.into(), &c).unwrap();
    let kappa = log_ratio(3, 5);
    let mu = log_of_int(&(pow(3, x1) - 1), &c).unwrap().checked_div(&log5).unwrap();
    let a = BigRational::new(19.into(), 5.into());
    let p = ReductionProblem::new(kappa, mu, m_bound.into(), a, BigRational::from_integer(5.into())).unwrap();
    let out = bd_reduce(&p, &c).unwrap();
    let k_bound = out.k_bound.to_i64().unwrap();

    let (l3, l5) = (ln_int(&3.into()), ln_int(&5.into()));
    let kf = (&l3 << BITS) / &l5;
    let muf = (ln_int(&(pow(3, x1) - 1)) << BITS) / &l5;
    let mut worst = i64::MIN;
    for m in 1..=m_bound {
        let v = to_f64(&dist_to_int(&(BigInt::from(m) * &kf + &muf)));
        // largest k with v < 3.8 / 5^k
        let k = ((3.8 / v).ln() / 5f64.ln()).ceil() as i64 - 1;
        worst = worst.max(k);
    }
    assert!(worst <= k_bound, "x1 = {x1}: brute force k = {worst} exceeds bound {k_bound}");
}

#[test]
fn bd_bound_is_sound() {
    for x1 in [3, 5, 6, 7, 9, 10] {
        bd_sound(x1, 20_000);
    }
}
