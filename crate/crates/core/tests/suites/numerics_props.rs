
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use baker_core::numerics::{log_of_int, PrecisionContext, RigorousReal};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn ball(n: i64, d: i64, prec: u32) -> RigorousReal {
    // a rounded ball around n/d, so the radius is usually nonzero
    let ctx = PrecisionContext::new(prec, prec).unwrap();
    RigorousReal::from_int(n, &ctx)
        .checked_div(&RigorousReal::from_int(d, &ctx))
        .unwrap()
}

#[test]
fn bigint_matches_i128_on_random_pairs() {
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..10_000 {
        let a: i64 = rng.gen();
        let b: i64 = rng.gen::<i64>() | 1;
        let (ba, bb) = (BigInt::from(a), BigInt::from(b));
        let (wa, wb) = (a as i128, b as i128);
        assert_eq!(&ba + &bb, BigInt::from(wa + wb));
        assert_eq!(&ba - &bb, BigInt::from(wa - wb));
        assert_eq!(&ba * &bb, BigInt::from(wa * wb));
        let mut q = wa / wb;
        if wa % wb != 0 && ((wa < 0) != (wb < 0)) {
            q -= 1;
        }
        assert_eq!(ba.div_floor(&bb), BigInt::from(q));
        assert_eq!(ba.mod_floor(&bb), BigInt::from(wa - wb * q));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn arithmetic_encloses_exact_result(
        a in -10_000i64..10_000, da in 1i64..1000,
        b in -10_000i64..10_000, db in 1i64..1000,
        prec in 16u32..200,
    ) {
        let (x, y) = (ball(a, da, prec), ball(b, db, prec));
        let (qa, qb) = (rat(a, da), rat(b, db));
        prop_assert!(x.contains(&qa));
        prop_assert!((&x + &y).contains(&(&qa + &qb)));
        prop_assert!((&x - &y).contains(&(&qa - &qb)));
        prop_assert!((&x * &y).contains(&(&qa * &qb)));
        if b != 0 {
            prop_assert!(x.checked_div(&y).unwrap().contains(&(&qa / &qb)));
        }
    }

    #[test]
    fn log_encloses_oracle(n in 2u64..1_000_000_000, prec in 64u32..400) {
        let ctx = PrecisionContext::new(prec, 4096).unwrap();
        let l = log_of_int(&BigInt::from(n), &ctx).unwrap();
        let scale = BigInt::from(1) << crate::common::BITS;
        let o = crate::common::ln_int(&BigInt::from(n));
        // the oracle is truncated toward zero by at most a few ulps
        let lo = BigRational::new(o.clone() - 16, scale.clone());
        let hi = BigRational::new(o + 16, scale);
        prop_assert!(l.lo() <= hi && l.hi() >= lo);
        prop_assert!(l.radius() < &rat(1, 1 << 40));
    }

    #[test]
    fn comparisons_are_sound(a in -1000i64..1000, b in -1000i64..1000, d in 1i64..50) {
        let (x, y) = (ball(a, d, 80), ball(b, d, 80));
        if x.definitely_lt(&y) {
            prop_assert!(a < b);
        }
        if x.definitely_ge(&y) {
            prop_assert!(a >= b);
        }
    }
}
