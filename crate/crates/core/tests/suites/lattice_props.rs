
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use proptest::prelude::*;

use baker_core::lattice::{choose_scaling, lll_reduce, linear_form_lower_bound, FormBoundQuery, IntegerLattice};
use baker_core::numerics::PrecisionContext;

use crate::common::{ln_int, to_f64};

fn query(bounds: [u64; 2], constant: Option<BigRational>) -> FormBoundQuery {
    FormBoundQuery::new(
        vec![3.into(), 5.into()],
        constant,
        bounds.iter().map(|&b| BigInt::from(b)).collect(),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn lll_output_is_reduced_and_same_lattice(rows in proptest::collection::vec(proptest::collection::vec(-50i64..50, 3), 3)) {
        let r: Vec<&[i64]> = rows.iter().map(|v| v.as_slice()).collect();
        let Ok(lat) = IntegerLattice::from_i64(&r) else { return Ok(()) };
        let red = lll_reduce(&lat).unwrap();
        prop_assert!(red.is_reduced());
        let red_lat = IntegerLattice::new(red.basis().to_vec()).unwrap();
        prop_assert_eq!(red_lat.determinant().abs(), lat.determinant().abs());
    }

    #[test]
    fn halving_bounds_never_lowers_the_bound(x in 1_000u64..1_000_000, y in 1_000u64..1_000_000) {
        let ctx = PrecisionContext::default();
        // fixed scaling so both queries use the same lattice
        let c = choose_scaling(&query([x, y], None)) * BigInt::from(1000);
        let full = linear_form_lower_bound(&query([x, y], None).with_scaling(c.clone()), &ctx).unwrap();
        let half = linear_form_lower_bound(&query([x / 2, y / 2], None).with_scaling(c), &ctx).unwrap();
        prop_assert!(half.lower.hi() >= full.lower.lo());
    }
}

/// `min |x log 3 - y log 5 + log c|` over the box, by brute force on y.
fn brute_min(xb: u64, yb: u64, c: Option<(u64, u64)>) -> f64 {
    let (l3, l5) = (ln_int(&3.into()), ln_int(&5.into()));
    let lc = c.map(|(p, q)| ln_int(&p.into()) - ln_int(&q.into())).unwrap_or_default();
    let mut best = f64::MAX;
    for y in 0..=yb as i64 {
        let t = BigInt::from(y) * &l5 - &lc;
        let x0 = (&t / &l3).to_i64().unwrap();
        for x in [x0 - 1, x0, x0 + 1, x0 + 2] {
            if x.unsigned_abs() > xb || (x == 0 && y == 0 && c.is_none()) {
                continue;
            }
            let v = (BigInt::from(x) * &l3 - &t).abs();
            best = best.min(to_f64(&v));
        }
    }
    best
}

#[test]
fn lattice_bound_below_true_minimum() {
    let ctx = PrecisionContext::default();
    for (xb, yb) in [(3000, 2000), (20_000, 15_000), (60_000, 41_000)] {
        let lb = linear_form_lower_bound(&query([xb, yb], None), &ctx).unwrap();
        let m = brute_min(xb, yb, None);
        assert!(lb.lower.hi_f64() <= m, "homogeneous {xb}x{yb}: {} > {m}", lb.lower.hi_f64());
        for c in [(2, 1), (26, 124), (80, 24)] {
            let q = query([xb, yb], Some(BigRational::new(c.0.into(), c.1.into())));
            let lb = linear_form_lower_bound(&q, &ctx).unwrap();
            let m = brute_min(xb, yb, Some(c));
            assert!(lb.lower.hi_f64() <= m, "constant {c:?}: {} > {m}", lb.lower.hi_f64());
        }
    }
}
