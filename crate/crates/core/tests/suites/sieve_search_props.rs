
use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use num_bigint::BigInt;
use proptest::prelude::*;

use baker_core::search::{Equation, SearchBox};
use baker_core::sieve::{carmichael, pow_mod, power_period, sieve_case, ResidueFn, SieveSpec, SieveVariable};

use crate::common::{brute_force, pow};

/// First repeat of `b^k mod m`, as (preperiod, period).
fn naive_period(b: u64, m: u64) -> (u64, u64) {
    let mut seen = HashMap::new();
    let mut v = 1 % m;
    for k in 0.. {
        if let Some(&j) = seen.get(&v) {
            return (j, k - j);
        }
        seen.insert(v, k);
        v = v * b % m;
    }
    unreachable!()
}

fn naive_carmichael(m: u64) -> u64 {
    let units: Vec<u64> = (1..m.max(2)).filter(|a| num_integer::gcd(*a, m) == 1).collect();
    (1..=m)
        .find(|&e| units.iter().all(|&a| pow_mod(a, e, m) == 1 % m))
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn periods_match_naive(b in 2u64..30, m in 2u64..2000) {
        prop_assert_eq!(power_period(b, m).unwrap(), naive_period(b, m));
    }

    #[test]
    fn carmichael_matches_naive(m in 1u64..600) {
        prop_assert_eq!(carmichael(m), naive_carmichael(m));
    }

    /// Every zero of `3^x - 5^y - c` mod m lands on a survivor, and every
    /// survivor is a zero.
    #[test]
    fn sieve_complete_and_sound(m in 2u64..300, c in 0u64..300, lx in 0u64..3, ly in 0u64..3) {
        let expr: ResidueFn = Arc::new(move |p: &[u64], m: u64| {
            ((p[0] as u128 + 2 * m as u128 - p[1] as u128 - (c % m) as u128) % m as u128) as u64
        });
        let spec = SieveSpec::new(m, vec![SieveVariable::new("x", 3, lx), SieveVariable::new("y", 5, ly)], expr).unwrap();
        let res = sieve_case(&spec);
        let surv: HashSet<Vec<u64>> = res.survivors.iter().cloned().collect();
        for s in &res.survivors {
            prop_assert_eq!(spec.residue(s), 0);
        }
        for x in lx..lx + 40 {
            for y in ly..ly + 40 {
                let v = pow(3, x) - pow(5, y) - BigInt::from(c);
                let zero = (v % m) == BigInt::from(0);
                let rep = vec![spec.representative(0, x), spec.representative(1, y)];
                prop_assert_eq!(zero, surv.contains(&rep), "x={} y={}", x, y);
            }
        }
    }

    #[test]
    fn enumerate_matches_brute_force(
        a in 1u64..=25, b in 1u64..=25, c in 1u64..=25, d in 1u64..=25,
        e in 1u64..=25, f in 1u64..=25, g in 1u64..=25, h in 1u64..=25,
        ordered in any::<bool>(),
    ) {
        let r = |p: u64, q: u64| p.min(q)..=p.max(q);
        let (x1, x2, y1, y2) = (r(a, b), r(c, d), r(e, f), r(g, h));
        let mut bx = SearchBox::new(x1.clone(), x2.clone(), y1.clone(), y2.clone()).unwrap();
        if !ordered {
            bx = bx.unordered();
        }
        let got = Equation::default().enumerate(&bx).unwrap();
        let want = brute_force(x1, x2, y1, y2, ordered);
        prop_assert_eq!(got.solutions.as_slice(), want.as_slice());
    }
}

#[test]
fn search_independent_of_thread_count() {
    let bx = SearchBox::new(1..=60, 1..=60, 1..=60, 1..=60).unwrap();
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let a = one.install(|| Equation::default().enumerate(&bx).unwrap());
    let b = four.install(|| Equation::default().enumerate(&bx).unwrap());
    assert_eq!(a, b);
    assert_eq!(a.solutions.as_slice(), [[1, 2, 1, 1]]);
}

#[test]
fn generalized_equation_matches_brute_force() {
    let eq = Equation::new(3, 7).unwrap();
    let bx = SearchBox::new(1..=12, 1..=12, 1..=12, 1..=12).unwrap();
    let got = eq.enumerate(&bx).unwrap();
    let mut naive = Vec::new();
    for x1 in 1..=12u64 {
        for x2 in x1..=12 {
            for y1 in 1..=12u64 {
                for y2 in y1..=12 {
                    if (pow(3, x1) - 1) * (pow(3, x2) - 1) == (pow(7, y1) - 1) * (pow(7, y2) - 1) {
                        naive.push([x1, x2, y1, y2]);
                    }
                }
            }
        }
    }
    assert_eq!(got.solutions.as_slice(), naive.as_slice());
}
