//! Exact bounded search for `(a^x1 - 1)(a^x2 - 1) = (b^y1 - 1)(b^y2 - 1)`.
//!
//! For a base `c >= 3`, `c^(u+v-1) < (c^u - 1)(c^v - 1) < c^(u+v)`, so one
//! side fixes the exponent sum on the other side. The search loops over
//! `(x1, x2, y1)` and reads `y2` off the size of the left-hand side.

use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Solution = [u64; 4];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Equation {
    pub a: u64,
    pub b: u64,
}

impl Default for Equation {
    fn default() -> Self {
        Self { a: 3, b: 5 }
    }
}

fn power_minus_one(base: u64, e: u64) -> Result<BigInt> {
    if e == 0 {
        return Err(Error::domain("exponents must be positive"));
    }
    Ok(Pow::pow(BigInt::from(base), e) - 1)
}

/// `k` with `c^k <= n < c^(k+1)`, and whether `n = c^k`.
fn floor_log(n: &BigInt, c: u64) -> (u64, bool) {
    let c = BigInt::from(c);
    let mut p = BigInt::one();
    let mut k = 0u64;
    while &(&p * &c) <= n {
        p *= &c;
        k += 1;
    }
    (k, &p == n)
}

impl Equation {
    pub fn new(a: u64, b: u64) -> Result<Self> {
        if a < 3 || b < 3 {
            return Err(Error::domain("bases must be at least 3"));
        }
        if a == b {
            return Err(Error::domain("bases must differ"));
        }
        Ok(Self { a, b })
    }

    pub fn lhs(&self, x1: u64, x2: u64) -> Result<BigInt> {
        Ok(power_minus_one(self.a, x1)? * power_minus_one(self.a, x2)?)
    }

    pub fn rhs(&self, y1: u64, y2: u64) -> Result<BigInt> {
        Ok(power_minus_one(self.b, y1)? * power_minus_one(self.b, y2)?)
    }

    pub fn holds(&self, s: &Solution) -> bool {
        s.iter().all(|&e| e > 0) && self.lhs(s[0], s[1]).ok() == self.rhs(s[2], s[3]).ok()
    }

    /// Exponent sum `t` with `c^(t-1) < v < c^t`, if one exists.
    fn sum_for(value: &BigInt, c: u64) -> Option<u64> {
        let (k, exact) = floor_log(value, c);
        if exact || value <= &BigInt::zero() {
            None
        } else {
            Some(k + 1)
        }
    }

    /// The only `y2 >= 1` that can pair with `(x1, x2, y1)`.
    pub fn size_prune(&self, x1: u64, x2: u64, y1: u64) -> Result<Option<u64>> {
        let l = self.lhs(x1, x2)?;
        Ok(Self::sum_for(&l, self.b).and_then(|t| t.checked_sub(y1)).filter(|&y2| y2 >= 1))
    }

    /// The only `x2 >= 1` that can pair with `(y1, y2, x1)`.
    pub fn size_prune_x2(&self, y1: u64, y2: u64, x1: u64) -> Result<Option<u64>> {
        let r = self.rhs(y1, y2)?;
        Ok(Self::sum_for(&r, self.a).and_then(|t| t.checked_sub(x1)).filter(|&x2| x2 >= 1))
    }

    /// Solutions with `x1 + x2 = s`, `x1 <= x2`, `y1 <= y2`.
    pub fn solutions_with_x_sum(&self, s: u64) -> Vec<Solution> {
        let mut out = Vec::new();
        for x1 in 1..=s / 2 {
            let x2 = s - x1;
            let l = self.lhs(x1, x2).expect("positive exponents");
            let Some(t) = Self::sum_for(&l, self.b) else { continue };
            for y1 in 1..=t / 2 {
                if self.rhs(y1, t - y1).expect("positive exponents") == l {
                    out.push([x1, x2, y1, t - y1]);
                }
            }
        }
        out
    }

    /// Solutions with `y1 + y2 = s`, `x1 <= x2`, `y1 <= y2`.
    pub fn solutions_with_y_sum(&self, s: u64) -> Vec<Solution> {
        let mut out = Vec::new();
        for y1 in 1..=s / 2 {
            let y2 = s - y1;
            let r = self.rhs(y1, y2).expect("positive exponents");
            let Some(t) = Self::sum_for(&r, self.a) else { continue };
            for x1 in 1..=t / 2 {
                if self.lhs(x1, t - x1).expect("positive exponents") == r {
                    out.push([x1, t - x1, y1, y2]);
                }
            }
        }
        out
    }

    /// All solutions with `x1 + x2 <= 3` or `y1 + y2 <= 3`.
    pub fn small_cases(&self) -> SolutionSet {
        let mut v = Vec::new();
        for s in 2..=3 {
            v.extend(self.solutions_with_x_sum(s));
            v.extend(self.solutions_with_y_sum(s));
        }
        SolutionSet::from_unsorted(v)
    }

    pub fn enumerate(&self, bx: &SearchBox) -> Result<SearchOutcome> {
        bx.validate()?;
        let pairs: Vec<(u64, u64)> = bx
            .x1
            .clone()
            .flat_map(|x1| {
                let lo = if bx.ordered { (*bx.x2.start()).max(x1) } else { *bx.x2.start() };
                (lo..=*bx.x2.end()).map(move |x2| (x1, x2))
            })
            .filter(|&(x1, x2)| !bx.filters || (x1 % 4 != 0 && x2 % 4 != 0))
            .collect();
        let b_pows: Vec<BigInt> = {
            let hi = *bx.y1.end().max(bx.y2.end()) + 1;
            let mut v = vec![BigInt::zero()];
            let mut p = BigInt::one();
            for _ in 1..=hi {
                p *= self.b;
                v.push(&p - 1);
            }
            v
        };
        let a_pow = |x: u64| Pow::pow(BigInt::from(self.a), x);
        let per_pair: Vec<(u64, Vec<Solution>)> = pairs
            .par_iter()
            .map(|&(x1, x2)| {
                let l = (a_pow(x1) - 1) * (a_pow(x2) - 1);
                let mut found = Vec::new();
                let mut checked = 0u64;
                let Some(t) = Self::sum_for(&l, self.b) else {
                    return (0, found);
                };
                for y1 in bx.y1.clone() {
                    let Some(y2) = t.checked_sub(y1).filter(|&y2| y2 >= 1) else { continue };
                    if !bx.y2.contains(&y2) || (bx.ordered && y2 < y1) {
                        continue;
                    }
                    if bx.filters && (y1 % 2 == 0 || y2 % 2 == 0) {
                        continue;
                    }
                    if let Some(side) = bx.side {
                        if !side.admits(self, x1, y1) {
                            continue;
                        }
                    }
                    checked += 1;
                    if y2 as usize >= b_pows.len() {
                        continue;
                    }
                    if &b_pows[y1 as usize] * &b_pows[y2 as usize] == l {
                        found.push([x1, x2, y1, y2]);
                    }
                }
                (checked, found)
            })
            .collect();
        let candidates = per_pair.iter().map(|(c, _)| c).sum();
        let solutions = SolutionSet::from_unsorted(per_pair.into_iter().flat_map(|(_, f)| f).collect());
        Ok(SearchOutcome {
            solutions,
            pairs: pairs.len() as u64,
            candidates,
        })
    }
}

/// Which of `a^x1` and `b^y1` is smaller.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SideCondition {
    /// `a^x1 < b^y1`
    Case1,
    /// `a^x1 > b^y1`
    Case2,
}

impl SideCondition {
    pub fn admits(&self, eq: &Equation, x1: u64, y1: u64) -> bool {
        let l = Pow::pow(BigInt::from(eq.a), x1);
        let r = Pow::pow(BigInt::from(eq.b), y1);
        match self {
            SideCondition::Case1 => l < r,
            SideCondition::Case2 => l > r,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBox {
    pub x1: RangeInclusive<u64>,
    pub x2: RangeInclusive<u64>,
    pub y1: RangeInclusive<u64>,
    pub y2: RangeInclusive<u64>,
    /// Enforce `x1 <= x2` and `y1 <= y2`.
    pub ordered: bool,
    /// Skip `4 | x_i` and `2 | y_i`.
    pub filters: bool,
    pub side: Option<SideCondition>,
}

impl SearchBox {
    pub fn new(
        x1: RangeInclusive<u64>,
        x2: RangeInclusive<u64>,
        y1: RangeInclusive<u64>,
        y2: RangeInclusive<u64>,
    ) -> Result<Self> {
        let b = Self {
            x1,
            x2,
            y1,
            y2,
            ordered: true,
            filters: false,
            side: None,
        };
        b.validate()?;
        Ok(b)
    }

    pub fn with_filters(mut self, on: bool) -> Self {
        self.filters = on;
        self
    }

    pub fn with_side(mut self, side: Option<SideCondition>) -> Self {
        self.side = side;
        self
    }

    pub fn unordered(mut self) -> Self {
        self.ordered = false;
        self
    }

    fn validate(&self) -> Result<()> {
        for (name, r) in [("x1", &self.x1), ("x2", &self.x2), ("y1", &self.y1), ("y2", &self.y2)] {
            if r.is_empty() || *r.start() == 0 {
                return Err(Error::domain(format!("range for {name} must be nonempty and positive")));
            }
        }
        Ok(())
    }

    pub fn contains(&self, s: &Solution) -> bool {
        self.x1.contains(&s[0]) && self.x2.contains(&s[1]) && self.y1.contains(&s[2]) && self.y2.contains(&s[3])
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionSet {
    solutions: Vec<Solution>,
}

impl SolutionSet {
    pub fn from_unsorted(mut v: Vec<Solution>) -> Self {
        v.sort();
        v.dedup();
        Self { solutions: v }
    }

    pub fn as_slice(&self) -> &[Solution] {
        &self.solutions
    }

    pub fn len(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    pub fn union(&self, other: &SolutionSet) -> SolutionSet {
        let mut v = self.solutions.clone();
        v.extend_from_slice(&other.solutions);
        Self::from_unsorted(v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub solutions: SolutionSet,
    /// `(x1, x2)` pairs visited.
    pub pairs: u64,
    /// Tuples that survived size pruning and reached the exact comparison.
    pub candidates: u64,
}

pub fn lhs(x1: u64, x2: u64) -> Result<BigInt> {
    Equation::default().lhs(x1, x2)
}

pub fn rhs(y1: u64, y2: u64) -> Result<BigInt> {
    Equation::default().rhs(y1, y2)
}

pub fn size_prune(x1: u64, x2: u64, y1: u64) -> Result<Option<u64>> {
    Equation::default().size_prune(x1, x2, y1)
}

pub fn enumerate(bx: &SearchBox) -> Result<SearchOutcome> {
    Equation::default().enumerate(bx)
}

pub fn small_cases() -> SolutionSet {
    Equation::default().small_cases()
}

/// No `x_i` divisible by 4 and no even `y_i`.
pub fn divisibility_ok(x1: u64, x2: u64, y1: u64, y2: u64) -> bool {
    x1 % 4 != 0 && x2 % 4 != 0 && y1 % 2 != 0 && y2 % 2 != 0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(max_x: u64, max_y: u64) -> Vec<Solution> {
        let p3: Vec<i128> = (0..=max_x as u32).map(|e| 3i128.pow(e) - 1).collect();
        let p5: Vec<i128> = (0..=max_y as u32).map(|e| 5i128.pow(e) - 1).collect();
        let mut out = Vec::new();
        for x1 in 1..=max_x {
            for x2 in x1..=max_x {
                for y1 in 1..=max_y {
                    for y2 in y1..=max_y {
                        let (l, r) = (
                            p3[x1 as usize].checked_mul(p3[x2 as usize]),
                            p5[y1 as usize].checked_mul(p5[y2 as usize]),
                        );
                        if l.is_some() && l == r {
                            out.push([x1, x2, y1, y2]);
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn evaluations() {
        assert_eq!(lhs(1, 2).unwrap(), BigInt::from(16));
        assert_eq!(rhs(1, 1).unwrap(), BigInt::from(16));
        assert_eq!(lhs(3, 3).unwrap(), BigInt::from(676));
        assert!(lhs(0, 2).is_err());
    }

    #[test]
    fn pruning_examples() {
        assert_eq!(size_prune(1, 2, 1).unwrap(), Some(1));
        assert_eq!(size_prune(3, 3, 1).unwrap(), Some(4));
        assert_eq!(size_prune(1, 1, 5).unwrap(), None);
        // brute force over y2 <= 10 for (3, 3, 1): only y2 = 4 has the right size
        let l = lhs(3, 3).unwrap();
        let sized: Vec<u64> = (1..=10u64)
            .filter(|&y2| {
                let s = Pow::pow(BigInt::from(5), 1 + y2);
                s > l && l > Pow::pow(BigInt::from(5), y2)
            })
            .collect();
        assert_eq!(sized, vec![4]);
    }

    #[test]
    fn tiny_box() {
        let bx = SearchBox::new(1..=2, 1..=2, 1..=2, 1..=2).unwrap();
        assert_eq!(enumerate(&bx).unwrap().solutions.as_slice(), &[[1, 2, 1, 1]]);
    }

    #[test]
    fn oracle_box() {
        let bx = SearchBox::new(1..=30, 1..=30, 1..=20, 1..=20).unwrap();
        let got = enumerate(&bx).unwrap().solutions;
        assert_eq!(got.as_slice(), naive(30, 20).as_slice());
        assert_eq!(got.as_slice(), &[[1, 2, 1, 1]]);
    }

    #[test]
    fn small_case_sets() {
        let e = Equation::default();
        assert_eq!(small_cases().as_slice(), &[[1, 2, 1, 1]]);
        assert!(e.solutions_with_x_sum(2).is_empty());
        assert_eq!(e.solutions_with_y_sum(2), vec![[1, 2, 1, 1]]);
    }

    #[test]
    fn divisibility() {
        assert!(divisibility_ok(1, 2, 1, 1));
        assert!(!divisibility_ok(4, 5, 1, 1));
        assert!(!divisibility_ok(1, 1, 2, 3));
    }

    #[test]
    fn empty_range_rejected() {
        assert!(SearchBox::new(2..=1, 1..=2, 1..=2, 1..=2).is_err());
        assert!(Equation::new(3, 3).is_err());
        assert!(Equation::new(2, 5).is_err());
    }
}
