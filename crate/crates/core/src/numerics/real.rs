use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::PrecisionContext;
use crate::error::{Error, Result};

/// Outcome of a rigorous comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    Less,
    Greater,
    Undecidable,
}

/// A real number known to lie in `[center - radius, center + radius]`.
///
/// Centers and radii are exact rationals; after every operation the center
/// is rounded to roughly `precision` significant bits and the rounding error
/// is folded into the radius, so the enclosure stays sound.
#[derive(Clone, PartialEq, Eq)]
pub struct RigorousReal {
    center: BigRational,
    radius: BigRational,
    precision: u32,
}

fn bits(n: &BigInt) -> i64 {
    n.bits() as i64
}

/// `2^k` as a rational.
pub(crate) fn pow2(k: i64) -> BigRational {
    if k >= 0 {
        BigRational::from_integer(BigInt::one() << (k as usize))
    } else {
        BigRational::new(BigInt::one(), BigInt::one() << ((-k) as usize))
    }
}

/// `floor(q * 2^k)`.
pub(crate) fn scaled_floor(q: &BigRational, k: i64) -> BigInt {
    let (n, d) = (q.numer(), q.denom());
    if k >= 0 {
        (n << (k as usize)).div_floor(d)
    } else {
        n.div_floor(&(d << ((-k) as usize)))
    }
}

pub(crate) fn scaled_ceil(q: &BigRational, k: i64) -> BigInt {
    -scaled_floor(&-q, k)
}

/// Rough `floor(log2 |q|)`, accurate to within one.
fn log2_estimate(q: &BigRational) -> i64 {
    bits(q.numer()) - bits(q.denom())
}

impl RigorousReal {
    pub fn exact(value: BigRational, precision: u32) -> Self {
        Self {
            center: value,
            radius: BigRational::zero(),
            precision,
        }
    }

    pub fn from_int(n: impl Into<BigInt>, ctx: &PrecisionContext) -> Self {
        Self::exact(BigRational::from_integer(n.into()), ctx.working())
    }

    pub fn from_ratio(
        num: impl Into<BigInt>,
        den: impl Into<BigInt>,
        ctx: &PrecisionContext,
    ) -> Result<Self> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::domain("zero denominator"));
        }
        Ok(Self::exact(BigRational::new(num.into(), den), ctx.working()))
    }

    pub fn zero(ctx: &PrecisionContext) -> Self {
        Self::exact(BigRational::zero(), ctx.working())
    }

    /// Builds a ball from a center and radius; the radius must be nonnegative.
    pub fn from_center_radius(center: BigRational, radius: BigRational, precision: u32) -> Self {
        assert!(!radius.is_negative(), "negative radius");
        Self {
            center,
            radius,
            precision,
        }
        .rounded()
    }

    /// Smallest ball containing both rational endpoints.
    pub fn from_interval(lo: BigRational, hi: BigRational, precision: u32) -> Self {
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        let two = BigRational::from_integer(BigInt::from(2));
        let center = (&lo + &hi) / &two;
        let radius = (&hi - &lo) / two;
        Self::from_center_radius(center, radius, precision)
    }

    pub fn center(&self) -> &BigRational {
        &self.center
    }

    pub fn radius(&self) -> &BigRational {
        &self.radius
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn lo(&self) -> BigRational {
        &self.center - &self.radius
    }

    pub fn hi(&self) -> BigRational {
        &self.center + &self.radius
    }

    pub fn is_exact(&self) -> bool {
        self.radius.is_zero()
    }

    pub fn contains(&self, value: &BigRational) -> bool {
        self.lo() <= *value && *value <= self.hi()
    }

    /// True when every point of `other` lies inside `self`.
    pub fn encloses(&self, other: &RigorousReal) -> bool {
        self.lo() <= other.lo() && other.hi() <= self.hi()
    }

    fn rounded(mut self) -> Self {
        let prec = self.precision as i64;
        let c_bits = bits(self.center.numer()) + bits(self.center.denom());
        if !self.center.is_zero() && c_bits > prec + 64 {
            let k = prec - log2_estimate(&self.center);
            let m = scaled_floor(&self.center, k);
            self.center = BigRational::from_integer(m) * pow2(-k);
            // floor moved the center down by less than one grid step
            self.radius = &self.radius + pow2(-k);
        }
        let r_bits = bits(self.radius.numer()) + bits(self.radius.denom());
        if !self.radius.is_zero() && r_bits > 160 {
            let j = 64 - log2_estimate(&self.radius);
            self.radius = BigRational::from_integer(scaled_ceil(&self.radius, j)) * pow2(-j);
        }
        self
    }

    fn join_precision(&self, other: &Self) -> u32 {
        self.precision.max(other.precision)
    }

    pub fn with_precision(mut self, precision: u32) -> Self {
        self.precision = precision;
        self.rounded()
    }

    pub fn abs(&self) -> Self {
        if self.center.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.center.abs() <= self.radius
    }

    pub fn recip(&self) -> Result<Self> {
        if self.contains_zero() {
            return Err(Error::domain("reciprocal of a ball containing zero"));
        }
        let c = self.center.abs();
        let center = self.center.recip();
        let radius = &self.radius / (&c * (&c - &self.radius));
        Ok(Self::from_center_radius(center, radius, self.precision))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        if other.contains_zero() {
            return Err(Error::domain("division by a ball containing zero"));
        }
        let cb = other.center.abs();
        let center = &self.center / &other.center;
        let radius = (&self.radius * &cb + self.center.abs() * &other.radius)
            / (&cb * (&cb - &other.radius));
        Ok(Self::from_center_radius(
            center,
            radius,
            self.join_precision(other),
        ))
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::exact(BigRational::one(), self.precision);
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    pub fn mul_rational(&self, q: &BigRational) -> Self {
        Self::from_center_radius(&self.center * q, &self.radius * q.abs(), self.precision)
    }

    /// Square root of a ball whose upper endpoint is nonnegative; a slightly
    /// negative lower endpoint is clamped to zero.
    pub fn sqrt(&self) -> Result<Self> {
        let hi = self.hi();
        if hi.is_negative() {
            return Err(Error::domain("square root of a negative ball"));
        }
        let lo = self.lo().max(BigRational::zero());
        let w = self.precision as i64 + 8 - log2_estimate(&hi).min(0) / 2;
        let lo_root = scaled_floor(&lo, 2 * w).sqrt();
        let hi_root = scaled_ceil(&hi, 2 * w).sqrt() + BigInt::one();
        let scale = pow2(-w);
        Ok(Self::from_interval(
            BigRational::from_integer(lo_root) * &scale,
            BigRational::from_integer(hi_root) * scale,
            self.precision,
        ))
    }

    /// Natural logarithm of a strictly positive ball.
    pub fn ln(&self) -> Result<Self> {
        let lo = self.lo();
        if !lo.is_positive() {
            return Err(Error::domain("logarithm of a ball that is not strictly positive"));
        }
        let ctx = PrecisionContext::new(self.precision, self.precision)?;
        if self.is_exact() {
            return super::log_of_rational(&self.center, &ctx);
        }
        let a = super::log_of_rational(&lo, &ctx)?;
        let b = super::log_of_rational(&self.hi(), &ctx)?;
        Ok(Self::from_interval(a.lo(), b.hi(), self.precision))
    }

    pub fn max(&self, other: &Self) -> Self {
        let lo = self.lo().max(other.lo());
        let hi = self.hi().max(other.hi());
        Self::from_interval(lo, hi, self.join_precision(other))
    }

    pub fn min(&self, other: &Self) -> Self {
        let lo = self.lo().min(other.lo());
        let hi = self.hi().min(other.hi());
        Self::from_interval(lo, hi, self.join_precision(other))
    }

    pub fn compare(&self, other: &Self) -> Comparison {
        let d = self - other;
        if d.lo().is_positive() {
            Comparison::Greater
        } else if d.hi().is_negative() {
            Comparison::Less
        } else {
            Comparison::Undecidable
        }
    }

    pub fn is_positive(&self) -> bool {
        self.lo().is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi().is_negative()
    }

    /// Certainly `self >= other` (non-strict; exact ties count).
    pub fn definitely_ge(&self, other: &Self) -> bool {
        self.lo() >= other.hi()
    }

    pub fn definitely_lt(&self, other: &Self) -> bool {
        self.hi() < other.lo()
    }

    pub fn floor_hi(&self) -> BigInt {
        self.hi().floor().to_integer()
    }

    pub fn ceil_hi(&self) -> BigInt {
        self.hi().ceil().to_integer()
    }

    pub fn floor_lo(&self) -> BigInt {
        self.lo().floor().to_integer()
    }

    /// Approximate value of the center, for display only.
    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.center)
    }

    pub fn hi_f64(&self) -> f64 {
        rational_to_f64(&self.hi())
    }
}

pub(crate) fn rational_to_f64(q: &BigRational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    let k = 60 - log2_estimate(q);
    let m = scaled_floor(q, k);
    let mf = m.to_f64().unwrap_or(f64::NAN);
    // split the scaling so neither factor overflows
    let half = (-k) / 2;
    mf * 2f64.powi(half as i32) * 2f64.powi((-k - half) as i32)
}

impl fmt::Debug for RigorousReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "RigorousReal({:e} ± {:e})",
            self.to_f64(),
            rational_to_f64(&self.radius)
        )
    }
}

impl fmt::Display for RigorousReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.6e}", self.to_f64())
    }
}

impl Neg for RigorousReal {
    type Output = RigorousReal;
    fn neg(self) -> RigorousReal {
        RigorousReal {
            center: -self.center,
            radius: self.radius,
            precision: self.precision,
        }
    }
}

impl Neg for &RigorousReal {
    type Output = RigorousReal;
    fn neg(self) -> RigorousReal {
        -self.clone()
    }
}

impl<'a> Add<&'a RigorousReal> for &'a RigorousReal {
    type Output = RigorousReal;
    fn add(self, rhs: &RigorousReal) -> RigorousReal {
        RigorousReal::from_center_radius(
            &self.center + &rhs.center,
            &self.radius + &rhs.radius,
            self.join_precision(rhs),
        )
    }
}

impl<'a> Sub<&'a RigorousReal> for &'a RigorousReal {
    type Output = RigorousReal;
    fn sub(self, rhs: &RigorousReal) -> RigorousReal {
        RigorousReal::from_center_radius(
            &self.center - &rhs.center,
            &self.radius + &rhs.radius,
            self.join_precision(rhs),
        )
    }
}

impl<'a> Mul<&'a RigorousReal> for &'a RigorousReal {
    type Output = RigorousReal;
    fn mul(self, rhs: &RigorousReal) -> RigorousReal {
        let radius = self.center.abs() * &rhs.radius
            + rhs.center.abs() * &self.radius
            + &self.radius * &rhs.radius;
        RigorousReal::from_center_radius(
            &self.center * &rhs.center,
            radius,
            self.join_precision(rhs),
        )
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<RigorousReal> for RigorousReal {
            type Output = RigorousReal;
            fn $m(self, rhs: RigorousReal) -> RigorousReal {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a RigorousReal> for RigorousReal {
            type Output = RigorousReal;
            fn $m(self, rhs: &RigorousReal) -> RigorousReal {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<RigorousReal> for &'a RigorousReal {
            type Output = RigorousReal;
            fn $m(self, rhs: RigorousReal) -> RigorousReal {
                self.$m(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn ball(c: f64, r: f64) -> RigorousReal {
        RigorousReal::from_center_radius(
            BigRational::from_float(c).unwrap(),
            BigRational::from_float(r).unwrap(),
            128,
        )
    }

    #[test]
    fn disjoint_balls_compare() {
        assert_eq!(ball(1.0, 0.1).compare(&ball(2.0, 0.1)), Comparison::Less);
        assert_eq!(ball(2.0, 0.1).compare(&ball(1.0, 0.1)), Comparison::Greater);
    }

    #[test]
    fn overlapping_balls_undecidable() {
        assert_eq!(
            ball(1.0, 0.5).compare(&ball(1.2, 0.5)),
            Comparison::Undecidable
        );
    }

    #[test]
    fn exact_tie_is_undecidable() {
        let a = ball(3.0, 0.0);
        assert_eq!(a.compare(&a.clone()), Comparison::Undecidable);
        assert!(a.definitely_ge(&a));
    }

    #[test]
    fn division_encloses_quotient() {
        let ctx = PrecisionContext::default();
        let a = RigorousReal::from_int(7, &ctx);
        let b = RigorousReal::from_int(3, &ctx);
        let q = a.checked_div(&b).unwrap();
        assert!(q.contains(&BigRational::new(7.into(), 3.into())));
        assert!(b.checked_div(&RigorousReal::zero(&ctx)).is_err());
    }

    #[test]
    fn sqrt_of_two() {
        let ctx = PrecisionContext::default();
        let r = RigorousReal::from_int(2, &ctx).sqrt().unwrap();
        let sq = &r * &r;
        assert!(sq.contains(&BigRational::from_integer(2.into())));
        assert!((r.to_f64() - std::f64::consts::SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn rounding_keeps_enclosure() {
        let ctx = PrecisionContext::new(64, 64).unwrap();
        let third = RigorousReal::from_ratio(1, 3, &ctx).unwrap();
        let mut acc = third.clone();
        for _ in 0..50 {
            acc = &acc * &third;
        }
        let exact = BigRational::new(1.into(), BigInt::from(3).pow(51u32));
        assert!(acc.contains(&exact));
        assert!(acc.center().denom().bits() < 400);
    }

    #[test]
    fn display_shows_scientific() {
        let ctx = PrecisionContext::default();
        let r = RigorousReal::from_int(12345, &ctx);
        assert_eq!(r.to_string(), "1.234500e4");
        let tiny = rational_to_f64(&BigRational::new(1.into(), BigInt::from(10).pow(60u32)));
        assert!((tiny / 1e-60 - 1.0).abs() < 1e-12);
    }
}
