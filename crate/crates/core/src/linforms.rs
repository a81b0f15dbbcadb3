//! Linear forms in logarithms and the bounds derived from them.
//!
//! Upper bounds of the shape `c * Z^k` (with `Z = 1 + log z` for some
//! exponent bound `z`) are carried as [`LogPowerBound`]s so the Matveev
//! evaluator can be chained symbolically before `z` is known.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{log_of_int, log_of_rational, weil_height, Comparison, PrecisionContext, RigorousReal};

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FormShape {
    /// `c * prod eta_i^d_i - 1`
    Multiplicative,
    /// `log c + sum d_i log eta_i`
    Additive,
}

/// A linear form over positive integer bases with an optional rational
/// constant factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearLogForm {
    terms: Vec<(BigInt, BigInt)>,
    constant: Option<BigRational>,
    shape: FormShape,
}

impl LinearLogForm {
    pub fn new(
        terms: Vec<(BigInt, BigInt)>,
        constant: Option<BigRational>,
        shape: FormShape,
    ) -> Result<Self> {
        for (d, eta) in &terms {
            if d.is_zero() {
                return Err(Error::domain("zero coefficient in linear form"));
            }
            if eta < &BigInt::from(2) {
                return Err(Error::domain(format!("base {eta} must be at least 2")));
            }
        }
        if let Some(c) = &constant {
            if !c.is_positive() {
                return Err(Error::domain("constant factor must be positive"));
            }
        }
        Ok(Self {
            terms,
            constant,
            shape,
        })
    }

    pub fn terms(&self) -> &[(BigInt, BigInt)] {
        &self.terms
    }

    pub fn constant(&self) -> Option<&BigRational> {
        self.constant.as_ref()
    }

    pub fn shape(&self) -> FormShape {
        self.shape
    }

    pub fn with_shape(&self, shape: FormShape) -> Self {
        Self {
            shape,
            ..self.clone()
        }
    }

    /// `c * prod eta^d` exactly.
    fn product(&self) -> BigRational {
        let mut acc = self.constant.clone().unwrap_or_else(BigRational::one);
        for (d, eta) in &self.terms {
            let e: u32 = d.abs().try_into().expect("exponent too large for exact evaluation");
            let p = BigRational::from_integer(Pow::pow(eta, e));
            acc = if d.is_negative() { acc / p } else { acc * p };
        }
        acc
    }

    /// Exact value of the multiplicative form `c * prod eta^d - 1`.
    pub fn exact_gamma(&self) -> BigRational {
        self.product() - BigRational::one()
    }

    /// Exact nonvanishing check; the additive form vanishes exactly when the
    /// multiplicative one does.
    pub fn is_nonzero(&self) -> bool {
        !self.exact_gamma().is_zero()
    }

    /// Rigorous value in the form's own shape.
    pub fn evaluate(&self, ctx: &PrecisionContext) -> Result<RigorousReal> {
        match self.shape {
            FormShape::Multiplicative => Ok(RigorousReal::exact(self.exact_gamma(), ctx.working())),
            FormShape::Additive => {
                let mut acc = match &self.constant {
                    Some(c) => log_of_rational(c, ctx)?,
                    None => RigorousReal::zero(ctx),
                };
                for (d, eta) in &self.terms {
                    acc = acc + RigorousReal::from_int(d.clone(), ctx) * log_of_int(eta, ctx)?;
                }
                Ok(acc)
            }
        }
    }
}

/// An upper bound `coeff * Z^power`, valid for every `Z >= 1`.
#[derive(Debug, Clone)]
pub struct LogPowerBound {
    pub coeff: RigorousReal,
    pub power: u32,
}

impl LogPowerBound {
    pub fn constant(coeff: RigorousReal) -> Self {
        Self { coeff, power: 0 }
    }

    pub fn new(coeff: RigorousReal, power: u32) -> Self {
        Self { coeff, power }
    }

    pub fn eval(&self, z_log: &RigorousReal) -> RigorousReal {
        &self.coeff * &z_log.pow(self.power)
    }

    /// Product of two bounds, multiplying coefficients and adding powers.
    pub fn times(&self, other: &LogPowerBound) -> LogPowerBound {
        LogPowerBound {
            coeff: &self.coeff * &other.coeff,
            power: self.power + other.power,
        }
    }

    /// Rounds the coefficient's upper endpoint up to `digits` significant
    /// decimal digits; the result is still a valid (weaker) bound.
    pub fn rounded_up(&self, digits: u32) -> LogPowerBound {
        LogPowerBound {
            coeff: round_up_significant(&self.coeff, digits),
            power: self.power,
        }
    }
}

impl fmt::Display for LogPowerBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.power {
            0 => write!(f, "{:.4e}", self.coeff.hi_f64()),
            1 => write!(f, "{:.4e}*Z", self.coeff.hi_f64()),
            p => write!(f, "{:.4e}*Z^{}", self.coeff.hi_f64(), p),
        }
    }
}

/// Exact rational at or above `x.hi()` with `digits` significant digits.
pub fn round_up_significant(x: &RigorousReal, digits: u32) -> RigorousReal {
    let hi = x.hi();
    if !hi.is_positive() {
        return RigorousReal::exact(hi, x.precision());
    }
    let ten = BigRational::from_integer(BigInt::from(10));
    let mut exp: i32 = 0;
    let mut scaled = hi.clone();
    let lower = Pow::pow(&ten, digits as i32 - 1);
    let upper = Pow::pow(&ten, digits as i32);
    while scaled >= upper {
        scaled = scaled / &ten;
        exp += 1;
    }
    while scaled < lower {
        scaled = scaled * &ten;
        exp -= 1;
    }
    let m = BigRational::from_integer(scaled.ceil().to_integer());
    RigorousReal::exact(m * Pow::pow(&ten, exp), x.precision())
}

/// The `D` parameter of the lower bound: a concrete integer or the
/// symbolic exponent bound `z`, contributing a factor `Z = 1 + log z`.
#[derive(Debug, Clone)]
pub enum DBound {
    Concrete(BigInt),
    Symbolic,
}

#[derive(Debug, Clone)]
pub struct MatveevInput {
    pub degree: u32,
    pub d: DBound,
    pub heights: Vec<LogPowerBound>,
}

/// `max{h(n), |log n|, 0.16}` for a positive integer `n` over the rationals.
pub fn height_for_int(n: &BigInt, ctx: &PrecisionContext) -> Result<RigorousReal> {
    let h = weil_height(n, ctx)?;
    let floor = RigorousReal::exact(ratio(16, 100), ctx.working());
    Ok(match h.compare(&floor) {
        Comparison::Greater => h,
        _ => h.max(&floor),
    })
}

impl MatveevInput {
    pub fn for_bases(bases: &[u64], d: DBound, ctx: &PrecisionContext) -> Result<Self> {
        let heights = bases
            .iter()
            .map(|&b| height_for_int(&BigInt::from(b), ctx).map(LogPowerBound::constant))
            .collect::<Result<_>>()?;
        Ok(Self {
            degree: 1,
            d,
            heights,
        })
    }

    pub fn terms(&self) -> usize {
        self.heights.len()
    }

    fn validate(&self, ctx: &PrecisionContext) -> Result<()> {
        if self.heights.is_empty() {
            return Err(Error::domain("lower bound needs at least one term"));
        }
        if self.degree == 0 {
            return Err(Error::domain("field degree must be positive"));
        }
        let floor = RigorousReal::exact(ratio(16, 100), ctx.working());
        for (j, a) in self.heights.iter().enumerate() {
            if !a.coeff.definitely_ge(&floor) {
                return Err(Error::domain(format!("height bound A_{} below 0.16", j + 1)));
            }
        }
        Ok(())
    }
}

/// Lower bound `log|Gamma| > -C * Z^p` for a nonzero
/// `Gamma = prod eta_j^d_j - 1` over a real field; returns `C * Z^p`.
pub fn matveev_lower_bound(input: &MatveevInput, ctx: &PrecisionContext) -> Result<LogPowerBound> {
    input.validate(ctx)?;
    let l = input.terms() as u32;
    let prec = ctx.working();
    let l_ball = RigorousReal::from_int(l, ctx);
    // 1.4 * 30^(l+3) * l^4.5
    let mut c = RigorousReal::exact(
        ratio(14, 10) * BigRational::from_integer(Pow::pow(BigInt::from(30), l + 3)),
        prec,
    );
    c = c * l_ball.pow(4) * l_ball.sqrt()?;
    let d_l = RigorousReal::from_int(input.degree, ctx);
    let one = RigorousReal::from_int(1, ctx);
    let log_degree = if input.degree == 1 {
        RigorousReal::zero(ctx)
    } else {
        d_l.ln()?
    };
    c = c * d_l.pow(2) * (&one + &log_degree);
    let mut power = 0;
    match &input.d {
        DBound::Concrete(d) => {
            let d = d.abs().max(BigInt::from(3));
            c = c * (&one + &log_of_int(&d, ctx)?);
        }
        DBound::Symbolic => power += 1,
    }
    for a in &input.heights {
        c = c * &a.coeff;
        power += a.power;
    }
    Ok(LogPowerBound::new(c, power))
}

/// From `|e^x - 1| < K < 3/4` conclude `|x| < 2K`.
pub fn linearize(k_bound: &RigorousReal) -> Result<RigorousReal> {
    let three_quarters = RigorousReal::exact(ratio(3, 4), k_bound.precision());
    if !k_bound.definitely_lt(&three_quarters) {
        return Err(Error::precondition(format!(
            "linearisation needs K < 3/4, got K = {k_bound}"
        )));
    }
    if k_bound.is_negative() {
        return Err(Error::precondition("linearisation bound must be nonnegative"));
    }
    Ok(k_bound.mul_rational(&BigRational::from_integer(2.into())))
}

/// Exponent tuple `(x1, x2, y1, y2)`; unused fields are ignored.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exponents {
    pub x1: u64,
    pub x2: u64,
    pub y1: u64,
    pub y2: u64,
}

impl Exponents {
    pub fn new(x1: u64, x2: u64, y1: u64, y2: u64) -> Self {
        Self { x1, x2, y1, y2 }
    }
}

/// The multiplicative forms attached to the main equation and its
/// special cases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GammaId {
    /// `3^(x1+x2) / 5^(y1+y2) - 1`
    Gamma1,
    /// `(3^x1 - 1) 3^x2 / 5^(y1+y2) - 1`, when `3^x1 < 5^y1`
    Gamma21,
    /// `(5^y1 - 1) 5^y2 / 3^(x1+x2) - 1`, when `3^x1 > 5^y1`
    Gamma22,
    /// `(3^x1 - 1) 3^x2 / ((5^y1 - 1) 5^y2) - 1`, when `3^x1 < 5^y1`
    Gamma31,
    /// `(5^y1 - 1) 5^y2 / ((3^x1 - 1) 3^x2) - 1`, when `3^x1 > 5^y1`
    Gamma32,
    /// `2 * 3^x2 / 5^(y1+y2) - 1` with `x1 = 1`
    Gamma6,
    /// `(5^y1 - 1) 5^y2 / (2 * 3^x2) - 1` with `x1 = 1`
    Gamma7,
    /// `3^(x1+x2) / (4 * 5^y2) - 1` with `y1 = 1`
    GammaY1First,
    /// `(3^x1 - 1) 3^x2 / (4 * 5^y2) - 1` with `y1 = 1`
    GammaY1Second,
}

fn pow_u(base: u64, e: u64) -> BigInt {
    Pow::pow(BigInt::from(base), e as u32)
}

impl GammaId {
    /// The multiplicative form itself, for exact evaluation at concrete
    /// exponents.
    pub fn form(&self, e: &Exponents) -> Result<LinearLogForm> {
        let i = |v: u64| BigInt::from(v);
        let neg = |v: u64| -BigInt::from(v);
        let shifted3 = pow_u(3, e.x1) - 1;
        let shifted5 = pow_u(5, e.y1) - 1;
        let mut terms: Vec<(BigInt, BigInt)> = Vec::new();
        let mut constant = None;
        match self {
            GammaId::Gamma1 => {
                terms.push((i(e.x1 + e.x2), i(3)));
                terms.push((neg(e.y1 + e.y2), i(5)));
            }
            GammaId::Gamma21 => {
                constant = Some(BigRational::from_integer(shifted3));
                terms.push((i(e.x2), i(3)));
                terms.push((neg(e.y1 + e.y2), i(5)));
            }
            GammaId::Gamma22 => {
                constant = Some(BigRational::from_integer(shifted5));
                terms.push((i(e.y2), i(5)));
                terms.push((neg(e.x1 + e.x2), i(3)));
            }
            GammaId::Gamma31 => {
                constant = Some(BigRational::new(shifted3, shifted5));
                terms.push((i(e.x2), i(3)));
                terms.push((neg(e.y2), i(5)));
            }
            GammaId::Gamma32 => {
                constant = Some(BigRational::new(shifted5, shifted3));
                terms.push((i(e.y2), i(5)));
                terms.push((neg(e.x2), i(3)));
            }
            GammaId::Gamma6 => {
                constant = Some(BigRational::from_integer(i(2)));
                terms.push((i(e.x2), i(3)));
                terms.push((neg(e.y1 + e.y2), i(5)));
            }
            GammaId::Gamma7 => {
                constant = Some(BigRational::new(shifted5, i(2)));
                terms.push((i(e.y2), i(5)));
                terms.push((neg(e.x2), i(3)));
            }
            GammaId::GammaY1First => {
                constant = Some(BigRational::new(i(1), i(4)));
                terms.push((i(e.x1 + e.x2), i(3)));
                terms.push((neg(e.y2), i(5)));
            }
            GammaId::GammaY1Second => {
                constant = Some(BigRational::new(shifted3, i(4)));
                terms.push((i(e.x2), i(3)));
                terms.push((neg(e.y2), i(5)));
            }
        }
        terms.retain(|(d, _)| !d.is_zero());
        LinearLogForm::new(terms, constant, FormShape::Multiplicative)
    }
}

/// Closed-form upper bound on `|Gamma|` valid for solutions of the equation
/// in the identified case.
pub fn gamma_upper_bound(which: GammaId, e: &Exponents, ctx: &PrecisionContext) -> Result<RigorousReal> {
    let case1 = || pow_u(3, e.x1) < pow_u(5, e.y1);
    let require = |ok: bool, what: &str| {
        if ok {
            Ok(())
        } else {
            Err(Error::precondition(format!("{which:?} requires {what}")))
        }
    };
    let q = |num: BigInt, den: BigInt| RigorousReal::exact(BigRational::new(num, den), ctx.working());
    let bound = match which {
        GammaId::Gamma1 => {
            // 12 / 5^min(x1/lambda, y1) = 12 / min(3^x1, 5^y1)
            let m = pow_u(3, e.x1).min(pow_u(5, e.y1));
            q(12.into(), m)
        }
        GammaId::Gamma21 => {
            require(case1(), "3^x1 < 5^y1")?;
            q(3.into(), pow_u(5, e.y1))
        }
        GammaId::Gamma22 => {
            require(!case1(), "3^x1 > 5^y1")?;
            q(3.into(), pow_u(3, e.x1))
        }
        GammaId::Gamma31 => {
            require(case1(), "3^x1 < 5^y1")?;
            q(3.into(), pow_u(5, e.y2))
        }
        GammaId::Gamma32 => {
            require(!case1(), "3^x1 > 5^y1")?;
            q(3.into(), pow_u(3, e.x2))
        }
        GammaId::Gamma6 => q(2.into(), pow_u(5, e.y1)),
        GammaId::Gamma7 => q(5.into(), pow_u(5, e.y2)),
        GammaId::GammaY1First => q(6.into(), pow_u(3, e.x1)),
        GammaId::GammaY1Second => q(3.into(), pow_u(3, e.x2)),
    };
    Ok(bound)
}

/// `alpha * t < beta0 + sum_j beta_j (1 + log t)^k_j`.
#[derive(Debug, Clone)]
pub struct PolylogInequality {
    pub alpha: RigorousReal,
    pub beta0: RigorousReal,
    pub terms: Vec<LogPowerBound>,
}

pub const SOLVE_CEILING_EXP: u32 = 100;

impl PolylogInequality {
    fn slack(&self, t: &BigInt, ctx: &PrecisionContext) -> Result<(RigorousReal, RigorousReal)> {
        let t_ball = RigorousReal::from_int(t.clone(), ctx);
        let one = RigorousReal::from_int(1, ctx);
        let log_t = if t <= &BigInt::one() {
            RigorousReal::zero(ctx)
        } else {
            log_of_int(t, ctx)?
        };
        let w = &one + &log_t;
        let mut rhs = self.beta0.clone();
        // g(t) = sum beta_j k_j w^(k_j - 1) / t, the derivative of the rhs
        let mut slope = RigorousReal::zero(ctx);
        for term in &self.terms {
            rhs = rhs + term.eval(&w);
            if term.power > 0 {
                let k = RigorousReal::from_int(term.power, ctx);
                slope = slope + &term.coeff * &k * w.pow(term.power - 1);
            }
        }
        let slope = slope.checked_div(&t_ball)?;
        let f = &self.alpha * &t_ball - rhs;
        let f_prime = &self.alpha - &slope;
        Ok((f, f_prime))
    }

    /// True when the inequality provably fails at every real `t' >= t`.
    pub fn fails_from(&self, t: &BigInt, ctx: &PrecisionContext) -> Result<bool> {
        if t < &BigInt::one() {
            return Ok(false);
        }
        // beyond log t >= k_max - 2 each term's slope decreases in t, so a
        // positive derivative at t persists
        let k_max = self.terms.iter().map(|t| t.power).max().unwrap_or(0);
        if k_max >= 3 {
            let log_t = if t <= &BigInt::one() {
                RigorousReal::zero(ctx)
            } else {
                log_of_int(t, ctx)?
            };
            if !log_t.definitely_ge(&RigorousReal::from_int(k_max - 2, ctx)) {
                return Ok(false);
            }
        }
        let (f, f_prime) = self.slack(t, ctx)?;
        Ok(f.definitely_ge(&RigorousReal::zero(ctx)) && f_prime.is_positive())
    }

    /// True when the inequality provably holds at `t`.
    pub fn holds_at(&self, t: &BigInt, ctx: &PrecisionContext) -> Result<bool> {
        let (f, _) = self.slack(t, ctx)?;
        Ok(f.is_negative())
    }
}

/// Least integer `T >= 1` (found by bisection) such that the inequality
/// fails for all real `t >= T`.
pub fn solve_log_inequality(ineq: &PolylogInequality, ctx: &PrecisionContext) -> Result<BigInt> {
    if !ineq.alpha.is_positive() {
        return Err(Error::precondition("leading coefficient must be positive"));
    }
    let ceiling: BigInt = Pow::pow(BigInt::from(10), SOLVE_CEILING_EXP);
    if !ineq.fails_from(&ceiling, ctx)? {
        return Err(Error::Unbounded {
            ceiling_exp: SOLVE_CEILING_EXP,
        });
    }
    let mut lo = BigInt::zero();
    let mut hi = ceiling;
    if ineq.fails_from(&BigInt::one(), ctx)? {
        return Ok(BigInt::one());
    }
    lo += 1;
    // invariant: fails_from(hi) and !fails_from(lo)
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) >> 1usize;
        if ineq.fails_from(&mid, ctx)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Shape `c / B^m` of a closed-form upper bound on `|Gamma|`.
#[derive(Debug, Clone)]
pub struct ExpShape {
    pub numerator: BigRational,
    pub base: BigInt,
}

impl ExpShape {
    pub fn new(numerator: BigRational, base: u64) -> Self {
        Self {
            numerator,
            base: BigInt::from(base),
        }
    }
}

/// From `log|Gamma| > -L` and `|Gamma| < c / B^m` conclude
/// `m < (L + log c) / log B`.
pub fn derive_min_bound(
    matveev: &LogPowerBound,
    shape: &ExpShape,
    ctx: &PrecisionContext,
) -> Result<LogPowerBound> {
    if !shape.numerator.is_positive() {
        return Err(Error::domain("bound numerator must be positive"));
    }
    let log_c = log_of_rational(&shape.numerator, ctx)?;
    let log_c = if matveev.power > 0 && log_c.is_negative() {
        // dropping a negative constant keeps the bound valid for Z >= 1
        RigorousReal::zero(ctx)
    } else if matveev.power > 0 {
        log_c.max(&RigorousReal::zero(ctx))
    } else {
        log_c
    };
    let log_b = log_of_int(&shape.base, ctx)?;
    let coeff = (&matveev.coeff + &log_c).checked_div(&log_b)?;
    Ok(LogPowerBound::new(coeff, matveev.power))
}

/// A recorded upper bound.
#[derive(Debug, Clone)]
pub enum LedgerValue {
    /// Inclusive integer maximum.
    Integer(BigInt),
    /// Real upper bound (strict).
    Real(RigorousReal),
    /// `coeff * (1 + log var)^power`.
    LogPower { bound: LogPowerBound, variable: String },
}

impl LedgerValue {
    fn upper(&self) -> Option<BigRational> {
        match self {
            LedgerValue::Integer(n) => Some(BigRational::from_integer(n.clone())),
            LedgerValue::Real(r) => Some(r.hi()),
            LedgerValue::LogPower { .. } => None,
        }
    }

    pub fn render(&self) -> String {
        match self {
            LedgerValue::Integer(n) => n.to_string(),
            LedgerValue::Real(r) => format!("{:.6e}", r.hi_f64()),
            LedgerValue::LogPower { bound, variable } => match bound.power {
                0 => format!("{:.4e}", bound.coeff.hi_f64()),
                1 => format!("{:.4e}*(1+log {variable})", bound.coeff.hi_f64()),
                p => format!("{:.4e}*(1+log {variable})^{p}", bound.coeff.hi_f64()),
            },
        }
    }
}

#[derive(Debug, Clone)]
pub struct LedgerEntry {
    pub value: LedgerValue,
    pub provenance: String,
}

/// Serializable view of a ledger entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerRecord {
    pub value: String,
    pub provenance: String,
}

/// Proved upper bounds keyed by symbol, each with the stage that set it.
/// Numeric bounds may only tighten.
#[derive(Debug, Clone, Default)]
pub struct BoundLedger {
    entries: BTreeMap<String, LedgerEntry>,
}

impl BoundLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, symbol: &str, value: LedgerValue, provenance: &str) -> Result<()> {
        if let Some(old) = self.entries.get(symbol) {
            if let (Some(o), Some(n)) = (old.value.upper(), value.upper()) {
                if n > o {
                    return Err(Error::LedgerLoosened {
                        symbol: symbol.to_string(),
                        old: old.value.render(),
                        new: value.render(),
                    });
                }
            }
        }
        self.entries.insert(
            symbol.to_string(),
            LedgerEntry {
                value,
                provenance: provenance.to_string(),
            },
        );
        Ok(())
    }

    pub fn record_int(&mut self, symbol: &str, value: impl Into<BigInt>, provenance: &str) -> Result<()> {
        self.record(symbol, LedgerValue::Integer(value.into()), provenance)
    }

    pub fn get(&self, symbol: &str) -> Option<&LedgerEntry> {
        self.entries.get(symbol)
    }

    pub fn integer(&self, symbol: &str) -> Option<&BigInt> {
        match self.entries.get(symbol).map(|e| &e.value) {
            Some(LedgerValue::Integer(n)) => Some(n),
            _ => None,
        }
    }

    pub fn real(&self, symbol: &str) -> Option<&RigorousReal> {
        match self.entries.get(symbol).map(|e| &e.value) {
            Some(LedgerValue::Real(r)) => Some(r),
            _ => None,
        }
    }

    pub fn log_power(&self, symbol: &str) -> Option<&LogPowerBound> {
        match self.entries.get(symbol).map(|e| &e.value) {
            Some(LedgerValue::LogPower { bound, .. }) => Some(bound),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn records(&self) -> BTreeMap<String, LedgerRecord> {
        self.entries
            .iter()
            .map(|(k, e)| {
                (
                    k.clone(),
                    LedgerRecord {
                        value: e.value.render(),
                        provenance: e.provenance.clone(),
                    },
                )
            })
            .collect()
    }
}
