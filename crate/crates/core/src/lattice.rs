//! Integral LLL reduction and lattice lower bounds for linear forms in
//! logarithms.
//!
//! Reduction uses the all-integer variant (integer subdeterminants `d_i`
//! and scaled coefficients `lambda_ij`), so no floating point enters; the
//! result is re-checked with exact rational Gram-Schmidt before use.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

use crate::error::{Error, Result};
use crate::numerics::{log_of_int, log_of_rational, precision_error, with_precision_retry, PrecisionContext, RigorousReal};

pub type Vector = Vec<BigInt>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerLattice {
    basis: Vec<Vector>,
}

impl IntegerLattice {
    pub fn new(basis: Vec<Vector>) -> Result<Self> {
        let n = basis.len();
        if n == 0 || basis.iter().any(|v| v.len() != n) {
            return Err(Error::domain("lattice basis must be a square matrix"));
        }
        let lat = Self { basis };
        if lat.determinant().is_zero() {
            return Err(Error::domain("lattice basis vectors are linearly dependent"));
        }
        Ok(lat)
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn determinant(&self) -> BigInt {
        determinant(&self.basis)
    }
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Fraction-free (Bareiss) determinant.
pub fn determinant(rows: &[Vector]) -> BigInt {
    let n = rows.len();
    let mut m: Vec<Vector> = rows.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Exact Gram-Schmidt data: `mu[i][j]` for `j < i` and `|b*_i|^2`.
#[derive(Debug, Clone)]
pub struct GramSchmidt {
    pub mu: Vec<Vec<BigRational>>,
    pub norms_sq: Vec<BigRational>,
}

pub fn gram_schmidt(basis: &[Vector]) -> GramSchmidt {
    let n = basis.len();
    let mut star: Vec<Vec<BigRational>> = Vec::with_capacity(n);
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    let mut norms_sq = Vec::with_capacity(n);
    for i in 0..n {
        let bi: Vec<BigRational> = basis[i].iter().cloned().map(BigRational::from_integer).collect();
        let mut v = bi.clone();
        for j in 0..i {
            if norms_sq[j] == BigRational::zero() {
                continue;
            }
            let m: BigRational = dot_q(&bi, &star[j]) / &norms_sq[j];
            for (vk, sk) in v.iter_mut().zip(&star[j]) {
                *vk -= &m * sk;
            }
            mu[i][j] = m;
        }
        norms_sq.push(dot_q(&v, &v));
        star.push(v);
    }
    GramSchmidt { mu, norms_sq }
}

fn dot_q(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// An LLL-reduced basis (`delta = 3/4`) with its exact Gram-Schmidt norms.
#[derive(Debug, Clone)]
pub struct ReducedBasis {
    basis: Vec<Vector>,
    gs: GramSchmidt,
}

impl ReducedBasis {
    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn gram_schmidt(&self) -> &GramSchmidt {
        &self.gs
    }

    pub fn gs_norms(&self, ctx: &PrecisionContext) -> Result<Vec<RigorousReal>> {
        self.gs
            .norms_sq
            .iter()
            .map(|q| RigorousReal::exact(q.clone(), ctx.working()).sqrt())
            .collect()
    }

    /// `min_i |b*_i|^2`, a lower bound for the squared length of every
    /// nonzero lattice vector.
    pub fn min_gs_norm_sq(&self) -> BigRational {
        self.gs.norms_sq.iter().min().cloned().expect("nonempty basis")
    }

    /// Size reduction `|mu_ij| <= 1/2` and the Lovász condition with
    /// `delta = 3/4`, checked in exact rationals.
    pub fn is_reduced(&self) -> bool {
        is_lll_reduced(&self.gs)
    }
}

fn is_lll_reduced(gs: &GramSchmidt) -> bool {
    let half = BigRational::new(1.into(), 2.into());
    let delta = BigRational::new(3.into(), 4.into());
    let n = gs.norms_sq.len();
    for i in 0..n {
        for j in 0..i {
            if gs.mu[i][j].abs() > half {
                return false;
            }
        }
        if i > 0 {
            let lhs = &gs.norms_sq[i];
            let rhs = (&delta - &gs.mu[i][i - 1] * &gs.mu[i][i - 1]) * &gs.norms_sq[i - 1];
            if *lhs < rhs {
                return false;
            }
        }
    }
    true
}

struct IntegralLll {
    b: Vec<Vector>,
    d: Vec<BigInt>,
    lam: Vec<Vec<BigInt>>,
}

impl IntegralLll {
    fn round_div(num: &BigInt, den: &BigInt) -> BigInt {
        // nearest integer to num/den for den > 0
        (num * BigInt::from(2) + den).div_floor(&(den * BigInt::from(2)))
    }

    fn red(&mut self, k: usize, l: usize) {
        if (&self.lam[k][l] * BigInt::from(2)).abs() > self.d[l] {
            let q = Self::round_div(&self.lam[k][l], &self.d[l]);
            let bl = self.b[l].clone();
            for (x, y) in self.b[k].iter_mut().zip(&bl) {
                *x -= &q * y;
            }
            let dl = self.d[l].clone();
            self.lam[k][l] -= &q * dl;
            for i in 1..l {
                let t = &q * &self.lam[l][i];
                self.lam[k][i] -= t;
            }
        }
    }

    fn swap(&mut self, k: usize, kmax: usize) {
        self.b.swap(k, k - 1);
        for j in 1..k - 1 {
            let t = self.lam[k][j].clone();
            self.lam[k][j] = self.lam[k - 1][j].clone();
            self.lam[k - 1][j] = t;
        }
        let l = self.lam[k][k - 1].clone();
        let big_b = (&self.d[k - 2] * &self.d[k] + &l * &l) / &self.d[k - 1];
        for i in k + 1..=kmax {
            let t = self.lam[i][k].clone();
            self.lam[i][k] = (&self.d[k] * &self.lam[i][k - 1] - &l * &t) / &self.d[k - 1];
            self.lam[i][k - 1] = (&big_b * &t + &l * &self.lam[i][k]) / &self.d[k];
        }
        self.d[k - 1] = big_b;
    }

    fn run(basis: &[Vector]) -> Result<Vec<Vector>> {
        let n = basis.len();
        let dim = basis[0].len();
        let mut b = vec![vec![BigInt::zero(); dim]];
        b.extend(basis.iter().cloned());
        let mut s = IntegralLll {
            b,
            d: vec![BigInt::zero(); n + 1],
            lam: vec![vec![BigInt::zero(); n + 1]; n + 1],
        };
        s.d[0] = BigInt::one();
        s.d[1] = dot(&s.b[1], &s.b[1]);
        if s.d[1].is_zero() {
            return Err(Error::domain("zero basis vector"));
        }
        let mut k = 2;
        let mut kmax = 1;
        while k <= n {
            if k > kmax {
                kmax = k;
                for j in 1..=k {
                    let mut u = dot(&s.b[k], &s.b[j]);
                    for i in 1..j {
                        u = (&s.d[i] * &u - &s.lam[k][i] * &s.lam[j][i]) / &s.d[i - 1];
                    }
                    if j < k {
                        s.lam[k][j] = u;
                    } else {
                        if u.is_zero() {
                            return Err(Error::domain("lattice basis vectors are linearly dependent"));
                        }
                        s.d[k] = u;
                    }
                }
            }
            s.red(k, k - 1);
            let lhs = BigInt::from(4) * &s.d[k] * &s.d[k - 2];
            let rhs = BigInt::from(3) * &s.d[k - 1] * &s.d[k - 1]
                - BigInt::from(4) * &s.lam[k][k - 1] * &s.lam[k][k - 1];
            if lhs < rhs {
                s.swap(k, kmax);
                k = (k - 1).max(2);
                continue;
            }
            for l in (1..k - 1).rev() {
                s.red(k, l);
            }
            k += 1;
        }
        s.b.remove(0);
        Ok(s.b)
    }
}

pub fn lll_reduce(lat: &IntegerLattice) -> Result<ReducedBasis> {
    let basis = IntegralLll::run(lat.basis())?;
    let gs = gram_schmidt(&basis);
    if !is_lll_reduced(&gs) {
        return Err(Error::domain("LLL output failed the exact reducedness check"));
    }
    Ok(ReducedBasis { basis, gs })
}

/// Lower-bound query for `|sum x_i log alpha_i + log c|` over every integer
/// vector with `|x_i| <= X_i` (excluding the zero vector when there is no
/// constant term).
#[derive(Debug, Clone)]
pub struct FormBoundQuery {
    pub bases: Vec<BigInt>,
    pub constant: Option<BigRational>,
    pub bounds: Vec<BigInt>,
    /// Scaling constant `C`; chosen automatically when absent.
    pub scaling: Option<BigInt>,
}

impl FormBoundQuery {
    pub fn new(bases: Vec<BigInt>, constant: Option<BigRational>, bounds: Vec<BigInt>) -> Result<Self> {
        if bases.is_empty() || bases.len() != bounds.len() {
            return Err(Error::domain("one coefficient bound per base is required"));
        }
        if bounds.iter().any(|x| x < &BigInt::one()) {
            return Err(Error::domain("coefficient bounds must be at least 1"));
        }
        if bases.iter().any(|b| b < &BigInt::from(2)) {
            return Err(Error::domain("bases must be at least 2"));
        }
        if let Some(c) = &constant {
            if !c.is_positive() {
                return Err(Error::domain("constant must be a positive rational"));
            }
        }
        Ok(Self {
            bases,
            constant,
            bounds,
            scaling: None,
        })
    }

    pub fn with_scaling(mut self, c: BigInt) -> Self {
        self.scaling = Some(c);
        self
    }
}

/// Outcome of a successful lattice bound.
#[derive(Debug, Clone)]
pub struct LatticeBound {
    pub lower: RigorousReal,
    pub scaling: BigInt,
    pub reduced: ReducedBasis,
}

fn pow10(e: u32) -> BigInt {
    Pow::pow(BigInt::from(10), e)
}

fn decimal_exponent_ceil(v: &BigInt) -> u32 {
    let mut e = 0u32;
    let mut p = BigInt::one();
    while &p < v {
        p *= 10;
        e += 1;
    }
    e
}

/// Initial `C`: one decimal order above `(n * max X_i)^n`.
pub fn choose_scaling(q: &FormBoundQuery) -> BigInt {
    let n = q.bases.len() as u32;
    let x = q.bounds.iter().max().cloned().unwrap_or_else(BigInt::one);
    let v: BigInt = Pow::pow(BigInt::from(n) * x, n);
    pow10(decimal_exponent_ceil(&v) + 1)
}

fn nearest_distance(q: &BigRational) -> BigRational {
    let half = BigRational::new(1.into(), 2.into());
    let n = (q + &half).floor();
    (q - n).abs()
}

/// Solves `M sigma = y` exactly, where the columns of `M` are `basis`.
fn solve_coordinates(basis: &[Vector], y: &[BigInt]) -> Option<Vec<BigRational>> {
    let n = basis.len();
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|row| {
            let mut r: Vec<BigRational> = (0..n)
                .map(|col| BigRational::from_integer(basis[col][row].clone()))
                .collect();
            r.push(BigRational::from_integer(y[row].clone()));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let p = a[col][col].clone();
        for v in a[col].iter_mut() {
            *v /= &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (v, pv) in a[r].iter_mut().zip(&pivot_row) {
                    *v -= &f * pv;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n].clone()).collect())
}

fn round_scaled(c: &BigInt, value: &RigorousReal, ctx: &PrecisionContext) -> Result<(BigInt, BigRational)> {
    let scaled = value.mul_rational(&BigRational::from_integer(c.clone()));
    let phi = (scaled.center() + BigRational::new(1.into(), 2.into())).floor().to_integer();
    let err = (scaled.center() - BigRational::from_integer(phi.clone())).abs() + scaled.radius();
    if err > BigRational::one() {
        return Err(precision_error(
            ctx,
            format!("rounding a scaled logarithm (C ~ 10^{})", c.to_string().len() - 1),
        ));
    }
    Ok((phi, err))
}

fn bound_at_scaling(q: &FormBoundQuery, c: &BigInt, ctx: &PrecisionContext) -> Result<LatticeBound> {
    let n = q.bases.len();
    // the largest box side goes last, where it does not enter S
    let mut order: Vec<usize> = (0..n).collect();
    let last = (0..n).max_by_key(|&i| q.bounds[i].clone()).unwrap_or(0);
    order.retain(|&i| i != last);
    order.push(last);

    let mut phis = Vec::with_capacity(n);
    let mut t = BigRational::zero();
    for &i in &order {
        let (phi, err) = round_scaled(c, &log_of_int(&q.bases[i], ctx)?, ctx)?;
        t += BigRational::from_integer(q.bounds[i].clone()) * err;
        phis.push(phi);
    }
    if phis[n - 1].is_zero() {
        return Err(Error::TooSmallScaling { scaling: c.to_string() });
    }
    let phi0 = match &q.constant {
        Some(k) if !k.is_one() => {
            let (phi, err) = round_scaled(c, &log_of_rational(k, ctx)?, ctx)?;
            t += err;
            Some(phi)
        }
        _ => None,
    };

    let basis: Vec<Vector> = (0..n)
        .map(|i| {
            let mut v = vec![BigInt::zero(); n];
            if i < n - 1 {
                v[i] = BigInt::one();
            }
            v[n - 1] = phis[i].clone();
            v
        })
        .collect();
    let reduced = lll_reduce(&IntegerLattice::new(basis)?)?;
    let gs = reduced.gram_schmidt();

    let d_sq = match &phi0 {
        None => reduced.min_gs_norm_sq(),
        Some(phi0) => {
            let mut y = vec![BigInt::zero(); n];
            y[n - 1] = -phi0;
            let sigma = solve_coordinates(reduced.basis(), &y)
                .ok_or_else(|| Error::domain("singular reduced basis"))?;
            let Some(i0) = (0..n).rev().find(|&i| !sigma[i].is_integer()) else {
                // target lies in the lattice; a different C moves it off
                return Err(Error::TooSmallScaling { scaling: c.to_string() });
            };
            let dist = nearest_distance(&sigma[i0]);
            let mut d_sq = &dist * &dist * &gs.norms_sq[i0];
            for j in i0 + 1..n {
                d_sq = d_sq.min(gs.norms_sq[j].clone());
            }
            d_sq
        }
    };
    let s: BigRational = order[..n - 1]
        .iter()
        .map(|&i| BigRational::from_integer(&q.bounds[i] * &q.bounds[i]))
        .sum();
    let gap = d_sq - s;
    if !gap.is_positive() {
        return Err(Error::TooSmallScaling { scaling: c.to_string() });
    }
    let root = BigRational::from_integer(gap.floor().to_integer().sqrt());
    if root <= t {
        return Err(Error::TooSmallScaling { scaling: c.to_string() });
    }
    let lower = RigorousReal::exact((root - t) / BigRational::from_integer(c.clone()), ctx.working());
    Ok(LatticeBound {
        lower,
        scaling: c.clone(),
        reduced,
    })
}

const SCALING_RETRIES: u32 = 3;

/// A positive `L` with `|form| > L` for every admissible coefficient vector.
pub fn linear_form_lower_bound(q: &FormBoundQuery, ctx: &PrecisionContext) -> Result<LatticeBound> {
    let mut c = q.scaling.clone().unwrap_or_else(|| choose_scaling(q));
    let mut attempt = 0;
    loop {
        match with_precision_retry(ctx, |pc| bound_at_scaling(q, &c, pc)) {
            Err(Error::TooSmallScaling { .. }) if attempt < SCALING_RETRIES => {
                let e = decimal_exponent_ceil(&c).max(1);
                c = pow10(2 * e);
                attempt += 1;
            }
            other => return other,
        }
    }
}
