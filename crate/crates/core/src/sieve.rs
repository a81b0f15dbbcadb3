//! Modular elimination of exponent regions via periodicity of powers.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Exponent of the unit group of `Z/mZ`.
pub fn carmichael(m: u64) -> u64 {
    let mut n = m;
    let mut out = 1u64;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut k = 0u32;
            while n % p == 0 {
                n /= p;
                k += 1;
            }
            let part = if p == 2 {
                match k {
                    1 => 1,
                    2 => 2,
                    _ => 1 << (k - 2),
                }
            } else {
                p.pow(k - 1) * (p - 1)
            };
            out = out.lcm(&part);
        }
        p += 1;
    }
    if n > 1 {
        out = out.lcm(&(n - 1).max(1));
    }
    out
}

/// Minimal `(s, p)` with `base^(x+p) = base^x (mod m)` for all `x >= s`.
pub fn power_period(base: u64, m: u64) -> Result<(u64, u64)> {
    if m < 2 || base < 2 {
        return Err(Error::domain("power_period requires m >= 2 and base >= 2"));
    }
    let mut seen = HashMap::new();
    let mut v = 1 % m;
    let mut x = 0u64;
    loop {
        if let Some(&first) = seen.get(&v) {
            return Ok((first, x - first));
        }
        seen.insert(v, x);
        v = ((v as u128 * base as u128) % m as u128) as u64;
        x += 1;
    }
}

pub fn pow_mod(base: u64, exp: u64, m: u64) -> u64 {
    let (mut b, mut e, mut r) = (base as u128 % m as u128, exp, 1u128 % m as u128);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m as u128;
        }
        b = b * b % m as u128;
        e >>= 1;
    }
    r as u64
}

/// One exponent variable `x >= lower` of the base `base`.
#[derive(Debug, Clone)]
pub struct SieveVariable {
    pub name: String,
    pub base: u64,
    pub lower: u64,
    /// Drop exponents divisible by this value.
    pub exclude_multiples_of: Option<u64>,
}

impl SieveVariable {
    pub fn new(name: &str, base: u64, lower: u64) -> Self {
        Self {
            name: name.into(),
            base,
            lower,
            exclude_multiples_of: None,
        }
    }

    pub fn excluding_multiples_of(mut self, d: u64) -> Self {
        self.exclude_multiples_of = Some(d);
        self
    }
}

/// Residue of the expression, given `base_i^{x_i} mod m` for each variable.
pub type ResidueFn = Arc<dyn Fn(&[u64], u64) -> u64 + Send + Sync>;

#[derive(Clone)]
pub struct SieveSpec {
    pub modulus: u64,
    pub variables: Vec<SieveVariable>,
    pub expression: ResidueFn,
    periods: Vec<(u64, u64)>,
}

impl fmt::Debug for SieveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SieveSpec")
            .field("modulus", &self.modulus)
            .field("variables", &self.variables)
            .field("periods", &self.periods)
            .finish()
    }
}

impl SieveSpec {
    pub fn new(modulus: u64, variables: Vec<SieveVariable>, expression: ResidueFn) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::domain("modulus must be positive"));
        }
        if variables.is_empty() {
            return Err(Error::domain("sieve needs at least one variable"));
        }
        let periods = variables
            .iter()
            .map(|v| {
                if modulus == 1 {
                    Ok((0, 1))
                } else {
                    power_period(v.base, modulus)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            modulus,
            variables,
            expression,
            periods,
        })
    }

    pub fn periods(&self) -> &[(u64, u64)] {
        &self.periods
    }

    /// Exponents below this are their own class; above it they repeat.
    fn start(&self, i: usize) -> u64 {
        self.variables[i].lower.max(self.periods[i].0)
    }

    /// Grid window for variable `i`.
    pub fn window(&self, i: usize) -> std::ops::RangeInclusive<u64> {
        self.variables[i].lower..=self.start(i) + self.periods[i].1 - 1
    }

    /// The grid exponent standing for `x`.
    pub fn representative(&self, i: usize, x: u64) -> u64 {
        let s = self.start(i);
        if x < s {
            x
        } else {
            s + (x - s) % self.periods[i].1
        }
    }

    /// A grid exponent is dropped only if every exponent it stands for is.
    fn filtered_out(&self, i: usize, r: u64) -> bool {
        match self.variables[i].exclude_multiples_of {
            None => false,
            Some(d) => {
                let repeats = r >= self.start(i);
                r % d == 0 && (!repeats || self.periods[i].1 % d == 0)
            }
        }
    }

    pub fn residue(&self, exps: &[u64]) -> u64 {
        let powers: Vec<u64> = exps
            .iter()
            .zip(&self.variables)
            .map(|(&x, v)| pow_mod(v.base, x, self.modulus))
            .collect();
        (self.expression)(&powers, self.modulus) % self.modulus
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SieveResult {
    pub survivors: Vec<Vec<u64>>,
    pub grid_size: u64,
}

impl SieveResult {
    pub fn eliminated(&self) -> bool {
        self.survivors.is_empty()
    }
}

fn cartesian(windows: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for w in windows {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                w.iter().map(move |&x| {
                    let mut t = prefix.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

/// Every grid tuple at which the expression vanishes mod `m`.
pub fn sieve_case(spec: &SieveSpec) -> SieveResult {
    let windows: Vec<Vec<u64>> = (0..spec.variables.len())
        .map(|i| spec.window(i).filter(|&r| !spec.filtered_out(i, r)).collect())
        .collect();
    let grid = cartesian(&windows);
    let grid_size = grid.len() as u64;
    let mut survivors: Vec<Vec<u64>> = grid
        .into_par_iter()
        .filter(|t| spec.residue(t) == 0)
        .collect();
    survivors.sort();
    SieveResult {
        survivors,
        grid_size,
    }
}
