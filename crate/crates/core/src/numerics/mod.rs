//! Exact integers and rigorous real arithmetic.
//!
//! Every logarithm, ratio and threshold in the pipeline is carried as a
//! [`RigorousReal`]: a ball `center ± radius` whose rational endpoints are
//! guaranteed to enclose the true value. Comparisons that cannot be decided
//! at the current precision report [`Comparison::Undecidable`] and callers
//! retry through [`with_precision_retry`].

mod log;
mod real;

pub use log::{ln2, log_of_int, log_of_rational, weil_height};
pub use real::{Comparison, RigorousReal};

pub use num_bigint::{BigInt, BigUint};
pub use num_rational::BigRational;

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

pub const DEFAULT_PRECISION: u32 = 512;
pub const DEFAULT_MAX_PRECISION: u32 = 16384;

/// Working precision in bits, and the ceiling for automatic doubling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrecisionContext {
    working: u32,
    max: u32,
}

impl Default for PrecisionContext {
    fn default() -> Self {
        Self {
            working: DEFAULT_PRECISION,
            max: DEFAULT_MAX_PRECISION,
        }
    }
}

impl PrecisionContext {
    pub fn new(working: u32, max: u32) -> Result<Self> {
        if working == 0 || max == 0 {
            return Err(Error::Config("precision must be positive".into()));
        }
        if working > max {
            return Err(Error::Config(format!(
                "working precision {working} exceeds retry cap {max}"
            )));
        }
        Ok(Self { working, max })
    }

    pub fn working(&self) -> u32 {
        self.working
    }

    pub fn max(&self) -> u32 {
        self.max
    }

    /// The next context in the retry ladder, or `None` once the cap is hit.
    pub fn doubled(&self) -> Option<Self> {
        if self.working >= self.max {
            None
        } else {
            Some(Self {
                working: (self.working.saturating_mul(2)).min(self.max),
                max: self.max,
            })
        }
    }
}

/// Runs `f` at the working precision and doubles it on
/// [`Error::PrecisionExhausted`] until the retry cap.
pub fn with_precision_retry<T>(
    ctx: &PrecisionContext,
    mut f: impl FnMut(&PrecisionContext) -> Result<T>,
) -> Result<T> {
    let mut current = *ctx;
    loop {
        match f(&current) {
            Err(e) if e.is_precision() => match current.doubled() {
                Some(next) => current = next,
                None => return Err(e),
            },
            other => return other,
        }
    }
}

pub(crate) fn precision_error(ctx: &PrecisionContext, what: impl Into<String>) -> Error {
    Error::PrecisionExhausted {
        bits: ctx.working(),
        what: what.into(),
    }
}
