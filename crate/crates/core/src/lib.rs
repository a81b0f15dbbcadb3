//! Baker-method machinery for exponential equations of the shape
//! `(a^x1 - 1)(a^x2 - 1) = (b^y1 - 1)(b^y2 - 1)`.
//!
//! The crate is organised bottom-up:
//!
//! * [`numerics`]: exact integers and rigorous (ball) reals.
//! * [`contfrac`]: certified continued fractions and convergents.
//! * [`linforms`]: linear forms in logarithms, Matveev-type lower bounds,
//!   linearisation and the polylog inequality solver.
//! * [`lattice`]: integral LLL and lattice lower bounds for linear forms.
//! * [`reduction`]: Baker-Davenport reduction and case families.
//! * [`sieve`]: Carmichael function, power periods and modular sieving.
//! * [`search`]: exact bounded enumeration.
//! * [`pipeline`]: the staged proof, bound ledger, cache and reports.

pub mod contfrac;
pub mod error;
pub mod lattice;
pub mod linforms;
pub mod numerics;
pub mod pipeline;
pub mod reduction;
pub mod search;
pub mod sieve;

pub use error::{Error, Result};
