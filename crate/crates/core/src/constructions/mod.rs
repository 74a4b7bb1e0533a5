//! Generators for numbers with prescribed approximation behaviour.
//!
//! Tower-shaped sequences outgrow any fixed bit budget within a handful of
//! terms. Generators therefore return [`Capped`]: the terms that fit, plus
//! the overflow that stopped generation, if any.

mod jarnik;
mod sondow;
mod towers;

pub use jarnik::{jarnik_quotients, verify_jarnik_condition, JarnikCheck};
pub use sondow::{
    sondow_series_irrational, sondow_series_rational, BetaSpec, LemmaConditions, SondowSeries,
    StaircasePlan,
};
pub use towers::{
    e_pattern, example_family, golden_mean, super_liouville_sum, tower, Family, SuperLiouville,
};

use crate::error::{Error, Result};
use crate::numerics::MagnitudeCap;

/// Output of a generator that may stop early on the magnitude cap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Capped<T> {
    pub value: T,
    /// The overflow that ended generation before the requested length.
    pub overflow: Option<Error>,
}

impl<T> Capped<T> {
    pub fn complete(value: T) -> Self {
        Self {
            value,
            overflow: None,
        }
    }

    pub fn is_complete(&self) -> bool {
        self.overflow.is_none()
    }

    /// The value when every requested term was produced, else the overflow.
    pub fn into_result(self) -> Result<T> {
        match self.overflow {
            None => Ok(self.value),
            Some(e) => Err(e),
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Capped<U> {
        Capped {
            value: f(self.value),
            overflow: self.overflow,
        }
    }
}

/// Splits overflow from other failures: overflow ends generation, anything
/// else propagates.
fn stop_on_overflow<T>(r: Result<T>, overflow: &mut Option<Error>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(e @ Error::MagnitudeOverflow { .. }) => {
            *overflow = Some(e);
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

/// Bits of a dyadic tail bound `2^-K` used when the exact next term is too
/// large to form. Proportional to the size of the last computed term so that
/// brackets stay cheap to compute with; the result is always a valid bound.
pub(crate) fn tail_precision(last_term_bits: u64, cap: MagnitudeCap) -> u64 {
    (2 * last_term_bits + 64).max(256).min(cap.max_bits)
}
