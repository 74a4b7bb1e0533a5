use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{cmp_rat, max_rat, min_rat, rat_to_string, serde_fmt, BigRat};
use crate::error::{Error, Result};

/// A closed interval `[lo, hi]` with exact rational endpoints.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawInterval")]
pub struct RationalInterval {
    #[serde(with = "serde_fmt::rat_str")]
    lo: BigRat,
    #[serde(with = "serde_fmt::rat_str")]
    hi: BigRat,
}

#[derive(Deserialize)]
struct RawInterval {
    #[serde(with = "serde_fmt::rat_str")]
    lo: BigRat,
    #[serde(with = "serde_fmt::rat_str")]
    hi: BigRat,
}

impl TryFrom<RawInterval> for RationalInterval {
    type Error = Error;

    fn try_from(raw: RawInterval) -> Result<Self> {
        RationalInterval::new(raw.lo, raw.hi)
    }
}

/// Position of an interval relative to a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IntervalOrdering {
    /// `hi < r`
    Less,
    /// `lo > r`
    Greater,
    Contains,
}

impl RationalInterval {
    pub fn new(lo: BigRat, hi: BigRat) -> Result<Self> {
        if cmp_rat(&lo, &hi) == Ordering::Greater {
            return Err(Error::InvalidArgument(format!(
                "interval endpoints out of order: {} > {}",
                rat_to_string(&lo),
                rat_to_string(&hi)
            )));
        }
        Ok(Self { lo, hi })
    }

    /// Builds the interval spanned by two points in either order.
    pub fn hull(a: BigRat, b: BigRat) -> Self {
        if cmp_rat(&a, &b) != Ordering::Greater {
            Self { lo: a, hi: b }
        } else {
            Self { lo: b, hi: a }
        }
    }

    pub fn point(r: BigRat) -> Self {
        Self {
            lo: r.clone(),
            hi: r,
        }
    }

    pub fn lo(&self) -> &BigRat {
        &self.lo
    }

    pub fn hi(&self) -> &BigRat {
        &self.hi
    }

    pub fn into_bounds(self) -> (BigRat, BigRat) {
        (self.lo, self.hi)
    }

    pub fn width(&self) -> BigRat {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRat {
        (&self.lo + &self.hi) / BigRat::from_integer(BigInt::from(2))
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, r: &BigRat) -> bool {
        cmp_rat(&self.lo, r) != Ordering::Greater && cmp_rat(r, &self.hi) != Ordering::Greater
    }

    pub fn contains_interval(&self, other: &RationalInterval) -> bool {
        cmp_rat(&self.lo, &other.lo) != Ordering::Greater
            && cmp_rat(&other.hi, &self.hi) != Ordering::Greater
    }

    pub fn intersect(&self, other: &RationalInterval) -> Option<RationalInterval> {
        let lo = max_rat(&self.lo, &other.lo).clone();
        let hi = min_rat(&self.hi, &other.hi).clone();
        (cmp_rat(&lo, &hi) != Ordering::Greater).then_some(RationalInterval { lo, hi })
    }

    /// Parses a decimal numeral and widens it by `extra_ulps + 1` units in the
    /// last written digit on each side.
    pub fn from_decimal(text: &str, extra_ulps: u64) -> Result<Self> {
        let t = text.trim();
        let bad = || Error::Parse(format!("not a decimal numeral: {text:?}"));
        let (neg, body) = match t.as_bytes().first() {
            Some(b'-') => (true, &t[1..]),
            Some(b'+') => (false, &t[1..]),
            _ => (false, t),
        };
        let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
        let all_digits = |s: &str| s.bytes().all(|b| b.is_ascii_digit());
        if int_part.is_empty() && frac_part.is_empty()
            || !all_digits(int_part)
            || !all_digits(frac_part)
        {
            return Err(bad());
        }
        let digits = format!("{int_part}{frac_part}");
        let mantissa: BigInt = digits.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac_part.len());
        let mut value = BigRat::new(mantissa, scale.clone());
        if neg {
            value = -value;
        }
        let ulp = BigRat::new(BigInt::from(extra_ulps) + 1, scale);
        Ok(Self {
            lo: &value - &ulp,
            hi: &value + &ulp,
        })
    }

    pub fn compare(&self, r: &BigRat) -> IntervalOrdering {
        if cmp_rat(&self.hi, r) == Ordering::Less {
            IntervalOrdering::Less
        } else if cmp_rat(&self.lo, r) == Ordering::Greater {
            IntervalOrdering::Greater
        } else {
            IntervalOrdering::Contains
        }
    }

    /// Certified comparison against another interval; `None` when they overlap.
    pub fn cmp_interval(&self, other: &RationalInterval) -> Option<Ordering> {
        if cmp_rat(&self.hi, &other.lo) == Ordering::Less {
            Some(Ordering::Less)
        } else if cmp_rat(&self.lo, &other.hi) == Ordering::Greater {
            Some(Ordering::Greater)
        } else if self.is_point() && other.is_point() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn add(&self, other: &RationalInterval) -> RationalInterval {
        RationalInterval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn sub(&self, other: &RationalInterval) -> RationalInterval {
        RationalInterval {
            lo: &self.lo - &other.hi,
            hi: &self.hi - &other.lo,
        }
    }

    pub fn shift(&self, r: &BigRat) -> RationalInterval {
        RationalInterval {
            lo: &self.lo + r,
            hi: &self.hi + r,
        }
    }

    pub fn scale(&self, r: &BigRat) -> RationalInterval {
        RationalInterval::hull(&self.lo * r, &self.hi * r)
    }

    pub fn neg(&self) -> RationalInterval {
        RationalInterval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    pub fn mul(&self, other: &RationalInterval) -> RationalInterval {
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = products
            .iter()
            .reduce(|a, b| min_rat(a, b))
            .cloned()
            .unwrap_or_default();
        let hi = products
            .iter()
            .reduce(|a, b| max_rat(a, b))
            .cloned()
            .unwrap_or_default();
        RationalInterval { lo, hi }
    }

    /// Fails when the divisor interval touches zero.
    pub fn div(&self, other: &RationalInterval) -> Result<RationalInterval> {
        if other.contains(&BigRat::zero()) {
            return Err(Error::IntervalTooWide(
                "divisor interval contains zero".to_string(),
            ));
        }
        let recip = RationalInterval {
            lo: other.hi.recip(),
            hi: other.lo.recip(),
        };
        Ok(self.mul(&recip))
    }

    /// Bracket of `|x - r|` over all `x` in the interval.
    pub fn distance_to(&self, r: &BigRat) -> RationalInterval {
        match self.compare(r) {
            IntervalOrdering::Less => RationalInterval {
                lo: r - &self.hi,
                hi: r - &self.lo,
            },
            IntervalOrdering::Greater => RationalInterval {
                lo: &self.lo - r,
                hi: &self.hi - r,
            },
            IntervalOrdering::Contains => RationalInterval {
                lo: BigRat::zero(),
                hi: max_rat(&(r - &self.lo), &(&self.hi - r)).clone(),
            },
        }
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }
}

impl fmt::Display for RationalInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            rat_to_string(&self.lo),
            rat_to_string(&self.hi)
        )
    }
}
