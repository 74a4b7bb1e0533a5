use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{stop_on_overflow, tail_precision, Capped};
use crate::contfrac::{ContinuedFraction, Tail};
use crate::error::{Error, Result};
use crate::numerics::{
    pow_capped, rat_from_uint, serde_fmt, BigRat, MagnitudeCap, RationalInterval,
};

/// `T_0(k) = 1`, `T_{n+1}(k) = k^(T_n(k))`, so `T_1(k) = k`.
pub fn tower(k: &BigUint, n: u32, cap: MagnitudeCap) -> Result<BigUint> {
    if k.is_zero() {
        return Err(Error::InvalidArgument("tower base must be >= 1".into()));
    }
    let mut t = BigUint::one();
    for _ in 0..n {
        t = pow_capped(k, &t, cap)?;
    }
    Ok(t)
}

/// Partial sums of `sum 1/b_n` with `b_1 = 1`, `b_n = (2^n)^(b_{n-1})`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuperLiouville {
    #[serde(with = "serde_fmt::uint_vec_str")]
    pub denominators: Vec<BigUint>,
    #[serde(with = "serde_fmt::rat_vec_str")]
    pub partial_sums: Vec<BigRat>,
}

pub fn super_liouville_sum(n_terms: usize, cap: MagnitudeCap) -> Result<Capped<SuperLiouville>> {
    let mut overflow = None;
    let mut denominators: Vec<BigUint> = Vec::new();
    let mut partial_sums: Vec<BigRat> = Vec::new();
    for n in 1..=n_terms {
        let b = match denominators.last() {
            None => BigUint::one(),
            Some(prev) => {
                let base = BigUint::one() << n;
                match stop_on_overflow(pow_capped(&base, prev, cap), &mut overflow)? {
                    Some(b) => b,
                    None => break,
                }
            }
        };
        let s = partial_sums.last().cloned().unwrap_or_default() + rat_from_uint(&b).recip();
        denominators.push(b);
        partial_sums.push(s);
    }
    Ok(Capped {
        value: SuperLiouville {
            denominators,
            partial_sums,
        },
        overflow,
    })
}

impl SuperLiouville {
    /// Whether every partial sum has exactly `b_n` as its reduced denominator.
    pub fn denominators_match(&self) -> bool {
        self.partial_sums
            .iter()
            .zip(&self.denominators)
            .all(|(s, b)| s.denom() == &BigInt::from(b.clone()))
    }

    /// Bracket of the full sum from the last partial sum. The tail after
    /// `b_N` is below `2/b_{N+1}`; when `b_{N+1}` is too large to form, a
    /// dyadic bound `2^-K` with `K` limited by the tail precision is used.
    pub fn value_bracket(&self, cap: MagnitudeCap) -> Result<RationalInterval> {
        let (Some(s), Some(b)) = (self.partial_sums.last(), self.denominators.last()) else {
            return Err(Error::InsufficientTerms {
                needed: 1,
                available: 0,
            });
        };
        let n = self.denominators.len();
        let base = BigUint::one() << (n + 1);
        if let Ok(next) = pow_capped(&base, b, cap) {
            let next = rat_from_uint(&next).recip();
            let two = BigRat::from_integer(2.into());
            return RationalInterval::new(s + &next, s + next * two);
        }
        // 2/b_{N+1} = 2^(1 - (N+1) b_N)
        let exact_k = BigUint::from(n + 1) * b - 1u32;
        let k = tail_precision(b.bits(), cap).min(u64::try_from(&exact_k).unwrap_or(u64::MAX));
        let width = BigRat::new(BigInt::one(), BigInt::one() << k);
        RationalInterval::new(s.clone(), s + width)
    }
}

/// The continued-fraction families with tower-growth partial quotients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    L1,
    L2,
    L3,
    L4,
    S1,
    S2,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::L1,
        Family::L2,
        Family::L3,
        Family::L4,
        Family::S1,
        Family::S2,
    ];

    /// `b_n` given `b_{n-1}` (absent for `n = 1`).
    fn quotient(self, n: u32, prev: Option<&BigUint>, cap: MagnitudeCap) -> Result<BigUint> {
        let two = BigUint::from(2u32);
        let nn = BigUint::from(n);
        match self {
            Family::L1 => {
                let fact: BigUint = (1..=n).map(BigUint::from).product();
                pow_capped(&two, &fact, cap)
            }
            Family::L2 => match prev {
                None => Ok(BigUint::one()),
                Some(p) => pow_capped(&(BigUint::one() << n), p, cap),
            },
            Family::L3 => tower(&two, n, cap),
            Family::L4 => match prev {
                None => Ok(BigUint::one()),
                Some(p) => pow_capped(&nn, p, cap),
            },
            Family::S1 => tower(&nn, n, cap),
            Family::S2 => tower(&(BigUint::one() << (n - 1)), n, cap),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown family {s:?}; expected L1..L4, S1, S2")))
    }
}

/// `[0; b_1, b_2, ...]` for one of the families, stopping at the cap.
pub fn example_family(
    family: Family,
    n_terms: usize,
    cap: MagnitudeCap,
) -> Result<Capped<ContinuedFraction>> {
    let mut overflow = None;
    let mut quotients: Vec<BigUint> = Vec::new();
    for n in 1..=n_terms {
        let n = u32::try_from(n).map_err(|_| Error::InvalidArgument("too many terms".into()))?;
        let b = family.quotient(n, quotients.last(), cap);
        match stop_on_overflow(b, &mut overflow)? {
            Some(b) => quotients.push(b),
            None => break,
        }
    }
    let cf = ContinuedFraction::new(BigInt::zero(), quotients, Tail::Truncated)?;
    Ok(Capped {
        value: cf,
        overflow,
    })
}

/// `[1; 1, 1, ...]` with `n_terms` quotients after `b_0`.
pub fn golden_mean(n_terms: usize) -> ContinuedFraction {
    ContinuedFraction::new(
        BigInt::one(),
        vec![BigUint::one(); n_terms],
        Tail::Truncated,
    )
    .expect("valid quotients")
}

/// `[2; 1, 2, 1, 1, 4, 1, 1, 6, ...]`: `b_n = 2(n+1)/3` when `n = 2 mod 3`, else 1.
pub fn e_pattern(n_terms: usize) -> ContinuedFraction {
    let quotients = (1..=n_terms as u64)
        .map(|n| {
            if n % 3 == 2 {
                BigUint::from(2 * (n + 1) / 3)
            } else {
                BigUint::one()
            }
        })
        .collect();
    ContinuedFraction::new(BigInt::from(2), quotients, Tail::Truncated).expect("valid quotients")
}
