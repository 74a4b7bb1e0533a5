use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{stop_on_overflow, Capped};
use crate::contfrac::{ContinuedFraction, Tail};
use crate::error::Result;
use crate::measures::OmegaSpec;
use crate::numerics::{rat_from_uint, BigRat, MagnitudeCap, RationalInterval};

/// Partial quotients `b_{n+1} = 1 + floor(1 / (omega(q_n) q_n^2))` from
/// `q_0 = 1`, `b_0 = 0`.
pub fn jarnik_quotients(
    omega: &OmegaSpec,
    n_terms: usize,
    cap: MagnitudeCap,
) -> Result<Capped<ContinuedFraction>> {
    // rejects Power(mu <= 2) before any work
    omega.jarnik_quotient(&BigUint::one(), cap)?;

    let mut overflow = None;
    let mut quotients = Vec::with_capacity(n_terms);
    let (mut q_prev, mut q) = (BigUint::zero(), BigUint::one());
    while quotients.len() < n_terms {
        let Some(b) = stop_on_overflow(omega.jarnik_quotient(&q, cap), &mut overflow)? else {
            break;
        };
        let next = &b * &q + &q_prev;
        if stop_on_overflow(cap.check(&next), &mut overflow)?.is_none() {
            break;
        }
        q_prev = std::mem::replace(&mut q, next);
        quotients.push(b);
    }
    let cf = ContinuedFraction::new(BigInt::zero(), quotients, Tail::Truncated)?;
    Ok(Capped {
        value: cf,
        overflow,
    })
}

/// `b_{n+1} omega(q_n) q_n^2` at one index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JarnikCheck {
    pub n: usize,
    /// Exact for the exponential form, root-bracketed for fractional powers.
    pub value: RationalInterval,
    /// Decided exactly, even when `value` is an interval.
    pub exceeds_one: bool,
}

/// Evaluates the Jarnik product for every index that has a successor
/// quotient. Stops at the first index whose `omega(q_n)` exceeds the cap.
pub fn verify_jarnik_condition(
    cf: &ContinuedFraction,
    omega: &OmegaSpec,
    cap: MagnitudeCap,
) -> Capped<Vec<JarnikCheck>> {
    let convs = cf.convergents();
    let mut checks = Vec::new();
    let mut overflow = None;
    for (n, b) in cf.quotients().iter().enumerate() {
        let q = convs[n].q.to_biguint().expect("q > 0");
        let q2b = rat_from_uint(&(&q * &q * b));
        let row = omega.value_at(&q, cap).and_then(|w| {
            // b w q^2 > 1  <=>  w > 1/(b q^2)
            let above = omega.compare(&q, &q2b.recip(), cap)? == Ordering::Less;
            Ok((w.scale(&q2b), above))
        });
        match row {
            Ok((value, exceeds_one)) => checks.push(JarnikCheck {
                n,
                value,
                exceeds_one,
            }),
            Err(e) => {
                overflow = Some(e);
                break;
            }
        }
    }
    Capped {
        value: checks,
        overflow,
    }
}

impl JarnikCheck {
    /// `value - 1` as an enclosure; shrinks toward zero for a Jarnik expansion.
    pub fn excess(&self) -> RationalInterval {
        self.value.shift(&-BigRat::one())
    }
}
