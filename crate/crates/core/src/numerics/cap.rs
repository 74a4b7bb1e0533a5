use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_CAP_BITS: u64 = 1 << 20;

/// Bit-length ceiling for integers produced by capped operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MagnitudeCap {
    pub max_bits: u64,
}

impl Default for MagnitudeCap {
    fn default() -> Self {
        Self {
            max_bits: DEFAULT_CAP_BITS,
        }
    }
}

impl MagnitudeCap {
    pub fn new(max_bits: u64) -> Result<Self> {
        if max_bits == 0 {
            return Err(Error::InvalidArgument("cap must be positive".into()));
        }
        Ok(Self { max_bits })
    }

    fn overflow(&self, required_bits: u64) -> Error {
        Error::MagnitudeOverflow {
            required_bits,
            max_bits: self.max_bits,
        }
    }

    pub fn check(&self, n: &BigUint) -> Result<()> {
        if n.bits() > self.max_bits {
            return Err(self.overflow(n.bits()));
        }
        Ok(())
    }

    pub fn check_int(&self, n: &BigInt) -> Result<()> {
        if n.bits() > self.max_bits {
            return Err(self.overflow(n.bits()));
        }
        Ok(())
    }

    /// Fails when `bits` exceeds the cap; for pre-checks on computed sizes.
    pub fn check_bits(&self, bits: u64) -> Result<()> {
        if bits > self.max_bits {
            return Err(self.overflow(bits));
        }
        Ok(())
    }

    pub fn mul(&self, a: &BigUint, b: &BigUint) -> Result<BigUint> {
        // bits(ab) >= bits(a) + bits(b) - 1
        if !a.is_zero() && !b.is_zero() {
            self.check_bits(a.bits() + b.bits() - 1)?;
        }
        let p = a * b;
        self.check(&p)?;
        Ok(p)
    }
}

/// `base^exponent`, exact, or `MagnitudeOverflow` when the result would be
/// longer than `cap.max_bits` bits. Never truncates.
pub fn pow_capped(base: &BigUint, exponent: &BigUint, cap: MagnitudeCap) -> Result<BigUint> {
    if exponent.is_zero() || base.is_one() {
        return Ok(BigUint::one());
    }
    if base.is_zero() {
        return Ok(BigUint::zero());
    }
    // base >= 2: bits(base^e) >= e * (bits(base) - 1) + 1
    let per_factor = base.bits() - 1;
    let lower = exponent * BigUint::from(per_factor) + 1u32;
    let lower_bits = lower.to_u64().unwrap_or(u64::MAX);
    cap.check_bits(lower_bits)?;
    // exponent <= lower_bits <= max_bits fits in usize here
    let e = exponent.to_usize().ok_or_else(|| cap.overflow(u64::MAX))?;
    let result = num_traits::pow(base.clone(), e);
    cap.check(&result)?;
    Ok(result)
}
