//! Certified enclosures of `ln` and `exp`.
//!
//! Both functions evaluate their series in binary fixed point with every
//! rounding directed outward, so the returned interval always contains the
//! true value. `prec` is the working precision in bits; the absolute width of
//! a logarithm enclosure is roughly `2^-prec`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{ceil, floor, BigRat, RationalInterval};
use crate::error::{Error, Result};

pub const DEFAULT_LOG_PRECISION_BITS: u32 = 128;

const GUARD_BITS: u64 = 24;

fn scaled_floor(r: &BigRat, w: u64) -> BigInt {
    floor(&(r * BigRat::from_integer(BigInt::one() << w)))
}

fn scaled_ceil(r: &BigRat, w: u64) -> BigInt {
    ceil(&(r * BigRat::from_integer(BigInt::one() << w)))
}

fn ceil_shr(n: &BigInt, w: u64) -> BigInt {
    -((-n) >> w)
}

fn ceil_div(n: &BigInt, d: u64) -> BigInt {
    n.div_ceil(&BigInt::from(d))
}

fn unscale(n: BigInt, w: u64) -> BigRat {
    BigRat::new(n, BigInt::one() << w)
}

/// Lower and upper bounds, scaled by `2^w`, of `atanh(z)` for `0 <= z <= 1/3`.
fn atanh_scaled(z: &BigRat, w: u64) -> (BigInt, BigInt) {
    debug_assert!(!z.is_negative() && z <= &BigRat::new(1.into(), 3.into()));
    let z_lo = scaled_floor(z, w);
    let z_hi = scaled_ceil(z, w);
    let z2_lo = (&z_lo * &z_lo) >> w;
    let z2_hi = ceil_shr(&(&z_hi * &z_hi), w);

    // Truncating a positive series only loses mass, so floors give a lower bound.
    let mut lower = BigInt::zero();
    let mut power = z_lo;
    let mut k = 1u64;
    loop {
        let term = &power / BigInt::from(k);
        if term.is_zero() {
            break;
        }
        lower += term;
        power = (&power * &z2_lo) >> w;
        k += 2;
    }

    // Upper: ceilings, then the tail sum_{j>=i} z^(2j+1)/(2j+1) <= 2 z^(2i+1)/(2i+1)
    // because z^2 <= 1/2.
    let mut upper = BigInt::zero();
    let mut power = z_hi;
    let mut k = 1u64;
    loop {
        if power <= BigInt::from(k) {
            upper += ceil_div(&(&power * 2), k);
            break;
        }
        upper += ceil_div(&power, k);
        power = ceil_shr(&(&power * &z2_hi), w);
        k += 2;
    }
    (lower, upper)
}

/// Bounds, scaled by `2^w`, of `ln v` for a positive rational `v`.
fn ln_scaled(v: &BigRat, prec: u32) -> (BigInt, BigInt, u64) {
    // v = m * 2^k with 1 <= m < 2
    let mut k = v.numer().bits() as i64 - v.denom().bits() as i64;
    let two_pow = |e: i64| -> BigRat {
        if e >= 0 {
            BigRat::from_integer(BigInt::one() << e as u64)
        } else {
            BigRat::new(BigInt::one(), BigInt::one() << (-e) as u64)
        }
    };
    let mut m = v / two_pow(k);
    let two = BigRat::from_integer(BigInt::from(2));
    while m < BigRat::one() {
        m *= &two;
        k -= 1;
    }
    while m >= two {
        m /= &two;
        k += 1;
    }
    let k_bits = 64 - k.unsigned_abs().leading_zeros() as u64;
    let w = prec as u64 + GUARD_BITS + k_bits;

    let z = (&m - BigRat::one()) / (&m + BigRat::one());
    let (a_lo, a_hi) = atanh_scaled(&z, w);
    let (l2_lo, l2_hi) = atanh_scaled(&BigRat::new(1.into(), 3.into()), w);
    // ln 2 = 2 atanh(1/3), ln m = 2 atanh(z)
    let (l2_lo, l2_hi) = (l2_lo * 2, l2_hi * 2);
    let kk = BigInt::from(k);
    let (k_lo, k_hi) = if k >= 0 {
        (&kk * &l2_lo, &kk * &l2_hi)
    } else {
        (&kk * &l2_hi, &kk * &l2_lo)
    };
    (k_lo + a_lo * 2, k_hi + a_hi * 2, w)
}

/// Enclosure of `ln v` for a positive rational `v`.
pub fn ln_rat(v: &BigRat, prec: u32) -> Result<RationalInterval> {
    if !v.is_positive() {
        return Err(Error::InvalidArgument(
            "logarithm of a nonpositive value".into(),
        ));
    }
    if v.is_one() {
        return Ok(RationalInterval::point(BigRat::zero()));
    }
    let (lo, hi, w) = ln_scaled(v, prec);
    RationalInterval::new(unscale(lo, w), unscale(hi, w))
}

pub fn ln_uint(n: &BigUint, prec: u32) -> Result<RationalInterval> {
    ln_rat(&BigRat::from_integer(BigInt::from(n.clone())), prec)
}

/// Enclosure of `ln x` over an interval with positive lower endpoint.
pub fn ln(x: &RationalInterval, prec: u32) -> Result<RationalInterval> {
    if !x.is_positive() {
        return Err(Error::IntervalTooWide(
            "logarithm argument not bounded away from zero".into(),
        ));
    }
    if x.is_point() {
        return ln_rat(x.lo(), prec);
    }
    let lo = ln_rat(x.lo(), prec)?;
    let hi = ln_rat(x.hi(), prec)?;
    RationalInterval::new(lo.lo().clone(), hi.hi().clone())
}

/// Bounds, scaled by `2^w`, of `exp(y)` for rational `y >= 0`.
fn exp_scaled_nonneg(y: &BigRat, prec: u32) -> (BigInt, BigInt, u64) {
    // halve until y / 2^s <= 1/2
    let half = BigRat::new(1.into(), 2.into());
    let mut s = 0u64;
    let mut t = y.clone();
    while t > half {
        t /= BigRat::from_integer(BigInt::from(2));
        s += 1;
    }
    let w = prec as u64 + GUARD_BITS + 2 * s + 8;
    let one = BigInt::one() << w;
    let t_lo = scaled_floor(&t, w);
    let t_hi = scaled_ceil(&t, w);

    let mut lower = BigInt::zero();
    let mut term = one.clone();
    let mut i = 0u64;
    while !term.is_zero() {
        lower += &term;
        i += 1;
        term = ((&term * &t_lo) >> w) / BigInt::from(i);
    }

    // ratio of consecutive terms is t/(i+1) <= 1/2, so the tail is <= 2 * term
    let mut upper = BigInt::zero();
    let mut term = one;
    let mut i = 0u64;
    loop {
        if term <= BigInt::one() {
            upper += &term * 2;
            break;
        }
        upper += &term;
        i += 1;
        term = ceil_div(&ceil_shr(&(&term * &t_hi), w), i);
    }

    for _ in 0..s {
        lower = (&lower * &lower) >> w;
        upper = ceil_shr(&(&upper * &upper), w);
    }
    (lower, upper, w)
}

/// Enclosure of `exp(y)` for a rational `y`.
pub fn exp_rat(y: &BigRat, prec: u32) -> RationalInterval {
    if y.is_zero() {
        return RationalInterval::point(BigRat::one());
    }
    let (lo, hi, w) = exp_scaled_nonneg(&y.abs(), prec);
    let lo = unscale(lo, w);
    let hi = unscale(hi, w);
    if y.is_negative() {
        RationalInterval::hull(hi.recip(), lo.recip())
    } else {
        RationalInterval::hull(lo, hi)
    }
}

pub fn exp(x: &RationalInterval, prec: u32) -> RationalInterval {
    if x.is_point() {
        return exp_rat(x.lo(), prec);
    }
    let lo = exp_rat(x.lo(), prec);
    let hi = exp_rat(x.hi(), prec);
    RationalInterval::hull(lo.lo().clone(), hi.hi().clone())
}

/// Replaces the endpoints by dyadic rationals with `bits` fractional bits,
/// rounding outward. Keeps chained interval computations small.
pub fn round_outward(x: &RationalInterval, bits: u64) -> RationalInterval {
    let lo = unscale(scaled_floor(x.lo(), bits), bits);
    let hi = unscale(scaled_ceil(x.hi(), bits), bits);
    RationalInterval::hull(lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{parse_rat, rat};

    // Reference digits from an independent 60-digit computation (mpmath).
    const LN2: &str = "0.69314718055994530941723212145817656807550013436025525412068";
    const LN_832040: &str = "13.6316357955707643415949527035338186003394292848485536941874";
    const E: &str = "2.71828182845904523536028747135266249775724709369995957496697";

    fn dec(s: &str) -> BigRat {
        let (i, f) = s.split_once('.').unwrap();
        parse_rat(&format!("{}{}/1{}", i, f, "0".repeat(f.len()))).unwrap()
    }

    fn assert_encloses(x: &RationalInterval, reference: &str, max_width: &BigRat) {
        let r = dec(reference);
        let slack = rat(1, 10).pow(55);
        let widened = RationalInterval::new(x.lo() - &slack, x.hi() + &slack).unwrap();
        assert!(widened.contains(&r), "{x} misses {reference}");
        assert!(&x.width() < max_width, "width {}", x.width());
    }

    #[test]
    fn ln2_enclosure() {
        let x = ln_rat(&rat(2, 1), 128).unwrap();
        assert_encloses(&x, LN2, &rat(1, 10).pow(36));
    }

    #[test]
    fn ln_of_fibonacci_value() {
        let x = ln_rat(&rat(832040, 1), 128).unwrap();
        assert_encloses(&x, LN_832040, &rat(1, 10).pow(35));
    }

    #[test]
    fn ln_small_and_negative() {
        let x = ln_rat(&rat(1, 2), 100).unwrap();
        let neg = dec(LN2);
        let slack = rat(1, 10).pow(50);
        assert!(x.lo() - &slack <= -&neg && -&neg <= x.hi() + &slack);
        assert!(ln_rat(&rat(0, 1), 64).is_err());
        assert!(ln_rat(&rat(-3, 1), 64).is_err());
        assert_eq!(
            ln_rat(&rat(1, 1), 64).unwrap(),
            RationalInterval::point(rat(0, 1))
        );
    }

    #[test]
    fn ln_of_huge_power_of_two() {
        let n = BigUint::one() << 65536usize;
        let x = ln_uint(&n, 128).unwrap();
        let expected = dec(LN2) * rat(65536, 1);
        let slack = rat(1, 10).pow(50);
        assert!(x.lo() - &slack <= expected && expected <= x.hi() + &slack);
        assert!(x.width() < rat(1, 10).pow(30));
    }

    #[test]
    fn exp_of_one_and_minus_one() {
        let x = exp_rat(&rat(1, 1), 128);
        assert_encloses(&x, E, &rat(1, 10).pow(35));
        let y = exp_rat(&rat(-1, 1), 128);
        let e = dec(E);
        assert!(y.lo() * &e < rat(1, 1) + rat(1, 10).pow(40));
        assert!(y.hi() * &e > rat(1, 1) - rat(1, 10).pow(40));
    }

    #[test]
    fn exp_ln_round_trip_encloses() {
        for v in [rat(3, 1), rat(5, 7), rat(1000, 3)] {
            let l = ln_rat(&v, 96).unwrap();
            let back = exp(&l, 96);
            assert!(back.contains(&v), "{v}");
            assert!(back.width() < rat(1, 10).pow(20) * &v);
        }
    }

    #[test]
    fn outward_rounding_contains() {
        let x = RationalInterval::new(rat(1, 3), rat(2, 3)).unwrap();
        let r = round_outward(&x, 10);
        assert!(r.contains_interval(&x));
        assert!(r.lo().denom() <= &BigInt::from(1024));
    }
}
