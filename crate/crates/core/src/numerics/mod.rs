//! Exact integers, rationals, rational intervals and the magnitude cap.
//!
//! Rationals are `num_rational::BigRational`, which is always stored in
//! lowest terms with a positive denominator. The helpers here fix the text
//! forms used on the command line and in JSON transcripts.

mod cap;
pub mod elementary;
mod interval;
pub mod serde_fmt;

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use cap::{pow_capped, MagnitudeCap, DEFAULT_CAP_BITS};
pub use interval::{IntervalOrdering, RationalInterval};

pub type BigRat = num_rational::BigRational;

pub fn rat(p: i64, q: i64) -> BigRat {
    BigRat::new(BigInt::from(p), BigInt::from(q))
}

/// `num/den` in lowest terms. Cheaper than [`BigRat::new`] when the
/// denominators are huge powers of two times small odd factors.
pub fn ratio(num: BigInt, den: BigInt) -> BigRat {
    assert!(!den.is_zero(), "zero denominator");
    if num.is_zero() {
        return BigRat::zero();
    }
    let g = gcd_euclid(num.magnitude(), den.magnitude());
    let (mut num, mut den) = (num / &g, den / &g);
    if den.is_negative() {
        num = -num;
        den = -den;
    }
    BigRat::new_raw(num, den)
}

fn gcd_euclid(a: &BigUint, b: &BigUint) -> BigInt {
    let twos = a
        .trailing_zeros()
        .unwrap_or(0)
        .min(b.trailing_zeros().unwrap_or(0));
    // after removing the shared power of two, 2 divides at most one side
    let strip = |x: &BigUint| x >> x.trailing_zeros().unwrap_or(0);
    let (mut a, mut b) = (strip(a), strip(b));
    if a < b {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_zero() {
        let r = &a % &b;
        a = std::mem::replace(&mut b, r);
    }
    BigInt::from(a << twos)
}

/// Order of two rationals by cross-multiplication.
///
/// `Ord` on `BigRational` recurses once per continued-fraction quotient the
/// two operands share, so tight brackets with huge denominators exhaust the
/// stack there.
pub fn cmp_rat(a: &BigRat, b: &BigRat) -> Ordering {
    let sign = |r: &BigRat| match (r.numer().sign(), r.denom().sign()) {
        (Sign::NoSign, _) => 0,
        (n, d) if n == d => 1,
        _ => -1,
    };
    match sign(a).cmp(&sign(b)) {
        Ordering::Equal => {}
        other => return other,
    }
    if a.denom() == b.denom() {
        let ord = a.numer().cmp(b.numer());
        return if a.denom().is_negative() {
            ord.reverse()
        } else {
            ord
        };
    }
    let ord = (a.numer() * b.denom()).cmp(&(b.numer() * a.denom()));
    if a.denom().is_negative() != b.denom().is_negative() {
        ord.reverse()
    } else {
        ord
    }
}

pub fn min_rat<'a>(a: &'a BigRat, b: &'a BigRat) -> &'a BigRat {
    if cmp_rat(a, b) == Ordering::Greater {
        b
    } else {
        a
    }
}

pub fn max_rat<'a>(a: &'a BigRat, b: &'a BigRat) -> &'a BigRat {
    if cmp_rat(a, b) == Ordering::Less {
        b
    } else {
        a
    }
}

pub fn rat_int(n: impl Into<BigInt>) -> BigRat {
    BigRat::from_integer(n.into())
}

pub fn rat_from_uint(n: &BigUint) -> BigRat {
    BigRat::from_integer(BigInt::from(n.clone()))
}

/// `"p/q"` with the denominator always written, `"7/1"` included.
pub fn rat_to_string(r: &BigRat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"p/q"` or a bare integer. Decimals are handled by
/// [`RationalInterval::from_decimal`].
pub fn parse_rat(text: &str) -> Result<BigRat> {
    let text = text.trim();
    let bad = || Error::Parse(format!("not a rational p/q: {text:?}"));
    let (p, q) = match text.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (text, "1"),
    };
    let p: BigInt = parse_int_strict(p).ok_or_else(bad)?;
    let q: BigInt = parse_int_strict(q).ok_or_else(bad)?;
    if q.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {text:?}")));
    }
    Ok(BigRat::new(p, q))
}

fn parse_int_strict(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

pub fn bit_len(n: &BigInt) -> u64 {
    n.bits()
}

/// Floor of a rational.
pub fn floor(r: &BigRat) -> BigInt {
    r.numer().div_floor(r.denom())
}

pub fn ceil(r: &BigRat) -> BigInt {
    -((-r.numer()).div_floor(r.denom()))
}

/// Integer `n` such that `10^n <= |r| < 10^(n+1)`; `r` must be nonzero.
fn decimal_exponent(r: &BigRat) -> i64 {
    let a = r.abs();
    let guess = ((a.numer().bits() as f64 - a.denom().bits() as f64) * std::f64::consts::LOG10_2)
        .floor() as i64;
    let mut e = guess;
    while pow10(e) > a {
        e -= 1;
    }
    while pow10(e + 1) <= a {
        e += 1;
    }
    e
}

fn pow10(e: i64) -> BigRat {
    let p = num_traits::pow(BigInt::from(10), e.unsigned_abs() as usize);
    if e >= 0 {
        BigRat::from_integer(p)
    } else {
        BigRat::new(BigInt::one(), p)
    }
}

/// Scientific notation with `sig` significant digits. Rounds away from
/// zero when `round_up` is set (used for error bounds), to nearest otherwise.
pub fn to_scientific(r: &BigRat, sig: usize, round_up: bool) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    let sig = sig.max(1);
    let neg = r.is_negative();
    let mut e = decimal_exponent(r);
    let scaled = r.abs() / pow10(e - sig as i64 + 1);
    let mut m = if round_up {
        ceil(&scaled)
    } else {
        floor(&(scaled + rat(1, 2)))
    };
    if m.to_string().len() > sig {
        m /= 10;
        e += 1;
    }
    let digits = m.to_string();
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(&digits[..1]);
    if digits.len() > 1 {
        out.push('.');
        out.push_str(&digits[1..]);
    }
    out.push_str(&format!("e{e}"));
    out
}

/// Decimal rendering with `sig` significant digits, rounded to nearest.
/// Falls back to scientific notation outside `[1e-6, 1e21)`.
pub fn to_decimal(r: &BigRat, sig: usize) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    let e = decimal_exponent(r);
    if !(-6..21).contains(&e) {
        return to_scientific(r, sig, false);
    }
    let frac_digits = (sig as i64 - 1 - e).max(0) as usize;
    let scale = num_traits::pow(BigInt::from(10), frac_digits);
    let scaled = floor(&(r.abs() * BigRat::from_integer(scale) + rat(1, 2)));
    let mut s = scaled.to_string();
    if frac_digits > 0 {
        if s.len() <= frac_digits {
            s = "0".repeat(frac_digits + 1 - s.len()) + &s;
        }
        s.insert(s.len() - frac_digits, '.');
    }
    if r.is_negative() {
        s.insert(0, '-');
    }
    s
}

pub fn uint_to_int(n: &BigUint) -> BigInt {
    BigInt::from_biguint(Sign::Plus, n.clone())
}

/// Converts a nonnegative integer; negative input is an argument error.
pub fn int_to_uint(n: &BigInt) -> Result<BigUint> {
    n.to_biguint()
        .ok_or_else(|| Error::InvalidArgument(format!("expected nonnegative integer, got {n}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn ratio_matches_reducing_constructor(
            n in -10_000i64..10_000, d in 1i64..10_000, k in 0u32..200, sign in any::<bool>()
        ) {
            let d = BigInt::from(d) << k;
            let d = if sign { -d } else { d };
            prop_assert_eq!(ratio(BigInt::from(n), d.clone()), BigRat::new(BigInt::from(n), d));
        }

        #[test]
        fn cmp_rat_matches_ord(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000,
                               d in 1i64..1000, flip in any::<bool>()) {
            let x = rat(a, b);
            let y = rat(c, d);
            prop_assert_eq!(cmp_rat(&x, &y), x.cmp(&y));
            // an unnormalized negative denominator still orders by value
            let raw = BigRat::new_raw(BigInt::from(-a), BigInt::from(-b));
            let (l, r) = if flip { (&raw, &y) } else { (&y, &raw) };
            prop_assert_eq!(cmp_rat(l, r), if flip { x.cmp(&y) } else { y.cmp(&x) });
        }
    }

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse_rat("13/16").unwrap(), rat(13, 16));
        assert_eq!(parse_rat("-6/4").unwrap(), rat(-3, 2));
        assert_eq!(parse_rat("7").unwrap(), rat(7, 1));
        assert!(matches!(parse_rat("xyz"), Err(Error::Parse(_))));
        assert!(matches!(parse_rat("1/0"), Err(Error::Parse(_))));
        assert!(matches!(parse_rat("1.5"), Err(Error::Parse(_))));
    }

    #[test]
    fn string_form_always_has_denominator() {
        assert_eq!(rat_to_string(&rat(7, 1)), "7/1");
        assert_eq!(rat_to_string(&rat(6, -4)), "-3/2");
    }

    #[test]
    fn decimal_and_scientific_rendering() {
        assert_eq!(to_decimal(&rat(1, 3), 5), "0.33333");
        assert_eq!(to_decimal(&rat(2, 3), 3), "0.667");
        assert_eq!(to_decimal(&rat(-1234, 1), 6), "-1234.00");
        assert_eq!(to_scientific(&rat(1, 3000), 2, false), "3.3e-4");
        assert_eq!(to_scientific(&rat(1, 3000), 2, true), "3.4e-4");
        assert_eq!(to_scientific(&rat(999, 1000), 2, true), "1.0e0");
        assert_eq!(to_scientific(&rat(1, 1), 1, false), "1e0");
    }

    #[test]
    fn floor_and_ceil() {
        assert_eq!(floor(&rat(-7, 2)), BigInt::from(-4));
        assert_eq!(ceil(&rat(-7, 2)), BigInt::from(-3));
        assert_eq!(ceil(&rat(6, 3)), BigInt::from(2));
    }

    #[test]
    fn cmp_rat_handles_long_shared_expansions() {
        // x and x + 1/q^2 share about 2000 continued-fraction quotients
        let q = BigInt::from(6).pow(2000u32);
        let x = BigRat::new(BigInt::from(5).pow(2000u32), q.clone());
        let y = &x + BigRat::new(BigInt::one(), &q * &q);
        assert_eq!(cmp_rat(&x, &y), Ordering::Less);
        assert_eq!(cmp_rat(&y, &x), Ordering::Greater);
        assert_eq!(max_rat(&x, &y), &y);
        assert_eq!(min_rat(&x, &y), &x);
    }

    proptest! {
        #[test]
        fn rational_arithmetic_is_exact(a in -10_000i64..10_000, b in 1i64..10_000,
                                        c in -10_000i64..10_000, d in 1i64..10_000) {
            let x = rat(a, b);
            let y = rat(c, d);
            prop_assert_eq!(&(&x + &y) - &y, x.clone());
            if !y.is_zero() {
                prop_assert_eq!(&(&x * &y) / &y, x.clone());
            }
            // stored reduced, positive denominator
            let s = &x * &y;
            prop_assert!(s.denom().is_positive());
            prop_assert!(s.numer().gcd(s.denom()).is_one());
        }

        #[test]
        fn rat_text_round_trips(a in any::<i64>(), b in 1i64..i64::MAX) {
            let x = rat(a, b);
            prop_assert_eq!(parse_rat(&rat_to_string(&x)).unwrap(), x);
        }
    }
}
