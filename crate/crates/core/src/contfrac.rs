//! Simple continued fractions `[b0; b1, b2, ...]` and their convergents.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{serde_fmt, uint_to_int, BigRat, MagnitudeCap, RationalInterval};

/// How a stored prefix relates to the full expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Tail {
    /// The prefix is the whole expansion of a rational number.
    Exact,
    /// More quotients exist; generation stopped at a requested length or cap.
    Truncated,
    /// The expansion was read from an interval whose endpoints disagree on
    /// the next quotient.
    Ambiguous,
}

/// Integer part `b0`, partial quotients `b1..bk` (all >= 1) and a tail marker.
///
/// Exact expansions are kept canonical: the last quotient is at least 2
/// unless the expansion is the single term `[b0]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawContinuedFraction")]
pub struct ContinuedFraction {
    #[serde(with = "serde_fmt::int_num")]
    b0: BigInt,
    #[serde(with = "serde_fmt::uint_vec_num")]
    quotients: Vec<BigUint>,
    tail: Tail,
}

#[derive(Deserialize)]
struct RawContinuedFraction {
    #[serde(with = "serde_fmt::int_num")]
    b0: BigInt,
    #[serde(with = "serde_fmt::uint_vec_num")]
    quotients: Vec<BigUint>,
    tail: Tail,
}

impl TryFrom<RawContinuedFraction> for ContinuedFraction {
    type Error = Error;

    fn try_from(raw: RawContinuedFraction) -> Result<Self> {
        ContinuedFraction::new(raw.b0, raw.quotients, raw.tail)
    }
}

/// Convergent `p_n / q_n` with `q_n > 0` and `gcd(p_n, q_n) = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Convergent {
    pub n: usize,
    #[serde(with = "serde_fmt::int_num")]
    pub p: BigInt,
    #[serde(with = "serde_fmt::int_num")]
    pub q: BigInt,
}

impl Convergent {
    pub fn value(&self) -> BigRat {
        // already coprime with q > 0
        BigRat::new_raw(self.p.clone(), self.q.clone())
    }
}

impl ContinuedFraction {
    /// Validates quotients and brings `Exact` expansions to canonical form.
    pub fn new(b0: BigInt, mut quotients: Vec<BigUint>, tail: Tail) -> Result<Self> {
        if quotients.iter().any(|b| b.is_zero()) {
            return Err(Error::InvalidArgument(
                "partial quotients after b0 must be >= 1".into(),
            ));
        }
        let mut b0 = b0;
        if tail == Tail::Exact && quotients.last().is_some_and(|b| b.is_one()) {
            // [.., c, 1] = [.., c + 1]
            quotients.pop();
            match quotients.last_mut() {
                Some(c) => *c += 1u32,
                None => b0 += 1,
            }
        }
        Ok(Self {
            b0,
            quotients,
            tail,
        })
    }

    pub fn b0(&self) -> &BigInt {
        &self.b0
    }

    /// `b1, b2, ..., bk`.
    pub fn quotients(&self) -> &[BigUint] {
        &self.quotients
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    /// Number of partial quotients after `b0`.
    pub fn len(&self) -> usize {
        self.quotients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quotients.is_empty()
    }

    /// Number of available convergents, `len() + 1`.
    pub fn convergent_count(&self) -> usize {
        self.quotients.len() + 1
    }

    /// Keeps `b0` and the first `k` quotients. Shortening marks the tail
    /// `Truncated`.
    pub fn truncated(&self, k: usize) -> ContinuedFraction {
        if k >= self.quotients.len() {
            return self.clone();
        }
        ContinuedFraction {
            b0: self.b0.clone(),
            quotients: self.quotients[..k].to_vec(),
            tail: Tail::Truncated,
        }
    }

    /// Convergents `p_0/q_0 .. p_k/q_k` from the standard recurrence.
    pub fn convergents(&self) -> Vec<Convergent> {
        let mut out = Vec::with_capacity(self.convergent_count());
        let (mut p_prev, mut q_prev) = (BigInt::one(), BigInt::zero());
        let (mut p, mut q) = (self.b0.clone(), BigInt::one());
        out.push(Convergent {
            n: 0,
            p: p.clone(),
            q: q.clone(),
        });
        for (i, b) in self.quotients.iter().enumerate() {
            let b = uint_to_int(b);
            let p_next = &b * &p + &p_prev;
            let q_next = &b * &q + &q_prev;
            p_prev = std::mem::replace(&mut p, p_next);
            q_prev = std::mem::replace(&mut q, q_next);
            out.push(Convergent {
                n: i + 1,
                p: p.clone(),
                q: q.clone(),
            });
        }
        out
    }

    /// As [`convergents`](Self::convergents), failing once a denominator
    /// exceeds the cap.
    pub fn convergents_capped(&self, cap: MagnitudeCap) -> Result<Vec<Convergent>> {
        let convs = self.convergents();
        for c in &convs {
            cap.check_int(&c.q)?;
            cap.check_int(&c.p)?;
        }
        Ok(convs)
    }

    /// Exact value of the stored prefix.
    pub fn prefix_value(&self) -> BigRat {
        let mut acc: Option<BigRat> = None;
        for b in self.quotients.iter().rev() {
            let b = BigRat::from_integer(uint_to_int(b));
            acc = Some(match acc {
                None => b,
                Some(x) => b + x.recip(),
            });
        }
        let b0 = BigRat::from_integer(self.b0.clone());
        match acc {
            None => b0,
            Some(x) => b0 + x.recip(),
        }
    }
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}", self.b0)?;
        for (i, b) in self.quotients.iter().enumerate() {
            write!(f, "{}{}", if i == 0 { "; " } else { ", " }, b)?;
        }
        if self.tail != Tail::Exact {
            write!(f, ", ...")?;
        }
        write!(f, "]")
    }
}

/// Euclidean algorithm; the result is canonical and `Exact`.
pub fn cf_from_rational(x: &BigRat) -> ContinuedFraction {
    let mut num = x.numer().clone();
    let mut den = x.denom().clone();
    let (b0, r) = num.div_mod_floor(&den);
    let mut quotients = Vec::new();
    num = den;
    den = r;
    while !den.is_zero() {
        let (b, r) = num.div_mod_floor(&den);
        quotients.push(b.to_biguint().expect("positive quotient"));
        num = den;
        den = r;
    }
    ContinuedFraction {
        b0,
        quotients,
        tail: Tail::Exact,
    }
}

/// Longest prefix shared by the expansions of every real in `x`, at most
/// `max_terms` quotients after `b0`.
///
/// Both endpoints are run through the Euclidean step together. The step
/// `y -> 1/(y - floor y)` reverses order, so the endpoints swap roles at each
/// level; comparing floors is order-free and handles that alternation.
/// A quotient is emitted only while both floors agree and both fractional
/// parts are nonzero.
pub fn cf_from_interval(x: &RationalInterval, max_terms: usize) -> Result<ContinuedFraction> {
    if x.is_point() {
        let cf = cf_from_rational(x.lo());
        return Ok(cf.truncated(max_terms));
    }
    // Integer pairs (numerator, denominator) avoid a gcd per step.
    let mut a = (x.lo().numer().clone(), x.lo().denom().clone());
    let mut b = (x.hi().numer().clone(), x.hi().denom().clone());
    let (b0, ra) = a.0.div_mod_floor(&a.1);
    let (fb, rb) = b.0.div_mod_floor(&b.1);
    if fb != b0 {
        return Err(Error::IntervalTooWide(format!(
            "interval {x} does not determine the integer part"
        )));
    }
    a.0 = ra;
    b.0 = rb;
    let mut quotients = Vec::new();
    let tail = loop {
        if quotients.len() >= max_terms {
            break Tail::Truncated;
        }
        if a.0.is_zero() || b.0.is_zero() {
            break Tail::Ambiguous;
        }
        // y -> 1 / frac(y)
        std::mem::swap(&mut a.0, &mut a.1);
        std::mem::swap(&mut b.0, &mut b.1);
        let (qa, ra) = a.0.div_mod_floor(&a.1);
        let (qb, rb) = b.0.div_mod_floor(&b.1);
        if qa != qb {
            break Tail::Ambiguous;
        }
        quotients.push(qa.to_biguint().expect("quotient >= 1"));
        a.0 = ra;
        b.0 = rb;
    };
    Ok(ContinuedFraction {
        b0,
        quotients,
        tail,
    })
}

/// Interval between the last two convergents.
pub fn bracket_value(cf: &ContinuedFraction) -> Result<RationalInterval> {
    let convs = cf.convergents();
    if convs.len() < 2 {
        return Err(Error::InsufficientTerms {
            needed: 2,
            available: convs.len(),
        });
    }
    let k = convs.len() - 1;
    Ok(RationalInterval::hull(
        convs[k - 1].value(),
        convs[k].value(),
    ))
}

/// Tightest bracket valid for every real whose expansion starts with `cf`'s
/// prefix: the continuation `[..., b_k, y]` with `y >= 1` lies between
/// `p_k/q_k` and the mediant `(p_k + p_{k-1})/(q_k + q_{k-1})`.
pub fn continuation_bracket(cf: &ContinuedFraction) -> RationalInterval {
    let convs = cf.convergents();
    let last = convs.last().expect("at least one convergent");
    let (p_prev, q_prev) = match convs.len() {
        1 => (BigInt::one(), BigInt::zero()),
        n => (convs[n - 2].p.clone(), convs[n - 2].q.clone()),
    };
    // the determinant identity makes the mediant reduced as well
    let mediant = BigRat::new_raw(&last.p + p_prev, &last.q + q_prev);
    RationalInterval::hull(last.value(), mediant)
}

/// Whether `p/q` equals one of the convergents of `cf`'s prefix.
pub fn is_convergent_of(p: &BigInt, q: &BigInt, cf: &ContinuedFraction) -> bool {
    if !q.is_positive() {
        return false;
    }
    let target = BigRat::new(p.clone(), q.clone());
    cf.convergents()
        .iter()
        .any(|c| &c.p == target.numer() && &c.q == target.denom())
}

/// `p_{n+1} q_n - p_n q_{n+1} = (-1)^n` for every consecutive pair.
pub fn determinant_identity_holds(convs: &[Convergent]) -> bool {
    convs.windows(2).all(|w| {
        let d = &w[1].p * &w[0].q - &w[0].p * &w[1].q;
        let expected = if w[0].n % 2 == 0 { 1 } else { -1 };
        d == BigInt::from(expected)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{floor, rat};
    use proptest::prelude::*;

    fn cf(b0: i64, qs: &[u64], tail: Tail) -> ContinuedFraction {
        ContinuedFraction::new(
            BigInt::from(b0),
            qs.iter().map(|&b| BigUint::from(b)).collect(),
            tail,
        )
        .unwrap()
    }

    fn qs(c: &ContinuedFraction) -> Vec<u64> {
        c.quotients()
            .iter()
            .map(|b| b.try_into().unwrap())
            .collect()
    }

    fn pq(convs: &[Convergent]) -> Vec<(i64, i64)> {
        convs
            .iter()
            .map(|c| ((&c.p).try_into().unwrap(), (&c.q).try_into().unwrap()))
            .collect()
    }

    #[test]
    fn expands_rationals() {
        let c = cf_from_rational(&rat(13, 16));
        assert_eq!(c.b0(), &BigInt::from(0));
        assert_eq!(qs(&c), vec![1, 4, 3]);
        assert_eq!(c.tail(), Tail::Exact);

        let c = cf_from_rational(&rat(7, 1));
        assert_eq!((c.b0().clone(), c.len()), (BigInt::from(7), 0));

        assert_eq!(qs(&cf_from_rational(&rat(1, 3))), vec![3]);
        let neg = cf_from_rational(&rat(-7, 3));
        assert_eq!(neg.b0(), &BigInt::from(-3));
        assert_eq!(qs(&neg), vec![1, 2]);
    }

    #[test]
    fn canonicalizes_trailing_one() {
        let c = cf(0, &[3, 1], Tail::Exact);
        assert_eq!(qs(&c), vec![4]);
        let c = cf(2, &[1], Tail::Exact);
        assert_eq!((c.b0().clone(), c.len()), (BigInt::from(3), 0));
        // prefixes of infinite expansions keep their ones
        assert_eq!(qs(&cf(1, &[1, 1], Tail::Truncated)), vec![1, 1]);
        assert!(
            ContinuedFraction::new(BigInt::from(0), vec![BigUint::zero()], Tail::Exact).is_err()
        );
    }

    #[test]
    fn convergents_of_theta2_prefix() {
        let c = cf(0, &[3, 1, 2, 17], Tail::Truncated);
        assert_eq!(
            pq(&c.convergents()),
            vec![(0, 1), (1, 3), (1, 4), (3, 11), (52, 191)]
        );
        assert_eq!(pq(&cf(7, &[], Tail::Exact).convergents()), vec![(7, 1)]);
    }

    #[test]
    fn golden_mean_denominators_are_fibonacci() {
        let c = cf(1, &[1, 1, 1, 1, 1], Tail::Truncated);
        let q: Vec<i64> = pq(&c.convergents()).into_iter().map(|x| x.1).collect();
        assert_eq!(q, vec![1, 1, 2, 3, 5, 8]);
    }

    #[test]
    fn capped_convergents_overflow() {
        let c = cf(0, &[1 << 40, 1 << 40], Tail::Truncated);
        let cap = MagnitudeCap::new(64).unwrap();
        assert!(matches!(
            c.convergents_capped(cap),
            Err(Error::MagnitudeOverflow { .. })
        ));
    }

    #[test]
    fn interval_expansion_of_golden_decimal() {
        let x = RationalInterval::from_decimal("1.61803398", 0).unwrap();
        let c = cf_from_interval(&x, 20).unwrap();
        assert_eq!(c.b0(), &BigInt::from(1));
        assert!(c.len() < 20);
        assert!(c.len() >= 15);
        assert!(c.quotients().iter().all(|b| b.is_one()));
        assert_eq!(c.tail(), Tail::Ambiguous);
        // oracle: every emitted prefix is shared by the exact endpoint expansions
        for end in [x.lo(), x.hi()] {
            let e = cf_from_rational(end);
            assert_eq!(&e.quotients()[..c.len()], c.quotients());
        }
    }

    #[test]
    fn interval_expansion_stops_at_disagreement() {
        let x = RationalInterval::new(rat(2, 5), rat(3, 5)).unwrap();
        let c = cf_from_interval(&x, 10).unwrap();
        assert_eq!(
            (c.b0().clone(), c.len(), c.tail()),
            (BigInt::from(0), 0, Tail::Ambiguous)
        );

        let tiny = BigRat::new(BigInt::one(), num_traits::pow(BigInt::from(10), 30));
        let x = RationalInterval::new(rat(1, 3), rat(1, 3) + &tiny).unwrap();
        let c = cf_from_interval(&x, 3).unwrap();
        // 1/3 = [0; 3] while anything just above has b1 = 2
        assert_eq!(c.len(), 0);

        // just below 1/3 every real starts [0; 3, ...]
        let x = RationalInterval::new(rat(1, 3) - &tiny, rat(1, 3)).unwrap();
        let c = cf_from_interval(&x, 3).unwrap();
        assert_eq!(qs(&c), vec![3]);
        assert_eq!(c.tail(), Tail::Ambiguous);

        let x = RationalInterval::new(rat(9, 10), rat(11, 10)).unwrap();
        assert!(matches!(
            cf_from_interval(&x, 3),
            Err(Error::IntervalTooWide(_))
        ));
    }

    #[test]
    fn interval_expansion_of_point_is_exact() {
        let x = RationalInterval::point(rat(13, 16));
        let c = cf_from_interval(&x, 10).unwrap();
        assert_eq!((qs(&c), c.tail()), (vec![1, 4, 3], Tail::Exact));
        let c = cf_from_interval(&x, 2).unwrap();
        assert_eq!((qs(&c), c.tail()), (vec![1, 4], Tail::Truncated));
    }

    #[test]
    fn brackets() {
        let b = bracket_value(&cf(0, &[3, 1], Tail::Truncated)).unwrap();
        assert_eq!((b.lo().clone(), b.hi().clone()), (rat(1, 4), rat(1, 3)));
        let b = bracket_value(&cf(0, &[3, 1, 2], Tail::Truncated)).unwrap();
        assert_eq!((b.lo().clone(), b.hi().clone()), (rat(1, 4), rat(3, 11)));
        assert!(matches!(
            bracket_value(&cf(7, &[], Tail::Exact)),
            Err(Error::InsufficientTerms { .. })
        ));

        let c = cf(0, &[3, 1, 2], Tail::Truncated);
        let cb = continuation_bracket(&c);
        // between 3/11 and (3 + 1)/(11 + 4)
        assert_eq!((cb.lo().clone(), cb.hi().clone()), (rat(4, 15), rat(3, 11)));
        assert!(bracket_value(&c).unwrap().contains_interval(&cb));
    }

    #[test]
    fn convergent_membership() {
        let c = cf(0, &[3, 1, 2, 17], Tail::Truncated);
        let is = |p: i64, q: i64| is_convergent_of(&BigInt::from(p), &BigInt::from(q), &c);
        assert!(is(1, 3));
        assert!(!is(1, 2));
        assert!(is(52, 191));
        assert!(is(0, 1));
    }

    fn arb_quotients() -> impl Strategy<Value = Vec<u64>> {
        proptest::collection::vec(1u64..50, 0..25)
    }

    proptest! {
        #[test]
        fn rational_round_trip(p in -100_000i64..100_000, q in 1i64..100_000) {
            let x = rat(p, q);
            let c = cf_from_rational(&x);
            prop_assert_eq!(c.convergents().last().unwrap().value(), x.clone());
            prop_assert_eq!(c.prefix_value(), x);
            if let Some(last) = c.quotients().last() {
                prop_assert!(last >= &BigUint::from(2u32));
            }
        }

        #[test]
        fn determinant_and_monotone_denominators(b0 in -5i64..5, q in arb_quotients()) {
            let c = cf(b0, &q, Tail::Truncated);
            let convs = c.convergents();
            prop_assert!(determinant_identity_holds(&convs));
            for w in convs.windows(2).skip(1) {
                prop_assert!(w[1].q > w[0].q);
            }
            for cv in &convs {
                prop_assert!(cv.p.gcd(&cv.q).is_one());
            }
        }

        #[test]
        fn interval_prefix_is_shared(p in 1i64..1_000_000, q in 1i64..1_000_000, w in 1i64..1000) {
            let lo = rat(p, q);
            let hi = &lo + rat(1, w * 1_000_000);
            let x = RationalInterval::new(lo.clone(), hi.clone()).unwrap();
            if let Ok(c) = cf_from_interval(&x, 64) {
                // every real inside, sampled at the midpoint, extends the prefix
                for r in [lo, hi, x.midpoint()] {
                    let e = cf_from_rational(&r);
                    prop_assert_eq!(e.b0(), c.b0());
                    let common = e.quotients().len().min(c.len());
                    prop_assert_eq!(&e.quotients()[..common], &c.quotients()[..common]);
                    prop_assert!(e.len() >= c.len() || e.len() + 1 >= c.len());
                }
                prop_assert!(continuation_bracket(&c).contains_interval(&x));
            }
        }

        #[test]
        fn legendre_by_brute_force(qv in proptest::collection::vec(1u64..10, 4..12)) {
            // rational alpha with expansion length >= 4
            let c = cf(0, &qv, Tail::Exact);
            let alpha = c.prefix_value();
            for q in 1i64..=200 {
                let qq = BigInt::from(q);
                let center = floor(&(&alpha * BigRat::from_integer(qq.clone())));
                for p in [center.clone(), center + 1] {
                    if !p.gcd(&qq).is_one() { continue; }
                    let d = (&alpha - BigRat::new(p.clone(), qq.clone())).abs();
                    if d < BigRat::new(BigInt::one(), BigInt::from(2 * q * q)) {
                        prop_assert!(is_convergent_of(&p, &qq, &c), "{}/{}", p, q);
                    }
                }
            }
        }
    }
}
