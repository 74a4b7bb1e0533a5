//! Exact oracles for rational-approximation inequalities.
//!
//! Every check takes `alpha` as a [`RationalInterval`] and answers only what
//! the bracket certifies. Comparisons against `omega(q)` go through
//! [`OmegaSpec::compare`], so no verdict depends on rounding.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::constructions::SondowSeries;
use crate::contfrac::{
    cf_from_interval, cf_from_rational, is_convergent_of, ContinuedFraction, Convergent,
};
use crate::error::{Error, Result};
use crate::measures::OmegaSpec;
use crate::numerics::{
    ceil, floor, rat_to_string, ratio, serde_fmt, BigRat, MagnitudeCap, RationalInterval,
};

const PREFIX_TERMS: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    /// `distance.lo > omega(q)`.
    Above,
    /// `distance.hi < omega(q)`.
    Below,
    Undecided,
}

/// One candidate `p/q` and its certified distance from `alpha`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApproximationRecord {
    pub q: u64,
    #[serde(with = "serde_fmt::int_num")]
    pub best_p: BigInt,
    pub distance: RationalInterval,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_value: Option<RationalInterval>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
}

/// `x - p/q`, reduced without a full-size gcd.
fn offset(x: &BigRat, p: &BigInt, q: &BigInt) -> BigRat {
    ratio(x.numer() * q - p * x.denom(), x.denom() * q)
}

fn diff(a: &BigRat, b: &BigRat) -> BigRat {
    offset(a, b.numer(), b.denom())
}

/// Bracket of `|alpha - p/q|` over the whole interval.
pub fn distance(alpha: &RationalInterval, p: &BigInt, q: &BigInt) -> RationalInterval {
    let lo = offset(alpha.lo(), p, q);
    let hi = offset(alpha.hi(), p, q);
    if !lo.is_negative() {
        RationalInterval::hull(lo, hi)
    } else if !hi.is_positive() {
        RationalInterval::hull(-hi, -lo)
    } else {
        RationalInterval::hull(BigRat::zero(), (-lo).max(hi))
    }
}

fn require_tight(alpha: &RationalInterval, q_max: u64) -> Result<()> {
    if q_max == 0 {
        return Err(Error::InvalidArgument("q_max must be positive".into()));
    }
    let q = BigInt::from(q_max);
    if alpha.width() * BigRat::from_integer(&q * &q * 2) >= BigRat::one() {
        return Err(Error::IntervalTooWide(format!(
            "bracket width {} is not below 1/(2 q_max^2) for q_max = {q_max}",
            rat_to_string(&alpha.width())
        )));
    }
    Ok(())
}

/// Nearest integers to `q x` over the bracket, with both neighbours kept
/// when the bracket straddles a half-integer.
fn nearest_numerators(alpha: &RationalInterval, q: &BigInt) -> std::ops::RangeInclusive<BigInt> {
    let half = BigRat::new(BigInt::one(), BigInt::from(2));
    let first = ceil(&(alpha.lo() * q - &half));
    let last = floor(&(alpha.hi() * q + &half));
    first..=last
}

fn range_iter(r: std::ops::RangeInclusive<BigInt>) -> impl Iterator<Item = BigInt> {
    let (mut next, last) = r.into_inner();
    std::iter::from_fn(move || {
        (next <= last).then(|| {
            let out = next.clone();
            next += 1;
            out
        })
    })
}

/// Best numerator for each `q` in `1..=q_max`, with its distance bracket.
pub fn best_approximations(
    alpha: &RationalInterval,
    q_max: u64,
) -> Result<Vec<ApproximationRecord>> {
    require_tight(alpha, q_max)?;
    let mut out = Vec::new();
    for q in 1..=q_max {
        let qi = BigInt::from(q);
        for p in range_iter(nearest_numerators(alpha, &qi)) {
            out.push(ApproximationRecord {
                q,
                distance: distance(alpha, &p, &qi),
                best_p: p,
                omega_value: None,
                verdict: None,
            });
        }
    }
    Ok(out)
}

/// `omega` known only between two forms: `smaller(q) <= omega(q) <= larger(q)`.
struct OmegaBracket<'a> {
    smaller: &'a OmegaSpec,
    larger: &'a OmegaSpec,
}

impl OmegaBracket<'_> {
    fn verdict(&self, q: &BigUint, d: &RationalInterval, cap: MagnitudeCap) -> Result<Verdict> {
        if self.larger.compare(q, d.lo(), cap)? == Ordering::Greater {
            Ok(Verdict::Above)
        } else if self.smaller.compare(q, d.hi(), cap)? == Ordering::Less {
            Ok(Verdict::Below)
        } else {
            Ok(Verdict::Undecided)
        }
    }

    fn value(&self, q: &BigUint, cap: MagnitudeCap) -> Result<RationalInterval> {
        let lo = self.smaller.value_at(q, cap)?;
        let hi = self.larger.value_at(q, cap)?;
        Ok(RationalInterval::hull(lo.lo().clone(), hi.hi().clone()))
    }

    fn judge(&self, mut r: ApproximationRecord, cap: MagnitudeCap) -> Result<ApproximationRecord> {
        let q = BigUint::from(r.q);
        r.verdict = Some(self.verdict(&q, &r.distance, cap)?);
        r.omega_value = Some(self.value(&q, cap)?);
        Ok(r)
    }
}

/// Result of comparing best approximations with `omega(q)` for every `q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderCheck {
    pub q_max: u64,
    pub records: Vec<ApproximationRecord>,
}

impl OrderCheck {
    fn classify(&self) -> (Vec<u64>, Vec<u64>, Vec<u64>) {
        let (mut below, mut above, mut undecided) = (Vec::new(), Vec::new(), Vec::new());
        for group in self.records.chunk_by(|a, b| a.q == b.q) {
            let q = group[0].q;
            let verdicts = group
                .iter()
                .map(|r| r.verdict.unwrap_or(Verdict::Undecided));
            if verdicts.clone().any(|v| v == Verdict::Below) {
                below.push(q);
            } else if verdicts.clone().all(|v| v == Verdict::Above) {
                above.push(q);
            } else {
                undecided.push(q);
            }
        }
        (below, above, undecided)
    }

    /// `q` with some `p` certified to satisfy `|alpha - p/q| < omega(q)`.
    pub fn witnesses(&self) -> Vec<u64> {
        self.classify().0
    }

    /// `q` where every candidate `p` is certified to stay above `omega(q)`.
    pub fn above(&self) -> Vec<u64> {
        self.classify().1
    }

    pub fn undecided(&self) -> Vec<u64> {
        self.classify().2
    }

    pub fn largest_witness(&self) -> Option<u64> {
        self.witnesses().last().copied()
    }

    /// Report for an approximability claim: witnesses are the evidence, and
    /// no individual `q` can violate it.
    pub fn report(&self) -> VerificationReport {
        let (witnesses, _, undecided) = self.classify();
        VerificationReport {
            q_max: self.q_max,
            witnesses,
            violations: Vec::new(),
            undecided,
            largest_violation: None,
        }
    }
}

/// Partitions `1..=q_max` by whether the best approximation beats `omega`.
pub fn check_order(
    alpha: &RationalInterval,
    omega: &OmegaSpec,
    q_max: u64,
    cap: MagnitudeCap,
) -> Result<OrderCheck> {
    check_order_between(alpha, omega, omega, q_max, cap)
}

fn check_order_between(
    alpha: &RationalInterval,
    smaller: &OmegaSpec,
    larger: &OmegaSpec,
    q_max: u64,
    cap: MagnitudeCap,
) -> Result<OrderCheck> {
    let bracket = OmegaBracket { smaller, larger };
    let records = best_approximations(alpha, q_max)?
        .into_iter()
        .map(|r| bracket.judge(r, cap))
        .collect::<Result<Vec<_>>>()?;
    Ok(OrderCheck { q_max, records })
}

/// Distance verdicts at the given convergents rather than at every `q`.
pub fn convergent_order_records(
    alpha: &RationalInterval,
    convs: &[Convergent],
    omega: &OmegaSpec,
    cap: MagnitudeCap,
) -> Result<Vec<ApproximationRecord>> {
    let bracket = OmegaBracket {
        smaller: omega,
        larger: omega,
    };
    convs
        .iter()
        .map(|c| {
            let q = u64::try_from(&c.q).map_err(|_| {
                Error::InvalidArgument(format!("denominator {} exceeds 64 bits", c.q))
            })?;
            let record = ApproximationRecord {
                q,
                distance: distance(alpha, &c.p, &c.q),
                best_p: c.p.clone(),
                omega_value: None,
                verdict: None,
            };
            bracket.judge(record, cap)
        })
        .collect()
}

/// Both sides of `1/(2 q_n q_{n+1}) < |alpha - p_n/q_n| < 1/(q_n q_{n+1})`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SandwichCheck {
    pub n: usize,
    pub lower: bool,
    pub upper: bool,
}

impl SandwichCheck {
    pub fn holds(&self) -> bool {
        self.lower && self.upper
    }
}

/// Checks every convergent that has a successor in `convs`.
pub fn check_sandwich5(
    alpha: &RationalInterval,
    convs: &[Convergent],
) -> Result<Vec<SandwichCheck>> {
    let undecidable = |n: usize, side: &str| {
        Error::IntervalTooWide(format!(
            "{side} side of the sandwich is undecidable at n = {n}"
        ))
    };
    convs
        .windows(2)
        .map(|w| {
            let (c, next) = (&w[0], &w[1]);
            let d = distance(alpha, &c.p, &c.q);
            let upper_bound = BigRat::new(BigInt::one(), &c.q * &next.q);
            let lower_bound = &upper_bound / BigInt::from(2);
            let lower = if d.lo() > &lower_bound {
                true
            } else if d.hi() <= &lower_bound {
                false
            } else {
                return Err(undecidable(c.n, "lower"));
            };
            let upper = if d.hi() < &upper_bound {
                true
            } else if d.lo() >= &upper_bound {
                false
            } else {
                return Err(undecidable(c.n, "upper"));
            };
            Ok(SandwichCheck {
                n: c.n,
                lower,
                upper,
            })
        })
        .collect()
}

/// Every coprime `p/q` with `q <= q_max` and `|alpha - p/q| < 1/(2q^2)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LegendreReport {
    pub q_max: u64,
    /// Qualifying fractions confirmed as convergents.
    pub confirmed: Vec<ApproximationRecord>,
    /// Qualifying fractions that are not convergents of every point of alpha.
    pub exceptions: Vec<ApproximationRecord>,
    /// Fractions whose distance straddles `1/(2q^2)`.
    pub undecided: Vec<ApproximationRecord>,
}

impl LegendreReport {
    pub fn report(&self) -> VerificationReport {
        let qs = |v: &[ApproximationRecord]| v.iter().map(|r| r.q).collect::<Vec<_>>();
        let violations = qs(&self.exceptions);
        VerificationReport {
            q_max: self.q_max,
            witnesses: qs(&self.confirmed),
            largest_violation: violations.last().copied(),
            violations,
            undecided: qs(&self.undecided),
        }
    }
}

/// Expansions of the interval and, lazily, of its endpoints.
struct ConvergentOracle<'a> {
    alpha: &'a RationalInterval,
    prefix: ContinuedFraction,
    endpoints: Option<(ContinuedFraction, ContinuedFraction)>,
}

impl ConvergentOracle<'_> {
    /// Whether `p/q` is a convergent of every number in the bracket. The set
    /// of numbers having a given convergent is an interval, so checking the
    /// two endpoints suffices outside the shared prefix.
    fn confirms(&mut self, p: &BigInt, q: &BigInt) -> bool {
        if is_convergent_of(p, q, &self.prefix) {
            return true;
        }
        let alpha = self.alpha;
        let (lo, hi) = self
            .endpoints
            .get_or_insert_with(|| (cf_from_rational(alpha.lo()), cf_from_rational(alpha.hi())));
        is_convergent_of(p, q, lo) && is_convergent_of(p, q, hi)
    }
}

pub fn check_legendre(alpha: &RationalInterval, q_max: u64) -> Result<LegendreReport> {
    let records = best_approximations(alpha, q_max)?;
    let mut oracle = ConvergentOracle {
        alpha,
        prefix: cf_from_interval(alpha, PREFIX_TERMS)?,
        endpoints: None,
    };
    let mut report = LegendreReport {
        q_max,
        confirmed: Vec::new(),
        exceptions: Vec::new(),
        undecided: Vec::new(),
    };
    for mut r in records {
        let q = BigInt::from(r.q);
        if !r.best_p.gcd(&q).is_one() {
            continue;
        }
        let bound = BigRat::new(BigInt::one(), &q * &q * 2);
        let verdict = if r.distance.hi() < &bound {
            Verdict::Below
        } else if r.distance.lo() >= &bound {
            continue;
        } else {
            Verdict::Undecided
        };
        r.omega_value = Some(RationalInterval::point(bound));
        r.verdict = Some(verdict);
        if verdict == Verdict::Undecided {
            report.undecided.push(r);
        } else if oracle.confirms(&r.best_p, &q) {
            report.confirmed.push(r);
        } else {
            report.exceptions.push(r);
        }
    }
    Ok(report)
}

/// Least `q0 >= 1` with `lambda^q > 2 C q^2` for every `q >= q0`.
///
/// `lambda^q / q^2` decreases up to some `q*` and increases after it, so
/// the answer is 1 when the inequality already holds at `q*`, and otherwise
/// the least `q > q*` where it holds.
pub fn lemma2_threshold(c: &BigRat, lambda: &BigRat) -> Result<u64> {
    if !c.is_positive() || lambda <= &BigRat::one() {
        return Err(Error::InvalidArgument(
            "lemma2_threshold needs C > 0 and lambda > 1".into(),
        ));
    }
    let (ln, ld) = (lambda.numer(), lambda.denom());
    let (cn, cd) = (c.numer(), c.denom());
    let holds = |q: u64| {
        let e = q as usize;
        let q = BigInt::from(q);
        num_traits::pow(ln.clone(), e) * cd > cn * &q * &q * 2 * num_traits::pow(ld.clone(), e)
    };
    let increasing = |q: u64| {
        let q = BigInt::from(q);
        ln * &q * &q >= ld * (&q + 1) * (&q + 1)
    };
    let q_star = least_from(1, increasing);
    if holds(q_star) {
        return Ok(1);
    }
    Ok(least_from(q_star, holds))
}

/// Least `q >= start` satisfying a predicate that is monotone from `start`.
fn least_from(start: u64, pred: impl Fn(u64) -> bool) -> u64 {
    if pred(start) {
        return start;
    }
    let (mut lo, mut step) = (start, 1u64);
    while !pred(start + step) {
        lo = start + step;
        step *= 2;
    }
    let mut hi = start + step;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// The two-sided tail bound and the approximation chain at one index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma3Row {
    pub n: usize,
    /// `tau - s_n > r_{n+1}^(t_n)`.
    pub lower20: Option<bool>,
    /// `tau - s_n < C r_{n+1}^(t_n)`.
    pub upper20: Option<bool>,
    /// `0 < tau - s_n < (beta - eps)^(-t_n) < t_n^(-2)`.
    pub ineq21: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma3Report {
    #[serde(with = "serde_fmt::rat_str")]
    pub epsilon: BigRat,
    #[serde(with = "serde_fmt::rat_str")]
    pub c: BigRat,
    pub rows: Vec<Lemma3Row>,
    /// First index from which the chain is certified on every later row.
    pub n_eps: Option<usize>,
}

impl Lemma3Report {
    pub fn report(&self) -> VerificationReport {
        let mut report = VerificationReport {
            q_max: self.rows.len() as u64,
            witnesses: Vec::new(),
            violations: Vec::new(),
            undecided: Vec::new(),
            largest_violation: None,
        };
        for row in &self.rows {
            let n = row.n as u64;
            let checks = [row.lower20, row.upper20];
            if checks.contains(&Some(false)) {
                report.violations.push(n);
            } else if checks.contains(&None) {
                report.undecided.push(n);
            } else {
                report.witnesses.push(n);
            }
        }
        if self.n_eps.is_none() {
            report
                .violations
                .extend(self.rows.last().map(|r| r.n as u64));
        }
        report.largest_violation = report.violations.iter().max().copied();
        report
    }
}

fn decide(certified_true: bool, certified_false: bool) -> Option<bool> {
    match (certified_true, certified_false) {
        (true, _) => Some(true),
        (_, true) => Some(false),
        _ => None,
    }
}

fn all_of(parts: [Option<bool>; 3]) -> Option<bool> {
    if parts.contains(&Some(false)) {
        Some(false)
    } else if parts.iter().all(|p| *p == Some(true)) {
        Some(true)
    } else {
        None
    }
}

/// Evaluates the tail bounds and the approximation chain on every index
/// strictly inside the series, against the bracket from its last sum.
pub fn check_lemma3_bounds(
    series: &SondowSeries,
    epsilon: &BigRat,
    cap: MagnitudeCap,
) -> Result<Lemma3Report> {
    if series.towers().len() < 3 {
        return Err(Error::InsufficientTerms {
            needed: 3,
            available: series.towers().len(),
        });
    }
    let (beta_lo, beta_hi) = (series.beta().lower(), series.beta().upper());
    if !epsilon.is_positive() || epsilon >= &(beta_lo - BigRat::one()) {
        return Err(Error::InvalidArgument(format!(
            "epsilon must lie in (0, beta - 1), got {}",
            rat_to_string(epsilon)
        )));
    }
    let slow = OmegaSpec::Exp(beta_lo - epsilon);
    let fast = OmegaSpec::Exp(beta_hi - epsilon);
    let tau = series.value_bracket(cap)?;
    let c = series.geometric_constant();
    let mut rows = Vec::new();
    for n in 1..series.len() {
        let s = series.partial_sum(n);
        let gap_lo = diff(tau.lo(), &s);
        let gap_hi = diff(tau.hi(), &s);
        let (lower20, upper20) = match series.term(n, cap) {
            Some(term) => {
                let bound = &c * &term;
                (
                    decide(gap_lo > term, gap_hi <= term),
                    decide(gap_hi < bound, gap_lo >= bound),
                )
            }
            None => (None, None),
        };
        let t = &series.towers()[n];
        let positive = decide(gap_lo.is_positive(), !gap_hi.is_positive());
        // gap < (beta - eps)^(-t)
        let below_power = match (fast.compare(t, &gap_hi, cap), slow.compare(t, &gap_lo, cap)) {
            (Ok(Ordering::Less), _) => Some(true),
            (_, Ok(Ordering::Greater | Ordering::Equal)) => Some(false),
            _ => None,
        };
        // (beta - eps)^(-t) < t^(-2)
        let t_sq = BigRat::new(BigInt::one(), BigInt::from(t * t));
        let chain = match (slow.compare(t, &t_sq, cap), fast.compare(t, &t_sq, cap)) {
            (Ok(Ordering::Greater), _) => Some(true),
            (_, Ok(Ordering::Less | Ordering::Equal)) => Some(false),
            _ => None,
        };
        rows.push(Lemma3Row {
            n,
            lower20,
            upper20,
            ineq21: all_of([positive, below_power, chain]),
        });
    }
    let n_eps = rows
        .iter()
        .rposition(|r| r.ineq21 != Some(true))
        .map_or(Some(0), |i| (i + 1 < rows.len()).then_some(i + 1))
        .map(|i| rows[i].n);
    Ok(Lemma3Report {
        epsilon: epsilon.clone(),
        c,
        rows,
        n_eps,
    })
}

/// Approximations of `tau` that beat `beta^(-q)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inequality11Report {
    pub q_max: u64,
    pub violations: Vec<u64>,
    pub undecided: Vec<u64>,
    pub largest_violation: Option<u64>,
    /// Whether the largest violation is unchanged at `2 q_max`; absent when
    /// the bracket of `tau` is too wide for the doubled range.
    pub stable_under_doubling: Option<bool>,
}

impl Inequality11Report {
    pub fn report(&self) -> VerificationReport {
        VerificationReport {
            q_max: self.q_max,
            witnesses: self.violations.clone(),
            violations: self.violations.clone(),
            undecided: self.undecided.clone(),
            largest_violation: self.largest_violation,
        }
    }
}

fn inequality11_at(
    tau: &RationalInterval,
    smaller: &OmegaSpec,
    larger: &OmegaSpec,
    q_max: u64,
    cap: MagnitudeCap,
) -> Result<OrderCheck> {
    // the bracket must resolve beta^(-q) at q_max
    let twice_width = tau.width() * BigInt::from(2);
    if smaller.compare(&BigUint::from(q_max), &twice_width, cap)? != Ordering::Less {
        return Err(Error::IntervalTooWide(format!(
            "bracket of tau is too wide for q_max = {q_max}"
        )));
    }
    check_order_between(tau, smaller, larger, q_max, cap)
}

/// Exhaustive check of `|tau - p/q| > beta^(-q)` for `q` up to `q_max`.
pub fn check_inequality11(
    series: &SondowSeries,
    q_max: u64,
    cap: MagnitudeCap,
) -> Result<Inequality11Report> {
    let smaller = OmegaSpec::exp(series.beta().upper().clone())?;
    let larger = OmegaSpec::exp(series.beta().lower().clone())?;
    let tau = series.value_bracket(cap)?;
    let check = inequality11_at(&tau, &smaller, &larger, q_max, cap)?;
    let violations = check.witnesses();
    let largest_violation = violations.last().copied();
    let stable_under_doubling = match q_max
        .checked_mul(2)
        .map(|q2| inequality11_at(&tau, &smaller, &larger, q2, cap))
    {
        Some(Ok(doubled)) => Some(doubled.largest_witness() == largest_violation),
        Some(Err(Error::IntervalTooWide(_))) | None => None,
        Some(Err(e)) => return Err(e),
    };
    Ok(Inequality11Report {
        q_max,
        undecided: check.undecided(),
        violations,
        largest_violation,
        stable_under_doubling,
    })
}

/// The common JSON summary of a verification command.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub q_max: u64,
    pub witnesses: Vec<u64>,
    pub violations: Vec<u64>,
    pub undecided: Vec<u64>,
    pub largest_violation: Option<u64>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rat;

    #[test]
    fn nearest_numerators_keep_both_sides_of_a_tie() {
        let half = RationalInterval::point(rat(1, 2));
        let r: Vec<_> = range_iter(nearest_numerators(&half, &BigInt::one())).collect();
        assert_eq!(r, vec![BigInt::zero(), BigInt::one()]);
        let third = RationalInterval::point(rat(1, 3));
        let r: Vec<_> = range_iter(nearest_numerators(&third, &BigInt::from(3))).collect();
        assert_eq!(r, vec![BigInt::one()]);
    }

    #[test]
    fn distance_straddling_zero_starts_at_zero() {
        let alpha = RationalInterval::new(rat(1, 3), rat(1, 2)).unwrap();
        let d = distance(&alpha, &BigInt::from(2), &BigInt::from(5));
        assert_eq!(d, RationalInterval::new(rat(0, 1), rat(1, 10)).unwrap());
        let d = distance(&alpha, &BigInt::from(1), &BigInt::from(1));
        assert_eq!(d, RationalInterval::new(rat(1, 2), rat(2, 3)).unwrap());
    }

    #[test]
    fn least_from_finds_the_boundary() {
        for target in 1..200u64 {
            assert_eq!(least_from(1, |q| q >= target), target);
        }
        assert_eq!(least_from(5, |q| q >= 3), 5);
    }

    #[test]
    fn all_of_prefers_a_definite_failure() {
        assert_eq!(all_of([Some(true), None, Some(false)]), Some(false));
        assert_eq!(all_of([Some(true), None, Some(true)]), None);
        assert_eq!(all_of([Some(true); 3]), Some(true));
    }
}
