//! Finite-prefix estimates of the irrationality exponent and base.
//!
//! Every value is an interval enclosure built from certified logarithms, so
//! each entry carries an honest error bound. Nothing here claims a limit:
//! `tail_sup` is the largest value over a trailing window of the prefix.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::contfrac::{ContinuedFraction, Convergent, Tail};
use crate::error::{Error, Result};
use crate::numerics::elementary::{exp, ln, ln_rat, ln_uint, round_outward};
use crate::numerics::{
    int_to_uint, parse_rat, pow_capped, rat_from_uint, rat_to_string, to_decimal, to_scientific,
    uint_to_int, BigRat, MagnitudeCap, RationalInterval,
};

/// Approximation order `omega(x)`: `x^(-mu)` or `beta^(-x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OmegaSpec {
    Power(BigRat),
    Exp(BigRat),
}

impl OmegaSpec {
    pub fn power(mu: BigRat) -> Result<Self> {
        if mu < BigRat::from_integer(2.into()) {
            return Err(Error::InvalidOmega(format!(
                "power form needs mu >= 2, got {}",
                rat_to_string(&mu)
            )));
        }
        Ok(Self::Power(mu))
    }

    pub fn exp(beta: BigRat) -> Result<Self> {
        if beta <= BigRat::one() {
            return Err(Error::InvalidOmega(format!(
                "exponential form needs beta > 1, got {}",
                rat_to_string(&beta)
            )));
        }
        Ok(Self::Exp(beta))
    }

    /// Compares `value` with `omega(q)` exactly.
    pub fn compare(&self, q: &BigUint, value: &BigRat, cap: MagnitudeCap) -> Result<Ordering> {
        if !value.is_positive() {
            return Ok(Ordering::Less);
        }
        let a = int_to_uint(value.numer())?;
        let b = int_to_uint(value.denom())?;
        match self {
            // a/b vs (d/c)^q  <=>  a c^q vs b d^q
            OmegaSpec::Exp(beta) => {
                let (c, d) = rat_parts(beta);
                let lhs = a * pow_capped(&c, q, cap)?;
                let rhs = b * pow_capped(&d, q, cap)?;
                Ok(lhs.cmp(&rhs))
            }
            // a/b vs q^(-m/k)  <=>  a^k q^m vs b^k
            OmegaSpec::Power(mu) => {
                let (m, k) = rat_parts(mu);
                let lhs = pow_capped(&a, &k, cap)? * pow_capped(q, &m, cap)?;
                let rhs = pow_capped(&b, &k, cap)?;
                Ok(lhs.cmp(&rhs))
            }
        }
    }

    /// `omega(q)`, exact for the exponential form and for perfect powers,
    /// otherwise bracketed by integer roots.
    pub fn value_at(&self, q: &BigUint, cap: MagnitudeCap) -> Result<RationalInterval> {
        match self {
            OmegaSpec::Exp(beta) => {
                let (c, d) = rat_parts(beta);
                let num = pow_capped(&d, q, cap)?;
                let den = pow_capped(&c, q, cap)?;
                Ok(RationalInterval::point(BigRat::new(
                    uint_to_int(&num),
                    uint_to_int(&den),
                )))
            }
            OmegaSpec::Power(mu) => {
                let (m, k) = rat_parts(mu);
                let (lo_root, exact) = kth_root(&pow_capped(q, &m, cap)?, &k)?;
                let hi = BigRat::new(BigInt::one(), uint_to_int(&lo_root));
                if exact {
                    Ok(RationalInterval::point(hi))
                } else {
                    let lo = BigRat::new(BigInt::one(), uint_to_int(&lo_root) + 1);
                    RationalInterval::new(lo, hi)
                }
            }
        }
    }

    /// `1 + floor(1 / (omega(q) q^2))`.
    pub fn jarnik_quotient(&self, q: &BigUint, cap: MagnitudeCap) -> Result<BigUint> {
        let q2 = q * q;
        match self {
            OmegaSpec::Exp(beta) => {
                let (c, d) = rat_parts(beta);
                let num = pow_capped(&c, q, cap)?;
                let den = pow_capped(&d, q, cap)? * q2;
                Ok(num / den + 1u32)
            }
            OmegaSpec::Power(mu) => {
                let (m, k) = rat_parts(mu);
                let two_k = &k * 2u32;
                if m <= two_k {
                    return Err(Error::InvalidOmega(format!(
                        "x^(-{}) is not o(x^-2)",
                        rat_to_string(mu)
                    )));
                }
                let (root, _) = kth_root(&pow_capped(q, &(m - two_k), cap)?, &k)?;
                Ok(root + 1u32)
            }
        }
    }
}

fn rat_parts(r: &BigRat) -> (BigUint, BigUint) {
    (
        r.numer().to_biguint().expect("positive"),
        r.denom().to_biguint().expect("positive"),
    )
}

/// Floor of the `k`-th root and whether it is exact.
fn kth_root(n: &BigUint, k: &BigUint) -> Result<(BigUint, bool)> {
    let k = k
        .to_u32()
        .ok_or_else(|| Error::InvalidOmega("root index too large".into()))?;
    let r = n.nth_root(k);
    let exact = &num_traits::pow(r.clone(), k as usize) == n;
    Ok((r, exact))
}

impl fmt::Display for OmegaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (tag, r) = match self {
            OmegaSpec::Power(mu) => ("pow", mu),
            OmegaSpec::Exp(beta) => ("exp", beta),
        };
        if r.is_integer() {
            write!(f, "{tag}:{}", r.numer())
        } else {
            write!(f, "{tag}:{}", rat_to_string(r))
        }
    }
}

impl FromStr for OmegaSpec {
    type Err = Error;

    /// `exp:B` or `pow:M` with `B`, `M` integers or `p/q`.
    fn from_str(s: &str) -> Result<Self> {
        let (tag, value) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected exp:B or pow:M, got {s:?}")))?;
        let value = parse_rat(value)?;
        match tag {
            "exp" => OmegaSpec::exp(value),
            "pow" => OmegaSpec::power(value),
            _ => Err(Error::Parse(format!("unknown omega form {tag:?}"))),
        }
    }
}

impl Serialize for OmegaSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for OmegaSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MeasureKind {
    Exponent,
    Base,
}

/// An enclosure reported with a decimal midpoint and an error bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certified(pub RationalInterval);

impl Certified {
    pub fn value(&self) -> BigRat {
        self.0.midpoint()
    }

    /// Half-width: the true value is within this distance of [`value`](Self::value).
    pub fn err(&self) -> BigRat {
        self.0.width() / BigRat::from_integer(2.into())
    }
}

#[derive(Serialize, Deserialize)]
struct CertifiedJson {
    value: String,
    err: String,
    #[serde(with = "crate::numerics::serde_fmt::rat_str")]
    lo: BigRat,
    #[serde(with = "crate::numerics::serde_fmt::rat_str")]
    hi: BigRat,
}

impl Serialize for Certified {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CertifiedJson {
            value: to_decimal(&self.value(), 30),
            err: to_scientific(&self.err(), 3, true),
            lo: self.0.lo().clone(),
            hi: self.0.hi().clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Certified {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = CertifiedJson::deserialize(d)?;
        RationalInterval::new(j.lo, j.hi)
            .map(Certified)
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasureEntry {
    pub n: usize,
    /// Form using `q_{n+1}`.
    #[serde(flatten)]
    pub value: Certified,
    /// Form using `b_{n+1}`.
    pub alternative: Certified,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasureEstimate {
    pub kind: MeasureKind,
    pub entries: Vec<MeasureEntry>,
    pub tail_sup: Certified,
    pub window: usize,
}

impl MeasureEstimate {
    pub fn entry(&self, n: usize) -> Option<&MeasureEntry> {
        self.entries.iter().find(|e| e.n == n)
    }

    fn new(kind: MeasureKind, entries: Vec<MeasureEntry>, window: Option<usize>) -> Self {
        let window = window
            .unwrap_or(entries.len().div_ceil(2))
            .clamp(1, entries.len().max(1));
        let tail = &entries[entries.len() - window..];
        let lo = tail.iter().map(|e| e.value.0.lo()).max().expect("nonempty");
        let hi = tail.iter().map(|e| e.value.0.hi()).max().expect("nonempty");
        let tail_sup = Certified(RationalInterval::hull(lo.clone(), hi.clone()));
        Self {
            kind,
            entries,
            tail_sup,
            window,
        }
    }
}

fn irrational_prefix(cf: &ContinuedFraction) -> Result<Vec<Convergent>> {
    if cf.tail() == Tail::Exact {
        return Err(Error::RationalValue);
    }
    let convs = cf.convergents();
    if convs.len() < 3 {
        return Err(Error::InsufficientTerms {
            needed: 3,
            available: convs.len(),
        });
    }
    Ok(convs)
}

fn to_uint(n: &BigInt) -> BigUint {
    n.to_biguint().expect("denominators are positive")
}

fn out_bits(prec: u32) -> u64 {
    prec as u64 + 8
}

/// `1 + ln q_{n+1} / ln q_n` for every `n` with `q_n >= 2`.
pub fn exponent_estimates(cf: &ContinuedFraction, prec: u32) -> Result<MeasureEstimate> {
    exponent_estimates_windowed(cf, prec, None)
}

pub fn exponent_estimates_windowed(
    cf: &ContinuedFraction,
    prec: u32,
    window: Option<usize>,
) -> Result<MeasureEstimate> {
    let convs = irrational_prefix(cf)?;
    let one = RationalInterval::point(BigRat::one());
    let two = RationalInterval::point(BigRat::from_integer(2.into()));
    let mut entries = Vec::new();
    for n in 0..convs.len() - 1 {
        if convs[n].q.is_one() {
            continue;
        }
        let ln_q = ln_uint(&to_uint(&convs[n].q), prec)?;
        let ln_next = ln_uint(&to_uint(&convs[n + 1].q), prec)?;
        let ln_b = ln_uint(&cf.quotients()[n], prec)?;
        let value = one.add(&ln_next.div(&ln_q)?);
        let alternative = two.add(&ln_b.div(&ln_q)?);
        entries.push(MeasureEntry {
            n,
            value: Certified(round_outward(&value, out_bits(prec))),
            alternative: Certified(round_outward(&alternative, out_bits(prec))),
        });
    }
    if entries.is_empty() {
        return Err(Error::InsufficientTerms {
            needed: 3,
            available: convs.len(),
        });
    }
    Ok(MeasureEstimate::new(MeasureKind::Exponent, entries, window))
}

/// `exp(ln q_{n+1} / q_n)` for every available `n`.
pub fn base_estimates(cf: &ContinuedFraction, prec: u32) -> Result<MeasureEstimate> {
    base_estimates_windowed(cf, prec, None)
}

pub fn base_estimates_windowed(
    cf: &ContinuedFraction,
    prec: u32,
    window: Option<usize>,
) -> Result<MeasureEstimate> {
    let convs = irrational_prefix(cf)?;
    let mut entries = Vec::new();
    for n in 0..convs.len() - 1 {
        let q = BigRat::from_integer(convs[n].q.clone());
        let ln_next = ln_uint(&to_uint(&convs[n + 1].q), prec)?;
        let ln_b = ln_uint(&cf.quotients()[n], prec)?;
        let value = exp(
            &round_outward(&ln_next.scale(&q.recip()), out_bits(prec)),
            prec,
        );
        let alternative = exp(
            &round_outward(&ln_b.scale(&q.recip()), out_bits(prec)),
            prec,
        );
        entries.push(MeasureEntry {
            n,
            value: Certified(round_outward(&value, out_bits(prec))),
            alternative: Certified(round_outward(&alternative, out_bits(prec))),
        });
    }
    Ok(MeasureEstimate::new(MeasureKind::Base, entries, window))
}

/// The two exponent forms differ by `ln(q_{n+1} / (b_{n+1} q_n)) / ln q_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormIdentity {
    pub n: usize,
    /// `q_{n+1} / (b_{n+1} q_n)`, which equals `1 + q_{n-1}/(b_{n+1} q_n)`.
    pub ratio: BigRat,
    /// Enclosure of `(1 + ln q_{n+1}/ln q_n) - (2 + ln b_{n+1}/ln q_n)`.
    pub difference: RationalInterval,
    /// Enclosure of the correction term.
    pub correction: RationalInterval,
}

impl FormIdentity {
    pub fn ratio_in_range(&self) -> bool {
        self.ratio > BigRat::one() && self.ratio <= BigRat::from_integer(2.into())
    }

    /// Both enclosures overlap and the ratio is in `(1, 2]`.
    pub fn holds(&self) -> bool {
        self.ratio_in_range() && self.difference.intersect(&self.correction).is_some()
    }
}

pub fn exponent_form_identity(cf: &ContinuedFraction, prec: u32) -> Result<Vec<FormIdentity>> {
    let convs = irrational_prefix(cf)?;
    let mut out = Vec::new();
    for n in 0..convs.len() - 1 {
        if convs[n].q.is_one() {
            continue;
        }
        let b = uint_to_int(&cf.quotients()[n]);
        let ratio = BigRat::new(convs[n + 1].q.clone(), &b * &convs[n].q);
        let ln_q = ln_uint(&to_uint(&convs[n].q), prec)?;
        let ln_next = ln_uint(&to_uint(&convs[n + 1].q), prec)?;
        let ln_b = ln_uint(&to_uint(&b), prec)?;
        let difference = RationalInterval::point(-BigRat::one())
            .add(&ln_next.div(&ln_q)?)
            .sub(&ln_b.div(&ln_q)?);
        let correction = ln_rat(&ratio, prec)?.div(&ln_q)?;
        out.push(FormIdentity {
            n,
            ratio,
            difference,
            correction,
        });
    }
    Ok(out)
}

/// `lambda` with `|alpha - p/q| = q^(-lambda)` (exponent) or `lambda^(-q)` (base).
pub fn lambda_diagnostics(
    alpha: &RationalInterval,
    conv: &Convergent,
    kind: MeasureKind,
    prec: u32,
) -> Result<RationalInterval> {
    let d = alpha.distance_to(&conv.value());
    if !d.is_positive() {
        return Err(Error::IntervalTooWide(format!(
            "|alpha - {}/{}| is not bounded away from zero",
            conv.p, conv.q
        )));
    }
    let neg_ln_d = ln(&d, prec)?.neg();
    let q = to_uint(&conv.q);
    match kind {
        MeasureKind::Exponent => {
            if q.is_one() {
                return Err(Error::InvalidArgument(
                    "exponent diagnostic needs q >= 2".into(),
                ));
            }
            neg_ln_d.div(&ln_uint(&q, prec)?)
        }
        MeasureKind::Base => {
            let scaled = neg_ln_d.scale(&rat_from_uint(&q).recip());
            Ok(exp(&round_outward(&scaled, out_bits(prec)), prec))
        }
    }
}

/// `F_0 = 0, F_1 = F_2 = 1`.
pub fn fibonacci(n: u64) -> BigUint {
    let (mut a, mut b) = (BigUint::zero(), BigUint::one());
    for _ in 0..n {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    a
}

/// Number of monomials in `q_n` as a polynomial in `b_1..b_n`: `F_{n+1}`,
/// which is `q_n` itself when every quotient is 1.
fn monomial_count(n: usize) -> BigUint {
    fibonacci(n as u64 + 1)
}

/// `(f + b_1...b_n - 1, f b_1...b_n)` with `f = F_{n+1}`, which brackets `q_n`.
pub fn q_sandwich_bounds(quotients: &[BigUint], cap: MagnitudeCap) -> Result<(BigUint, BigUint)> {
    if quotients.is_empty() {
        return Err(Error::InsufficientTerms {
            needed: 1,
            available: 0,
        });
    }
    if quotients.iter().any(|b| b.is_zero()) {
        return Err(Error::InvalidArgument("quotients must be >= 1".into()));
    }
    let mut prod = BigUint::one();
    for b in quotients {
        prod = cap.mul(&prod, b)?;
    }
    let f = monomial_count(quotients.len());
    let lower = &f + &prod - 1u32;
    let upper = cap.mul(&f, &prod)?;
    Ok((lower, upper))
}

/// The four quantities bounding `mu - 2` and `ln beta` from below and above,
/// with `f_n = F_{n+1}` the number of monomials in `q_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundEntry {
    pub n: usize,
    /// `ln b_{n+1} / ln(f_n prod)`; absent when the product is 1.
    pub exponent_lower: Option<RationalInterval>,
    /// `ln b_{n+1} / ln(f_n + prod)`.
    pub exponent_upper: RationalInterval,
    /// `ln b_{n+1} / (f_n prod)`.
    pub base_lower: RationalInterval,
    /// `ln b_{n+1} / (f_n + prod)`.
    pub base_upper: RationalInterval,
}

pub fn corollary2_bound_estimates(
    cf: &ContinuedFraction,
    prec: u32,
    cap: MagnitudeCap,
) -> Result<Vec<BoundEntry>> {
    let b = cf.quotients();
    if b.len() < 2 {
        return Err(Error::InsufficientTerms {
            needed: 2,
            available: b.len(),
        });
    }
    let mut out = Vec::new();
    let mut prod = BigUint::one();
    for n in 1..b.len() {
        prod = cap.mul(&prod, &b[n - 1])?;
        let f = monomial_count(n);
        let ln_b = ln_uint(&b[n], prec)?;
        let fp = cap.mul(&f, &prod)?;
        let fs = &f + &prod;
        let exponent_lower = if fp.is_one() {
            None
        } else {
            Some(ln_b.div(&ln_uint(&fp, prec)?)?)
        };
        out.push(BoundEntry {
            n,
            exponent_lower,
            exponent_upper: ln_b.div(&ln_uint(&fs, prec)?)?,
            base_lower: ln_b.scale(&rat_from_uint(&fp).recip()),
            base_upper: ln_b.scale(&rat_from_uint(&fs).recip()),
        });
    }
    Ok(out)
}

/// Per-index growth ratios, with `f_n = F_{n+1}` as in [`BoundEntry`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthEntry {
    pub n: usize,
    /// `ln b_{n+1} / ln f_n`; absent when `f_n = 1`.
    pub log_ratio: Option<RationalInterval>,
    /// `ln b_{n+1} / f_n`.
    pub linear_ratio: RationalInterval,
}

/// Growth diagnostics for `n >= 1`. Empty when fewer than two quotients.
pub fn corollary3_quantities(cf: &ContinuedFraction, prec: u32) -> Vec<GrowthEntry> {
    let b = cf.quotients();
    (1..b.len())
        .map(|n| {
            let f = monomial_count(n);
            let ln_b = ln_uint(&b[n], prec).expect("quotients are positive");
            let log_ratio = (!f.is_one()).then(|| {
                ln_b.div(&ln_uint(&f, prec).expect("positive"))
                    .expect("ln F > 0")
            });
            GrowthEntry {
                n,
                log_ratio,
                linear_ratio: ln_b.scale(&rat_from_uint(&f).recip()),
            }
        })
        .collect()
}
