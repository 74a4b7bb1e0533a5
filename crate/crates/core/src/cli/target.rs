//! Named numbers accepted on the command line and how each one becomes a
//! continued-fraction prefix or a certified bracket.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constructions::{
    e_pattern, example_family, golden_mean, jarnik_quotients, sondow_series_irrational,
    sondow_series_rational, Capped, Family, SondowSeries,
};
use crate::contfrac::{
    cf_from_interval, cf_from_rational, continuation_bracket, ContinuedFraction, Tail,
};
use crate::error::{Error, Result};
use crate::measures::OmegaSpec;
use crate::numerics::{int_to_uint, parse_rat, rat, BigRat, MagnitudeCap, RationalInterval};

/// Series terms used for tau targets unless `--terms` says otherwise.
pub const DEFAULT_SERIES_TERMS: usize = 5;
/// Longest prefix generated while tightening a bracket for a given `q_max`.
const MAX_AUTO_TERMS: usize = 1 << 14;
/// Quotients requested from cap-limited generators when no length is given.
const CAPPED_AUTO_TERMS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Beta {
    Rational { a: BigUint, b: BigUint },
    Bracket(RationalInterval),
}

impl Beta {
    /// `--beta` value: `b/a` read as the number beta itself.
    pub fn parse_value(text: &str) -> Result<Self> {
        let beta = parse_rat(text)?;
        Self::from_rat(beta)
    }

    pub fn parse_decimal(text: &str) -> Result<Self> {
        Ok(Beta::Bracket(RationalInterval::from_decimal(text, 0)?))
    }

    fn from_rat(beta: BigRat) -> Result<Self> {
        if beta <= BigRat::one() {
            return Err(Error::InvalidBeta(format!(
                "beta must exceed 1, got {beta}"
            )));
        }
        Ok(Beta::Rational {
            a: int_to_uint(beta.denom())?,
            b: int_to_uint(beta.numer())?,
        })
    }

    pub fn series(&self, n_terms: usize, cap: MagnitudeCap) -> Result<Capped<SondowSeries>> {
        match self {
            Beta::Rational { a, b } => sondow_series_rational(a, b, n_terms, cap),
            Beta::Bracket(x) => sondow_series_irrational(x, n_terms, cap),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Target {
    Jarnik(OmegaSpec),
    Tau(Beta),
    Family(Family),
    Phi,
    EPattern,
    Value(BigRat),
    Decimal(String, RationalInterval),
    Random(usize),
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let lower = text.trim().to_ascii_lowercase();
        if let Some(rest) = lower.strip_prefix("jarnik:") {
            return Ok(Target::Jarnik(rest.parse()?));
        }
        if let Some(rest) = lower.strip_prefix("tau:") {
            return parse_tau(rest).map(Target::Tau);
        }
        if let Some(rest) = lower.strip_prefix("random:") {
            let len = rest
                .parse()
                .map_err(|_| Error::Parse(format!("bad length in {text:?}")))?;
            return Ok(Target::Random(len));
        }
        match lower.as_str() {
            "theta2" => return Ok(Target::Jarnik(OmegaSpec::Exp(rat(2, 1)))),
            "phi" | "golden" => return Ok(Target::Phi),
            "e" | "e-pattern" => return Ok(Target::EPattern),
            _ => {}
        }
        if let Ok(family) = lower.parse::<Family>() {
            return Ok(Target::Family(family));
        }
        if lower.contains('.') {
            let x = RationalInterval::from_decimal(&lower, 0)?;
            return Ok(Target::Decimal(lower, x));
        }
        parse_rat(&lower)
            .map(Target::Value)
            .map_err(|_| Error::Parse(format!("unknown target {text:?}")))
    }
}

/// `tau:1/2` and `tau:2` both name tau_2: a fraction below 1 is `1/beta`.
fn parse_tau(text: &str) -> Result<Beta> {
    if text.contains('.') {
        return Beta::parse_decimal(text);
    }
    let r = parse_rat(text)?;
    if !r.is_positive() {
        return Err(Error::InvalidBeta(format!(
            "tau:{text} needs a positive value"
        )));
    }
    Beta::from_rat(if r < BigRat::one() { r.recip() } else { r })
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Jarnik(OmegaSpec::Exp(b)) if b == &rat(2, 1) => write!(f, "theta2"),
            Target::Jarnik(omega) => write!(f, "jarnik:{omega}"),
            Target::Tau(Beta::Rational { a, b }) => write!(f, "tau:{b}/{a}"),
            Target::Tau(Beta::Bracket(x)) => write!(f, "tau:{x}"),
            Target::Family(family) => write!(f, "{family}"),
            Target::Phi => write!(f, "phi"),
            Target::EPattern => write!(f, "e-pattern"),
            Target::Value(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Target::Decimal(text, _) => write!(f, "{text}"),
            Target::Random(len) => write!(f, "random:{len}"),
        }
    }
}

/// Settings shared by every command.
#[derive(Debug, Clone, Copy)]
pub struct Context {
    pub cap: MagnitudeCap,
    pub log_precision_bits: u32,
    pub seed: u64,
}

/// A certified bracket of the target and, when available, an expansion
/// prefix shared by every point of the bracket.
pub struct Resolved {
    pub alpha: RationalInterval,
    pub prefix: ContinuedFraction,
}

impl Target {
    /// Default prefix length for commands that take `--terms`.
    pub fn default_terms(&self) -> usize {
        match self {
            Target::Jarnik(_) | Target::Family(_) => 5,
            _ => 30,
        }
    }

    pub fn series(&self, n_terms: usize, ctx: &Context) -> Result<Capped<SondowSeries>> {
        match self {
            Target::Tau(beta) => beta.series(n_terms, ctx.cap),
            other => Err(Error::InvalidArgument(format!(
                "{other} is not a tau target; use tau:<beta>"
            ))),
        }
    }

    /// The first `terms` quotients, or fewer with the overflow that stopped
    /// generation.
    pub fn continued_fraction(
        &self,
        terms: usize,
        ctx: &Context,
    ) -> Result<Capped<ContinuedFraction>> {
        let cap = ctx.cap;
        match self {
            Target::Jarnik(omega) => jarnik_quotients(omega, terms, cap),
            Target::Family(family) => example_family(*family, terms, cap),
            Target::Phi => Ok(Capped::complete(golden_mean(terms))),
            Target::EPattern => Ok(Capped::complete(e_pattern(terms))),
            Target::Random(len) => Ok(Capped::complete(random_prefix(*len, ctx.seed))),
            Target::Value(r) => {
                let cf = cf_from_rational(r);
                Ok(Capped::complete(if cf.len() > terms {
                    cf.truncated(terms)
                } else {
                    cf
                }))
            }
            Target::Decimal(_, x) => Ok(Capped::complete(cf_from_interval(x, terms)?)),
            Target::Tau(_) => {
                let x = self
                    .series(DEFAULT_SERIES_TERMS + 1, ctx)?
                    .value
                    .value_bracket(cap)?;
                Ok(Capped::complete(cf_from_interval(&x, terms)?))
            }
        }
    }

    /// A bracket tight enough for `q_max`, and a prefix whose convergents go
    /// past `q_max` whenever the target allows it.
    pub fn resolve(&self, q_max: u64, terms: Option<usize>, ctx: &Context) -> Result<Resolved> {
        let shared_prefix = |alpha: RationalInterval| -> Result<Resolved> {
            let prefix = cf_from_interval(&alpha, MAX_AUTO_TERMS)?;
            Ok(Resolved { alpha, prefix })
        };
        match self {
            Target::Tau(_) => {
                let n = terms.unwrap_or(DEFAULT_SERIES_TERMS);
                shared_prefix(self.series(n, ctx)?.value.value_bracket(ctx.cap)?)
            }
            Target::Value(r) => Ok(Resolved {
                alpha: RationalInterval::point(r.clone()),
                prefix: cf_from_rational(r),
            }),
            Target::Decimal(_, x) => shared_prefix(x.clone()),
            Target::Jarnik(_) | Target::Family(_) | Target::Random(_) => {
                let n = terms.unwrap_or(CAPPED_AUTO_TERMS);
                let prefix = self.continued_fraction(n, ctx)?.value;
                Ok(Resolved {
                    alpha: continuation_bracket(&prefix),
                    prefix,
                })
            }
            Target::Phi | Target::EPattern => {
                let mut n = terms.unwrap_or(8);
                loop {
                    let prefix = self.continued_fraction(n, ctx)?.value;
                    let alpha = continuation_bracket(&prefix);
                    if terms.is_some() || n >= MAX_AUTO_TERMS || reaches(&prefix, &alpha, q_max) {
                        return Ok(Resolved { alpha, prefix });
                    }
                    n *= 2;
                }
            }
        }
    }
}

/// Bracket narrower than `1/(2 q_max^2)` and two convergents beyond `q_max`.
fn reaches(prefix: &ContinuedFraction, alpha: &RationalInterval, q_max: u64) -> bool {
    let q = BigInt::from(q_max);
    let tight = alpha.width() * BigRat::from_integer(&q * &q * 2) < BigRat::one();
    let beyond = prefix.convergents().iter().filter(|c| c.q > q).count();
    tight && beyond >= 2
}

/// `[0; b_1, ..., b_len]` with quotients uniform in `1..=9`.
pub fn random_prefix(len: usize, seed: u64) -> ContinuedFraction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let quotients = (0..len)
        .map(|_| BigUint::from(rng.gen_range(1u32..=9)))
        .collect();
    ContinuedFraction::new(BigInt::from(0), quotients, Tail::Truncated).expect("quotients >= 1")
}
