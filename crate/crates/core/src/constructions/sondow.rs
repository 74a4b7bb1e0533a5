//! Tower series `tau = sum_n r_n^(t_{n-1})` with `t_n = b_n^(t_{n-1})`,
//! where `r_n = a_n / b_n` is a non-increasing staircase tending to `1/beta`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{stop_on_overflow, tail_precision, Capped};
use crate::error::{Error, Result};
use crate::numerics::elementary::ln_rat;
use crate::numerics::{
    ceil, int_to_uint, pow_capped, serde_fmt, uint_to_int, BigRat, MagnitudeCap, RationalInterval,
};

/// `beta` itself: exact, or bracketed when irrational.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BetaSpec {
    Rational(#[serde(with = "serde_fmt::rat_str")] BigRat),
    Bracket(RationalInterval),
}

impl BetaSpec {
    pub fn lower(&self) -> &BigRat {
        match self {
            BetaSpec::Rational(b) => b,
            BetaSpec::Bracket(i) => i.lo(),
        }
    }

    pub fn upper(&self) -> &BigRat {
        match self {
            BetaSpec::Rational(b) => b,
            BetaSpec::Bracket(i) => i.hi(),
        }
    }
}

/// Block structure of the staircase for a bracketed `beta`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StaircasePlan {
    /// Positions `k_1 < k_2 < ...` of the one bits of `1 - 1/beta` used so far.
    pub binary_exponents: Vec<u64>,
    /// Last index `n_j` of each finished block.
    pub block_bounds: Vec<usize>,
    /// `1 - S_j` for each block.
    #[serde(with = "serde_fmt::rat_vec_str")]
    pub block_values: Vec<BigRat>,
}

/// Results of re-checking the structural conditions on a computed prefix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaConditions {
    /// `1 > r_1 >= r_2 >= ... >= 1/beta`.
    pub c13: bool,
    /// `b_n` divides `b_{n+1}`.
    pub c15: bool,
    /// `b_{n+1} <= t_n` for `n >= 2`.
    pub c16: bool,
    /// `t_0 = 1`, `t_n = b_n^(t_{n-1})`.
    pub c17: bool,
    /// Each partial sum has reduced denominator exactly `t_n`.
    pub c19: bool,
}

impl LemmaConditions {
    pub fn all(&self) -> bool {
        self.c13 && self.c15 && self.c16 && self.c17 && self.c19
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SondowSeries {
    beta: BetaSpec,
    /// `r_1, r_2, ...`
    #[serde(rename = "r", with = "serde_fmt::rat_vec_str")]
    staircase: Vec<BigRat>,
    /// `t_0, t_1, ...`, one per staircase value.
    #[serde(with = "serde_fmt::uint_vec_str")]
    towers: Vec<BigUint>,
    /// `s_1, s_2, ...`, one fewer than the towers.
    #[serde(with = "serde_fmt::rat_vec_str")]
    partial_sums: Vec<BigRat>,
    #[serde(with = "serde_fmt::rat_str")]
    envelope_c: BigRat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    plan: Option<StaircasePlan>,
    conditions: LemmaConditions,
}

impl SondowSeries {
    pub fn beta(&self) -> &BetaSpec {
        &self.beta
    }

    pub fn staircase(&self) -> &[BigRat] {
        &self.staircase
    }

    pub fn towers(&self) -> &[BigUint] {
        &self.towers
    }

    pub fn partial_sums(&self) -> &[BigRat] {
        &self.partial_sums
    }

    /// Largest ratio `(tau - s_n) / r_{n+1}^(t_n)` certified on the prefix,
    /// or the geometric constant when no interior index is available.
    pub fn envelope_c(&self) -> &BigRat {
        &self.envelope_c
    }

    pub fn plan(&self) -> Option<&StaircasePlan> {
        self.plan.as_ref()
    }

    pub fn conditions(&self) -> LemmaConditions {
        self.conditions
    }

    /// Number of partial sums `N`.
    pub fn len(&self) -> usize {
        self.partial_sums.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partial_sums.is_empty()
    }

    /// `s_n`, with `s_0 = 0`.
    pub fn partial_sum(&self, n: usize) -> BigRat {
        match n {
            0 => BigRat::zero(),
            n => self.partial_sums[n - 1].clone(),
        }
    }

    /// `C = 1/(1 - r_1)`, which dominates the tail geometrically.
    pub fn geometric_constant(&self) -> BigRat {
        (BigRat::one() - &self.staircase[0]).recip()
    }

    /// `r_{n+1}^(t_n)`, the first omitted term after `s_n`, when it fits
    /// under the cap.
    pub fn term(&self, n: usize, cap: MagnitudeCap) -> Option<BigRat> {
        let r = self.staircase.get(n)?;
        let t = self.towers.get(n)?;
        let (a, b) = parts(r);
        let den = pow_capped(&b, t, cap).ok()?;
        let num = pow_capped(&a, t, cap).ok()?;
        Some(BigRat::new_raw(uint_to_int(&num), uint_to_int(&den)))
    }

    fn check_index(&self, n: usize) -> Result<()> {
        if n > self.len() {
            return Err(Error::InsufficientTerms {
                needed: n + 1,
                available: self.staircase.len(),
            });
        }
        Ok(())
    }

    /// Strict upper bound on `tau - s_n`.
    ///
    /// Each omitted term is at most `r_1` times the previous one, so the tail
    /// is below `C r_{n+1}^(t_n)`. When that power is too large to form, the
    /// bound is relaxed to `2^-K` with `r_{n+1}^j <= 1/2`, `C <= 2^c` and
    /// `K = floor(t_n / j) - c`, limited to the tail precision.
    pub fn tail_bound(&self, n: usize, cap: MagnitudeCap) -> Result<BigRat> {
        self.check_index(n)?;
        let c = self.geometric_constant();
        if let Some(term) = self.term(n, cap) {
            return Ok(term * c);
        }
        let r = &self.staircase[n];
        let t = &self.towers[n];
        let j = halving_exponent(r)?;
        let mut c_bits = 0u64;
        while BigRat::from_integer(BigInt::one() << c_bits) < c {
            c_bits += 1;
        }
        let steps = t / BigUint::from(j);
        let exact_k = if steps > BigUint::from(c_bits) {
            steps - c_bits
        } else {
            BigUint::zero()
        };
        let limit = tail_precision(t.bits(), cap);
        let k = u64::try_from(&exact_k).unwrap_or(u64::MAX).min(limit);
        if k == 0 {
            return Ok(c);
        }
        Ok(BigRat::new(BigInt::one(), BigInt::one() << k))
    }

    /// Certified bracket of `tau` read off at index `n`.
    pub fn bracket_at(&self, n: usize, cap: MagnitudeCap) -> Result<RationalInterval> {
        let s = self.partial_sum(n);
        let lo = match self.term(n, cap) {
            Some(term) => &s + term,
            None => s.clone(),
        };
        let hi = &s + self.tail_bound(n, cap)?;
        RationalInterval::new(lo, hi)
    }

    /// Tightest available bracket of `tau`, from the last partial sum.
    pub fn value_bracket(&self, cap: MagnitudeCap) -> Result<RationalInterval> {
        self.bracket_at(self.len(), cap)
    }

    fn check_conditions(&self, cap: MagnitudeCap) -> LemmaConditions {
        let r = &self.staircase;
        let recip_bound = self.beta.lower().recip();
        let c13 = r[0] < BigRat::one()
            && r.windows(2).all(|w| w[0] >= w[1])
            && r.iter().all(|x| x >= &recip_bound);
        let b: Vec<BigUint> = r.iter().map(|x| parts(x).1).collect();
        let c15 = b.windows(2).all(|w| w[1].is_multiple_of(&w[0]));
        let c16 = (2..self.towers.len())
            .filter(|&n| n < b.len())
            .all(|n| b[n] <= self.towers[n]);
        let c17 = self.towers[0].is_one()
            && (1..self.towers.len()).all(|n| {
                pow_capped(&b[n - 1], &self.towers[n - 1], cap).is_ok_and(|t| t == self.towers[n])
            });
        let c19 = self
            .partial_sums
            .iter()
            .zip(&self.towers[1..])
            .all(|(s, t)| s.denom() == &uint_to_int(t));
        LemmaConditions {
            c13,
            c15,
            c16,
            c17,
            c19,
        }
    }

    fn observed_envelope(&self, cap: MagnitudeCap) -> Result<BigRat> {
        let tau = self.value_bracket(cap)?;
        let mut best: Option<BigRat> = None;
        for n in 1..self.len() {
            if let Some(term) = self.term(n, cap) {
                let ratio = (tau.hi() - self.partial_sum(n)) / term;
                if best.as_ref().is_none_or(|b| &ratio > b) {
                    best = Some(ratio);
                }
            }
        }
        Ok(best.unwrap_or_else(|| self.geometric_constant()))
    }
}

fn parts(r: &BigRat) -> (BigUint, BigUint) {
    (
        int_to_uint(r.numer()).expect("staircase values are positive"),
        int_to_uint(r.denom()).expect("positive denominator"),
    )
}

/// Some `j >= 1` with `r^j <= 1/2`, from certified logarithms.
fn halving_exponent(r: &BigRat) -> Result<u64> {
    let ln2 = ln_rat(&BigRat::from_integer(2.into()), 64)?;
    let ln_inv = ln_rat(&r.recip(), 64)?;
    let j = ceil(&(ln2.hi() / ln_inv.lo()));
    Ok(u64::try_from(j).unwrap_or(u64::MAX).max(1))
}

/// Supplies `r_1, r_2, ...`; `next` sees the tower `t_{n-1}` just computed.
trait Staircase {
    fn first(&mut self) -> Result<BigRat>;
    fn next(&mut self, n: usize, last_tower: &BigUint) -> Result<BigRat>;
    fn plan(self) -> Option<StaircasePlan>;
}

struct Constant(BigRat);

impl Staircase for Constant {
    fn first(&mut self) -> Result<BigRat> {
        Ok(self.0.clone())
    }

    fn next(&mut self, _: usize, _: &BigUint) -> Result<BigRat> {
        Ok(self.0.clone())
    }

    fn plan(self) -> Option<StaircasePlan> {
        None
    }
}

/// Binary digits of a real known only through a bracket `[lo, hi]` in
/// `(0, 1)`. A digit is certified when it is the same for every point of
/// the bracket.
struct BinaryDigits {
    lo: BigRat,
    hi: BigRat,
    position: u64,
}

impl BinaryDigits {
    /// Position of the next one bit, scanning no further than `max_position`.
    /// `None` when no one bit occurs up to there, or the expansion ended.
    fn next_one(&mut self, max_position: u64) -> Result<Option<u64>> {
        let two = BigRat::from_integer(2.into());
        while self.position < max_position {
            if self.lo.is_zero() && self.hi.is_zero() {
                return Ok(None);
            }
            self.position += 1;
            self.lo *= &two;
            self.hi *= &two;
            let d_lo = self.lo >= BigRat::one();
            let d_hi = self.hi >= BigRat::one();
            if d_lo != d_hi {
                return Err(Error::BetaNotCertifiable {
                    digit: self.position,
                });
            }
            if d_lo {
                self.lo -= BigRat::one();
                self.hi -= BigRat::one();
                return Ok(Some(self.position));
            }
        }
        Ok(None)
    }
}

struct BinaryStaircase {
    digits: BinaryDigits,
    pending: Option<u64>,
    sum: BigRat,
    plan: StaircasePlan,
    cap: MagnitudeCap,
}

impl BinaryStaircase {
    fn take_block(&mut self, k: u64) -> BigRat {
        self.plan.binary_exponents.push(k);
        self.sum += BigRat::new(BigInt::one(), BigInt::one() << k);
        let r = BigRat::one() - &self.sum;
        self.plan.block_values.push(r.clone());
        r
    }
}

impl Staircase for BinaryStaircase {
    fn first(&mut self) -> Result<BigRat> {
        let k = self
            .digits
            .next_one(self.cap.max_bits)?
            .ok_or_else(|| Error::InvalidBeta("1 - 1/beta has no one bit under the cap".into()))?;
        Ok(self.take_block(k))
    }

    fn next(&mut self, n: usize, last_tower: &BigUint) -> Result<BigRat> {
        // switch blocks once B_{j+1} = 2^k <= T_{n-1}, i.e. k < bits(T_{n-1})
        let reach = last_tower.bits() - 1;
        if self.pending.is_none() {
            self.pending = self.digits.next_one(reach)?;
        }
        match self.pending {
            Some(k) if k <= reach => {
                self.pending = None;
                self.plan.block_bounds.push(n - 1);
                Ok(self.take_block(k))
            }
            _ => Ok(BigRat::one() - &self.sum),
        }
    }

    fn plan(self) -> Option<StaircasePlan> {
        Some(self.plan)
    }
}

fn build(
    beta: BetaSpec,
    mut stairs: impl Staircase,
    n_terms: usize,
    cap: MagnitudeCap,
) -> Result<Capped<SondowSeries>> {
    if n_terms == 0 {
        return Err(Error::InvalidArgument("n_terms must be positive".into()));
    }
    let mut overflow = None;
    let mut staircase = vec![stairs.first()?];
    let mut towers = vec![BigUint::one()];
    let mut partial_sums: Vec<BigRat> = Vec::new();
    while staircase.len() < n_terms {
        let i = towers.len();
        let (a, b) = parts(&staircase[i - 1]);
        let prev = &towers[i - 1];
        let Some(t) = stop_on_overflow(pow_capped(&b, prev, cap), &mut overflow)? else {
            break;
        };
        let num = pow_capped(&a, prev, cap)?;
        let s = partial_sums.last().cloned().unwrap_or_default()
            + BigRat::new(uint_to_int(&num), uint_to_int(&t));
        let r = stairs.next(i + 1, &t)?;
        towers.push(t);
        partial_sums.push(s);
        staircase.push(r);
    }
    let mut series = SondowSeries {
        beta,
        staircase,
        towers,
        partial_sums,
        envelope_c: BigRat::zero(),
        plan: stairs.plan(),
        conditions: LemmaConditions {
            c13: false,
            c15: false,
            c16: false,
            c17: false,
            c19: false,
        },
    };
    series.envelope_c = series.observed_envelope(cap)?;
    series.conditions = series.check_conditions(cap);
    Ok(Capped {
        value: series,
        overflow,
    })
}

/// Series for `beta = b/a` in lowest terms, with constant staircase `a/b`.
pub fn sondow_series_rational(
    a: &BigUint,
    b: &BigUint,
    n_terms: usize,
    cap: MagnitudeCap,
) -> Result<Capped<SondowSeries>> {
    if a.is_zero() || a >= b {
        return Err(Error::InvalidBeta(format!(
            "need 0 < a < b, got a = {a}, b = {b}"
        )));
    }
    if !a.gcd(b).is_one() {
        return Err(Error::InvalidBeta(format!(
            "{b}/{a} is not in lowest terms"
        )));
    }
    let r = BigRat::new(uint_to_int(a), uint_to_int(b));
    build(BetaSpec::Rational(r.recip()), Constant(r), n_terms, cap)
}

/// Series for a bracketed `beta`, with staircase `1 - S_j` built from the
/// binary expansion of `1 - 1/beta`. Blocks end at the first index where
/// the next denominator fits under the running tower.
pub fn sondow_series_irrational(
    beta: &RationalInterval,
    n_terms: usize,
    cap: MagnitudeCap,
) -> Result<Capped<SondowSeries>> {
    if beta.lo() <= &BigRat::one() {
        return Err(Error::InvalidBeta(format!("need beta > 1, got {beta}")));
    }
    let digits = BinaryDigits {
        lo: BigRat::one() - beta.lo().recip(),
        hi: BigRat::one() - beta.hi().recip(),
        position: 0,
    };
    let stairs = BinaryStaircase {
        digits,
        pending: None,
        sum: BigRat::zero(),
        plan: StaircasePlan {
            binary_exponents: Vec::new(),
            block_bounds: Vec::new(),
            block_values: Vec::new(),
        },
        cap,
    };
    build(BetaSpec::Bracket(beta.clone()), stairs, n_terms, cap)
}

impl SondowSeries {
    /// `b_1, b_2, ...`, the staircase denominators.
    pub fn staircase_denominators(&self) -> Vec<BigUint> {
        self.staircase.iter().map(|r| parts(r).1).collect()
    }

    /// Exact value of `u_n`, the numerator of `s_n` over `t_n`.
    pub fn numerators(&self) -> Vec<BigUint> {
        self.partial_sums
            .iter()
            .map(|s| int_to_uint(s.numer()).expect("positive sums"))
            .collect()
    }

    /// `tau - s_n` is bracketed by `[r_{n+1}^(t_n), C r_{n+1}^(t_n)]` for
    /// interior indices; returns the geometric bound as a rational.
    pub fn geometric_bound(&self, n: usize, cap: MagnitudeCap) -> Option<BigRat> {
        self.term(n, cap).map(|t| t * self.geometric_constant())
    }
}
