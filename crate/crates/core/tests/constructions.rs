use irrmeasure::constructions::*;
use irrmeasure::contfrac::{continuation_bracket, ContinuedFraction, Tail};
use irrmeasure::measures::OmegaSpec;
use irrmeasure::numerics::{rat, BigRat, MagnitudeCap, RationalInterval};
use irrmeasure::Error;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Pow};

fn u(n: u64) -> BigUint {
    BigUint::from(n)
}

fn cap() -> MagnitudeCap {
    MagnitudeCap::default()
}

fn theta2_b5() -> BigUint {
    (BigUint::one() << 191usize) / u(191 * 191) + 1u32
}

fn phi_bracket() -> RationalInterval {
    continuation_bracket(&golden_mean(80))
}

#[test]
fn jarnik_exp2_reproduces_theta2() {
    let out = jarnik_quotients(&OmegaSpec::Exp(rat(2, 1)), 5, cap()).unwrap();
    assert!(out.is_complete());
    let cf = out.value;
    let expected = [u(3), u(1), u(2), u(17), theta2_b5()];
    assert_eq!(cf.quotients(), &expected[..]);
    assert_eq!(cf.convergents()[4].q, BigInt::from(191));
    let ten52: BigUint = Pow::pow(u(10), 52u32);
    assert!(cf.quotients()[4] > ten52);
}

#[test]
fn jarnik_exp2_stops_on_cap() {
    let out = jarnik_quotients(&OmegaSpec::Exp(rat(2, 1)), 8, cap()).unwrap();
    assert_eq!(out.value.len(), 5);
    assert!(matches!(
        out.overflow,
        Some(Error::MagnitudeOverflow { .. })
    ));
    assert_eq!(out.value.tail(), Tail::Truncated);
    assert!(out.into_result().is_err());
}

#[test]
fn jarnik_cubic_power() {
    let out = jarnik_quotients(&OmegaSpec::Power(rat(3, 1)), 6, cap()).unwrap();
    let cf = out.value;
    let q: Vec<BigInt> = cf.convergents().into_iter().map(|c| c.q).collect();
    // b_{n+1} = 1 + q_n
    for (n, b) in cf.quotients().iter().enumerate() {
        assert_eq!(BigInt::from(b.clone()), &q[n] + 1);
    }
    assert_eq!(&cf.quotients()[..3], &[u(2), u(3), u(8)]);
    assert_eq!(q[2], BigInt::from(7));
}

#[test]
fn jarnik_rejects_square_power() {
    assert!(matches!(
        jarnik_quotients(&OmegaSpec::Power(rat(2, 1)), 3, cap()),
        Err(Error::InvalidOmega(_))
    ));
}

#[test]
fn jarnik_condition_on_theta2() {
    let omega = OmegaSpec::Exp(rat(2, 1));
    let cf = jarnik_quotients(&omega, 5, cap()).unwrap().value;
    let report = verify_jarnik_condition(&cf, &omega, cap());
    assert!(report.is_complete());
    assert_eq!(report.value.len(), 5);
    assert!(report.value.iter().all(|c| c.exceeds_one));
    assert_eq!(
        report.value[3].value,
        RationalInterval::point(rat(2057, 2048))
    );
    // the excess shrinks toward zero along the prefix
    let last = &report.value[4];
    assert!(last.excess().hi() < &rat(1, 1000));
}

#[test]
fn jarnik_condition_fails_for_golden_mean() {
    let omega = OmegaSpec::Exp(rat(2, 1));
    let report = verify_jarnik_condition(&golden_mean(8), &omega, cap()).value;
    assert_eq!(report[5].value, RationalInterval::point(rat(1, 4)));
    assert!(!report[5].exceeds_one);
    assert!(report[3].exceeds_one);
    // exactly 1 at n = 2 is not strictly above
    assert_eq!(report[2].value, RationalInterval::point(rat(1, 1)));
    assert!(!report[2].exceeds_one);
    let single = ContinuedFraction::new(BigInt::from(3), vec![], Tail::Truncated).unwrap();
    assert!(verify_jarnik_condition(&single, &omega, cap())
        .value
        .is_empty());
}

#[test]
fn fractional_power_condition_is_decided_exactly() {
    let omega = OmegaSpec::Power(rat(5, 2));
    let cf = jarnik_quotients(&omega, 6, cap()).unwrap().value;
    let report = verify_jarnik_condition(&cf, &omega, cap()).value;
    assert_eq!(report.len(), 6);
    assert!(report.iter().all(|c| c.exceeds_one));
}

#[test]
fn tau2_structure() {
    let s = sondow_series_rational(&u(1), &u(2), 5, cap()).unwrap();
    assert!(s.is_complete());
    let s = s.value;
    assert_eq!(s.towers(), &[u(1), u(2), u(4), u(16), u(65536)]);
    assert_eq!(
        s.partial_sums(),
        &[rat(1, 2), rat(3, 4), rat(13, 16), rat(53249, 65536)]
    );
    assert!(s.staircase().iter().all(|r| r == &rat(1, 2)));
    assert!(s.conditions().all());
    assert_eq!(s.beta(), &BetaSpec::Rational(rat(2, 1)));
}

#[test]
fn tau_three_halves_structure() {
    let s = sondow_series_rational(&u(2), &u(3), 4, cap())
        .unwrap()
        .value;
    let t3: BigUint = Pow::pow(u(3), 27u32);
    assert_eq!(s.towers(), &[u(1), u(3), u(27), t3.clone()]);
    let r = rat(2, 3);
    let s3 = rat(26, 27) + Pow::pow(&r, 27u32);
    assert_eq!(s.partial_sums(), &[rat(2, 3), rat(26, 27), s3]);
    assert_eq!(s.partial_sums()[2].denom(), &BigInt::from(t3));
    assert!(s.conditions().all());
}

#[test]
fn sondow_rejects_bad_beta() {
    assert!(matches!(
        sondow_series_rational(&u(3), &u(2), 3, cap()),
        Err(Error::InvalidBeta(_))
    ));
    assert!(matches!(
        sondow_series_rational(&u(2), &u(4), 3, cap()),
        Err(Error::InvalidBeta(_))
    ));
    let below_one = RationalInterval::new(rat(1, 2), rat(3, 4)).unwrap();
    assert!(matches!(
        sondow_series_irrational(&below_one, 3, cap()),
        Err(Error::InvalidBeta(_))
    ));
}

#[test]
fn sondow_stops_at_cap() {
    let out = sondow_series_rational(&u(1), &u(2), 9, cap()).unwrap();
    // t_5 = 2^65536 fits, t_6 does not
    assert_eq!(out.value.towers().len(), 6);
    assert!(matches!(
        out.overflow,
        Some(Error::MagnitudeOverflow { .. })
    ));
    assert!(out.value.conditions().all());
}

#[test]
fn golden_beta_staircase() {
    let s = sondow_series_irrational(&phi_bracket(), 6, cap()).unwrap();
    let series = s.value;
    let plan = series.plan().unwrap();
    assert_eq!(&plan.binary_exponents[..2], &[2, 3]);
    assert_eq!(&series.staircase()[..3], &[rat(3, 4), rat(3, 4), rat(5, 8)]);
    assert_eq!(plan.block_bounds[0], 2);
    assert!(series.conditions().all());
    // T_3 = 8^256 = 2^768 and T_4 = (2^9)^(2^768) is beyond any cap
    assert_eq!(series.towers()[3], BigUint::one() << 768usize);
    assert_eq!(series.towers().len(), 4);
    assert!(s.overflow.is_some());
}

#[test]
fn rational_point_as_bracket_uses_binary_expansion() {
    let beta = RationalInterval::point(rat(3, 2));
    let s = sondow_series_irrational(&beta, 5, cap()).unwrap().value;
    let plan = s.plan().unwrap();
    for (j, k) in plan.binary_exponents.iter().enumerate() {
        assert_eq!(*k, 2 * (j as u64 + 1));
    }
    assert!(s.conditions().all());
}

#[test]
fn dyadic_point_beta_keeps_last_block() {
    let beta = RationalInterval::point(rat(2, 1));
    let s = sondow_series_irrational(&beta, 5, cap()).unwrap().value;
    assert_eq!(s.towers(), &[u(1), u(2), u(4), u(16), u(65536)]);
    assert!(s.conditions().all());
}

#[test]
fn wide_beta_bracket_is_not_certifiable() {
    let beta = RationalInterval::new(rat(3, 2), rat(17, 10)).unwrap();
    assert!(matches!(
        sondow_series_irrational(&beta, 5, cap()),
        Err(Error::BetaNotCertifiable { .. })
    ));
}

fn assert_envelope(series: &SondowSeries) {
    let tau = series.value_bracket(cap()).unwrap();
    let c = series.envelope_c();
    assert!(c > &BigRat::one());
    for n in 1..series.len() {
        if let Some(term) = series.term(n, cap()) {
            let s = series.partial_sum(n);
            assert!(tau.lo() - &s >= term, "lower envelope at n = {n}");
            assert!(tau.hi() - &s <= c * &term, "upper envelope at n = {n}");
        }
    }
}

#[test]
fn envelope_holds_on_constructed_series() {
    for (a, b) in [(1u64, 2u64), (2, 3), (3, 5), (1, 3)] {
        let s = sondow_series_rational(&u(a), &u(b), 5, cap())
            .unwrap()
            .value;
        assert_envelope(&s);
    }
    assert_envelope(
        &sondow_series_irrational(&phi_bracket(), 5, cap())
            .unwrap()
            .value,
    );
}

#[test]
fn tau_brackets_shrink_and_nest() {
    let s = sondow_series_rational(&u(1), &u(2), 6, cap())
        .unwrap()
        .value;
    let mut prev = s.bracket_at(0, cap()).unwrap();
    for n in 1..=s.len() {
        let b = s.bracket_at(n, cap()).unwrap();
        assert!(prev.contains_interval(&b), "n = {n}");
        prev = b;
    }
}

#[test]
fn towers_small_values() {
    assert_eq!(tower(&u(2), 3, cap()).unwrap(), u(16));
    assert_eq!(tower(&u(3), 2, cap()).unwrap(), u(27));
    assert_eq!(tower(&u(2), 5, cap()).unwrap().bits(), 65537);
    assert_eq!(tower(&u(7), 0, cap()).unwrap(), u(1));
    assert!(matches!(
        tower(&u(2), 6, cap()),
        Err(Error::MagnitudeOverflow { .. })
    ));
}

#[test]
fn super_liouville_terms() {
    let s = super_liouville_sum(3, cap())
        .unwrap()
        .into_result()
        .unwrap();
    assert_eq!(s.denominators, vec![u(1), u(4), u(4096)]);
    assert_eq!(s.partial_sums, vec![rat(1, 1), rat(5, 4), rat(5121, 4096)]);
    assert!(s.denominators_match());

    let s = super_liouville_sum(4, cap())
        .unwrap()
        .into_result()
        .unwrap();
    assert_eq!(s.denominators[3], BigUint::one() << 16384usize);

    let out = super_liouville_sum(5, cap()).unwrap();
    assert_eq!(out.value.denominators.len(), 4);
    assert!(matches!(
        out.overflow,
        Some(Error::MagnitudeOverflow { .. })
    ));
}

#[test]
fn super_liouville_chain() {
    let s = super_liouville_sum(4, cap()).unwrap().value;
    let sum = s.value_bracket(cap()).unwrap();
    for n in [2usize, 3] {
        let b_n = BigRat::from_integer(BigInt::from(s.denominators[n - 1].clone()));
        let b_next = BigRat::from_integer(BigInt::from(s.denominators[n].clone()));
        let partial = &s.partial_sums[n - 1];
        let gap_lo = sum.lo() - partial;
        let gap_hi = sum.hi() - partial;
        let two_over = BigRat::from_integer(2.into()) / &b_next;
        // (2^n)^(-b_n) = 2^(-n b_n)
        let shift = n as u64 * u64::try_from(&s.denominators[n - 1]).unwrap();
        let power = BigRat::new(BigInt::one(), BigInt::one() << shift);
        assert!(gap_lo > BigRat::from_integer(0.into()));
        assert!(gap_hi < two_over);
        assert!(two_over < power);
        assert!(power < (&b_n * &b_n).recip());
    }
}

#[test]
fn family_prefixes() {
    let cf = example_family(Family::L1, 4, cap())
        .unwrap()
        .into_result()
        .unwrap();
    assert_eq!(cf.quotients(), &[u(2), u(4), u(64), u(1 << 24)]);
    let cf = example_family(Family::L3, 3, cap())
        .unwrap()
        .into_result()
        .unwrap();
    assert_eq!(cf.quotients(), &[u(2), u(4), u(16)]);
    let cf = example_family(Family::S1, 3, cap())
        .unwrap()
        .into_result()
        .unwrap();
    assert_eq!(cf.quotients(), &[u(1), u(4), Pow::pow(u(3), 27u32)]);
    let cf = example_family(Family::L2, 4, cap())
        .unwrap()
        .into_result()
        .unwrap();
    assert_eq!(cf.quotients()[2], u(4096));
    assert_eq!(cf.quotients()[3], BigUint::one() << 16384usize);
    let cf = example_family(Family::L4, 4, cap())
        .unwrap()
        .into_result()
        .unwrap();
    assert_eq!(cf.quotients(), &[u(1), u(2), u(9), u(262144)]);
    let cf = example_family(Family::S2, 3, cap())
        .unwrap()
        .into_result()
        .unwrap();
    assert_eq!(cf.quotients(), &[u(1), u(4), BigUint::one() << 512usize]);
    assert_eq!("s2".parse::<Family>().unwrap(), Family::S2);
    assert!(matches!("L9".parse::<Family>(), Err(Error::Parse(_))));
}

#[test]
fn families_stop_on_cap() {
    let out = example_family(Family::L3, 10, cap()).unwrap();
    assert_eq!(out.value.len(), 5);
    assert!(out.overflow.is_some());
}

#[test]
fn e_pattern_prefix() {
    let cf = e_pattern(11);
    let q: Vec<u64> = cf
        .quotients()
        .iter()
        .map(|b| u64::try_from(b).unwrap())
        .collect();
    assert_eq!(q, vec![1, 2, 1, 1, 4, 1, 1, 6, 1, 1, 8]);
    assert_eq!(cf.b0(), &BigInt::from(2));
}

#[test]
fn series_transcript_round_trips() {
    for s in [
        sondow_series_rational(&u(1), &u(2), 5, cap())
            .unwrap()
            .value,
        sondow_series_irrational(&phi_bracket(), 4, cap())
            .unwrap()
            .value,
    ] {
        let text = serde_json::to_string(&s).unwrap();
        let back: SondowSeries = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        for key in ["beta", "r", "towers", "partial_sums", "conditions"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["conditions"]["c13"], true);
    }
}

#[test]
fn jarnik_transcript_round_trips() {
    let cf = jarnik_quotients(&OmegaSpec::Exp(rat(2, 1)), 5, cap())
        .unwrap()
        .value;
    let text = serde_json::to_string(&cf).unwrap();
    assert!(text.contains(&theta2_b5().to_string()));
    let back: ContinuedFraction = serde_json::from_str(&text).unwrap();
    assert_eq!(back, cf);
}
