use std::process::Command;

use irrmeasure::cli::run;
use irrmeasure::constructions::{sondow_series_rational, SondowSeries};
use irrmeasure::contfrac::{cf_from_rational, ContinuedFraction};
use irrmeasure::numerics::{rat, MagnitudeCap};
use num_bigint::BigUint;
use serde_json::Value;

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Outcome {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("{e}: {}", self.stdout))
    }
}

fn cli(args: &str) -> Outcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("irrmeasure").chain(args.split_whitespace());
    let code = run(argv, &mut out, &mut err);
    Outcome {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn numbers(v: &Value) -> Vec<String> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|x| x.to_string())
        .collect()
}

#[test]
fn cf_of_a_fraction() {
    let o = cli("cf 13/16");
    assert_eq!(o.code, 0);
    let v = o.json();
    assert_eq!(numbers(&v["cf"]["quotients"]), ["1", "4", "3"]);
    assert_eq!(v["cf"]["tail"], "Exact");
    assert_eq!(v["convergents"][3]["p"], 13);
    assert_eq!(v["convergents"][3]["q"], 16);
    let cf: ContinuedFraction = serde_json::from_value(v["cf"].clone()).unwrap();
    assert_eq!(cf, cf_from_rational(&rat(13, 16)));
}

#[test]
fn cf_of_a_decimal_is_ambiguous() {
    let v = cli("cf 1.61803398 --terms 20").json();
    let q = numbers(&v["cf"]["quotients"]);
    assert!(q.len() >= 15 && q.iter().all(|b| b == "1"), "{q:?}");
    assert_eq!(v["cf"]["tail"], "Ambiguous");
}

#[test]
fn parse_errors_exit_two() {
    assert_eq!(cli("cf xyz").code, 2);
    assert_eq!(cli("estimate base nonsense").code, 2);
    assert_eq!(cli("construct family L9").code, 2);
    assert_eq!(cli("construct sondow --beta 1/2").code, 2);
    assert_eq!(cli("construct jarnik --omega pow:2").code, 2);
    assert_eq!(cli("verify lemma3 phi").code, 2);
    assert_eq!(cli("--cap-bits 10 cf 1/3").code, 2);
    assert_eq!(cli("--log-precision-bits 16 cf 1/3").code, 2);
    assert_eq!(cli("frobnicate").code, 2);
}

#[test]
fn help_exits_zero() {
    let o = cli("--help");
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("estimate"));
}

#[test]
fn base_estimates_for_theta2() {
    let o = cli("estimate base theta2 --terms 5");
    assert_eq!(o.code, 0, "{}", o.stderr);
    let v = o.json();
    assert_eq!(v["kind"], "Base");
    let last = v["entries"].as_array().unwrap().last().unwrap();
    let value: f64 = last["value"].as_str().unwrap().parse().unwrap();
    assert!((1.9..2.0).contains(&value), "{value}");
}

#[test]
fn exponent_estimates_for_phi_decrease() {
    let v = cli("estimate exponent phi --terms 30").json();
    let values: Vec<f64> = v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["value"].as_str().unwrap().parse().unwrap())
        .collect();
    assert!(values.windows(2).all(|w| w[1] < w[0]));
    assert!(values.iter().all(|x| *x > 2.0));
    assert!(*values.last().unwrap() < 2.05);
}

#[test]
fn rational_value_exits_three() {
    let o = cli("estimate base 7/2");
    assert_eq!(o.code, 3);
    assert!(o.stdout.is_empty());
    assert_eq!(cli("estimate exponent phi --terms 2").code, 3);
}

#[test]
fn jarnik_transcript() {
    let v = cli("construct jarnik --omega exp:2 --terms 5").json();
    let q = numbers(&v["quotients"]);
    let b5 = (BigUint::from(1u32) << 191usize) / BigUint::from(191u32 * 191) + 1u32;
    assert_eq!(q, ["3", "1", "2", "17", &b5.to_string()]);
    assert_eq!(v["checks"][3]["value"]["lo"], "2057/2048");
    assert!(v.get("overflow").is_none());
}

#[test]
fn overflow_keeps_the_partial_transcript() {
    let o = cli("construct jarnik --omega exp:2 --terms 6");
    assert_eq!(o.code, 4);
    assert!(o.stderr.contains("warning"));
    let v = o.json();
    assert_eq!(v["quotients"].as_array().unwrap().len(), 5);
    assert!(v["overflow"]["message"]
        .as_str()
        .unwrap()
        .contains("overflow"));

    let o = cli("--cap-bits 4096 construct superliouville --terms 4");
    assert_eq!(o.code, 4);
    assert_eq!(o.json()["denominators"].as_array().unwrap().len(), 3);
}

#[test]
fn sondow_transcript_round_trips() {
    let v = cli("construct sondow --beta 2/1 --terms 5").json();
    assert_eq!(
        v["towers"],
        serde_json::json!(["1", "2", "4", "16", "65536"])
    );
    assert_eq!(v["partial_sums"][3], "53249/65536");
    assert_eq!(v["conditions"]["c13"], true);
    let parsed: SondowSeries = serde_json::from_value(v).unwrap();
    let direct = sondow_series_rational(
        &BigUint::from(1u32),
        &BigUint::from(2u32),
        5,
        MagnitudeCap::default(),
    )
    .unwrap()
    .value;
    assert_eq!(parsed, direct);
}

#[test]
fn sondow_from_a_decimal_beta() {
    let o = cli("construct sondow --beta-decimal 1.6180339887 --terms 4");
    assert!(o.code == 0 || o.code == 4, "{}", o.stderr);
    let v = o.json();
    assert!(v["plan"]["binary_exponents"].is_array());
    assert_eq!(v["conditions"]["c19"], true);
}

#[test]
fn family_transcript() {
    let v = cli("construct family L1 --terms 4").json();
    assert_eq!(numbers(&v["quotients"]), ["2", "4", "64", "16777216"]);
    assert_eq!(v["family"], "L1");
}

#[test]
fn inequality11_for_tau2() {
    let o = cli("verify ineq11 tau:1/2 --qmax 64");
    assert_eq!(o.code, 0, "{}", o.stderr);
    let v = o.json();
    assert_eq!(v["largest_violation"], 5);
    assert_eq!(v["detail"]["stable_under_doubling"], true);
    for key in [
        "q_max",
        "witnesses",
        "violations",
        "undecided",
        "largest_violation",
    ] {
        assert!(v.get(key).is_some(), "{key}");
    }
}

#[test]
fn legendre_for_phi() {
    let o = cli("verify legendre phi --qmax 200");
    assert_eq!(o.code, 0);
    let v = o.json();
    assert_eq!(v["violations"], serde_json::json!([]));
    assert_eq!(v["detail"]["exceptions"], serde_json::json!([]));
}

#[test]
fn sandwich_for_theta2_and_phi() {
    assert_eq!(cli("verify sandwich theta2 --qmax 200").code, 0);
    let v = cli("verify sandwich phi --qmax 832040").json();
    assert_eq!(v["violations"], serde_json::json!([]));
    assert_eq!(v["detail"]["determinant_identity"], true);
    assert!(v["witnesses"].as_array().unwrap().len() >= 29);
}

#[test]
fn order_for_tau2() {
    let v = cli("verify order tau:2 --qmax 64 --omega exp:2").json();
    assert_eq!(v["witnesses"], serde_json::json!([1, 2, 5]));
    assert_eq!(v["detail"]["above"].as_array().unwrap().len(), 61);
}

#[test]
fn lemma3_for_tau2() {
    let o = cli("verify lemma3 tau:2 --epsilon 1/2");
    assert_eq!(o.code, 0);
    assert_eq!(o.json()["detail"]["n_eps"], 3);
}

#[test]
fn csv_and_text_formats() {
    let csv = cli("--format csv cf 13/16").stdout;
    assert_eq!(csv.lines().next(), Some("n,b,p,q"));
    assert_eq!(csv.lines().last(), Some("3,3,13,16"));
    let text = cli("cf 13/16 --format text").stdout;
    assert!(text.starts_with("13/16 = [0; 1, 4, 3]"));
}

#[test]
fn seeded_targets_are_deterministic() {
    let a = cli("--seed 7 cf random:12").stdout;
    let b = cli("--seed 7 cf random:12").stdout;
    let c = cli("--seed 8 cf random:12").stdout;
    assert_eq!(a, b);
    assert_ne!(a, c);
    assert_eq!(cli("verify legendre random:40 --seed 3 --qmax 50").code, 0);
}

fn binary(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_irrmeasure"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
    )
}

#[test]
fn process_exit_codes() {
    assert_eq!(binary(&["cf", "13/16"]).0, 0);
    assert_eq!(binary(&["cf", "xyz"]).0, 2);
    assert_eq!(binary(&["estimate", "base", "7/2"]).0, 3);
    let (code, stdout) = binary(&["construct", "jarnik", "--omega", "exp:2", "--terms", "6"]);
    assert_eq!(code, 4);
    assert!(stdout.contains("\"overflow\""));
}
