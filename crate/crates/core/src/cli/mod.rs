//! The `irrmeasure` command line.
//!
//! [`run`] parses arguments, executes one command and returns the process
//! exit code, writing the document to `stdout` and warnings to `stderr`.
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | other error (e.g. a bracket too wide to decide) |
//! | 2 | parse or usage error |
//! | 3 | insufficient terms, or a rational value where an irrational is needed |
//! | 4 | magnitude cap hit; the partial transcript is still printed |
//! | 5 | verification failed |

mod render;
mod target;

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::constructions::{super_liouville_sum, verify_jarnik_condition, Capped, Family};
use crate::contfrac::{ContinuedFraction, Convergent};
use crate::error::{Error, Result};
use crate::measures::{
    base_estimates_windowed, exponent_estimates_windowed, MeasureEstimate, OmegaSpec,
};
use crate::numerics::elementary::DEFAULT_LOG_PRECISION_BITS;
use crate::numerics::{
    parse_rat, rat, rat_to_string, to_decimal, BigRat, MagnitudeCap, DEFAULT_CAP_BITS,
};
use crate::verify::{
    check_inequality11, check_legendre, check_lemma3_bounds, check_order, check_sandwich5,
    convergent_order_records, ApproximationRecord, VerificationReport,
};

pub use render::Format;
pub use target::{random_prefix, Beta, Context, Target, DEFAULT_SERIES_TERMS};

use render::{Output, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_OTHER: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INSUFFICIENT: i32 = 3;
pub const EXIT_OVERFLOW: i32 = 4;
pub const EXIT_VERIFICATION: i32 = 5;

#[derive(Debug, Parser)]
#[command(
    name = "irrmeasure",
    version,
    about = "Irrationality exponents and bases from continued fractions, with exact arithmetic"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Largest integer bit length any computation may produce.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP_BITS,
          value_parser = clap::value_parser!(u64).range(64..))]
    cap_bits: u64,

    /// Working precision of certified logarithms, in bits.
    #[arg(long, global = true, default_value_t = DEFAULT_LOG_PRECISION_BITS,
          value_parser = clap::value_parser!(u32).range(32..))]
    log_precision_bits: u32,

    /// Seed for `random:<len>` targets.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Continued-fraction expansion and convergents of a number.
    Cf {
        /// `p/q`, a decimal, or a named target.
        value: String,
        #[arg(long, default_value_t = 20)]
        terms: usize,
    },
    /// Finite-prefix estimates of the irrationality exponent or base.
    Estimate {
        #[arg(value_enum)]
        kind: EstimateKind,
        target: String,
        #[arg(long)]
        terms: Option<usize>,
        /// Trailing entries used for `tail_sup`.
        #[arg(long)]
        window: Option<usize>,
    },
    /// Build a number with prescribed approximation behaviour.
    Construct {
        #[command(subcommand)]
        what: Construct,
    },
    /// Check an approximation inequality exactly.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum EstimateKind {
    Exponent,
    Base,
}

#[derive(Debug, Subcommand)]
enum Construct {
    /// Continued fraction approximable to order omega.
    Jarnik {
        /// `exp:B` for `B^-x` or `pow:M` for `x^-M`.
        #[arg(long)]
        omega: String,
        #[arg(long, default_value_t = 5)]
        terms: usize,
    },
    /// Tower series with irrationality base beta.
    Sondow {
        /// Beta as `b/a`, e.g. `2/1` or `3/2`.
        #[arg(
            long,
            required_unless_present = "beta_decimal",
            conflicts_with = "beta_decimal"
        )]
        beta: Option<String>,
        /// Beta as a decimal, read as a bracket of one unit in the last place.
        #[arg(long)]
        beta_decimal: Option<String>,
        #[arg(long, default_value_t = 5)]
        terms: usize,
    },
    /// Partial sums of the super-Liouville series.
    Superliouville {
        #[arg(long, default_value_t = 5)]
        terms: usize,
    },
    /// One of the tower-growth families L1..L4, S1, S2.
    Family {
        name: String,
        #[arg(long, default_value_t = 5)]
        terms: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Check {
    Order,
    Sandwich,
    Legendre,
    Lemma3,
    Ineq11,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    check: Check,
    target: String,
    #[arg(long, default_value_t = 64)]
    qmax: u64,
    /// Order for `verify order`; defaults to `exp:2`.
    #[arg(long)]
    omega: Option<String>,
    /// Epsilon for `verify lemma3`; defaults to `(beta - 1)/2`.
    #[arg(long)]
    epsilon: Option<String>,
    /// Prefix length or number of series terms behind the bracket.
    #[arg(long)]
    terms: Option<usize>,
}

/// Runs one invocation and returns its exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return e.exit_code();
        }
    };
    let ctx = Context {
        cap: MagnitudeCap::new(cli.cap_bits).expect("bounded by the parser"),
        log_precision_bits: cli.log_precision_bits,
        seed: cli.seed.unwrap_or(0),
    };
    match execute(&cli.command, &ctx) {
        Ok(out) => {
            let _ = stdout.write_all(out.render(cli.format).as_bytes());
            if let Some(e) = &out.overflow {
                let _ = writeln!(stderr, "warning: {e}; output is a partial transcript");
                return EXIT_OVERFLOW;
            }
            if out.failed {
                EXIT_VERIFICATION
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_)
        | Error::InvalidArgument(_)
        | Error::InvalidOmega(_)
        | Error::InvalidBeta(_) => EXIT_USAGE,
        Error::InsufficientTerms { .. } | Error::RationalValue => EXIT_INSUFFICIENT,
        Error::MagnitudeOverflow { .. } => EXIT_OVERFLOW,
        Error::IntervalTooWide(_) | Error::BetaNotCertifiable { .. } => EXIT_OTHER,
    }
}

fn execute(command: &Command, ctx: &Context) -> Result<Output> {
    match command {
        Command::Cf { value, terms } => cmd_cf(&value.parse()?, *terms, ctx),
        Command::Estimate {
            kind,
            target,
            terms,
            window,
        } => cmd_estimate(*kind, &target.parse()?, *terms, *window, ctx),
        Command::Construct { what } => cmd_construct(what, ctx),
        Command::Verify(args) => cmd_verify(args, ctx),
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("transcript types serialize")
}

fn insert(mut doc: Value, key: &str, value: Value) -> Value {
    if let Value::Object(map) = &mut doc {
        map.insert(key.to_string(), value);
    }
    doc
}

fn convergent_rows(convs: &[Convergent], quotient: impl Fn(usize) -> String) -> Table {
    let mut t = Table::new(&["n", "b", "p", "q"]);
    for c in convs {
        t.push(vec![
            c.n.to_string(),
            quotient(c.n),
            c.p.to_string(),
            c.q.to_string(),
        ]);
    }
    t
}

fn cf_quotient(cf: &ContinuedFraction) -> impl Fn(usize) -> String + '_ {
    move |n| match n {
        0 => cf.b0().to_string(),
        n => cf.quotients()[n - 1].to_string(),
    }
}

fn cmd_cf(target: &Target, terms: usize, ctx: &Context) -> Result<Output> {
    let Capped {
        value: cf,
        overflow,
    } = target.continued_fraction(terms, ctx)?;
    let convs = cf.convergents_capped(ctx.cap)?;
    let doc = json!({
        "target": target.to_string(),
        "cf": to_json(&cf),
        "convergents": to_json(&convs),
    });
    let mut out =
        Output::new(doc, convergent_rows(&convs, cf_quotient(&cf))).with_overflow(overflow);
    out.summary = vec![format!("{target} = {cf}"), format!("tail: {:?}", cf.tail())];
    Ok(out)
}

fn cmd_estimate(
    kind: EstimateKind,
    target: &Target,
    terms: Option<usize>,
    window: Option<usize>,
    ctx: &Context,
) -> Result<Output> {
    let terms = terms.unwrap_or_else(|| target.default_terms());
    let Capped {
        value: cf,
        overflow,
    } = target.continued_fraction(terms, ctx)?;
    let prec = ctx.log_precision_bits;
    let estimate: MeasureEstimate = match kind {
        EstimateKind::Exponent => exponent_estimates_windowed(&cf, prec, window)?,
        EstimateKind::Base => base_estimates_windowed(&cf, prec, window)?,
    };
    let mut t = Table::new(&["n", "value", "err", "alternative", "alternative_err"]);
    for e in &estimate.entries {
        t.push(vec![
            e.n.to_string(),
            to_decimal(&e.value.value(), 30),
            crate::numerics::to_scientific(&e.value.err(), 3, true),
            to_decimal(&e.alternative.value(), 30),
            crate::numerics::to_scientific(&e.alternative.err(), 3, true),
        ]);
    }
    let doc = insert(to_json(&estimate), "target", json!(target.to_string()));
    let mut out = Output::new(doc, t).with_overflow(overflow);
    out.summary = vec![
        format!("{:?} estimates for {target} from {cf}", estimate.kind),
        format!(
            "tail_sup over the last {} entries: {}",
            estimate.window,
            to_decimal(&estimate.tail_sup.value(), 30)
        ),
    ];
    Ok(out)
}

fn cmd_construct(what: &Construct, ctx: &Context) -> Result<Output> {
    match what {
        Construct::Jarnik { omega, terms } => {
            let omega: OmegaSpec = omega.parse()?;
            let Capped {
                value: cf,
                overflow,
            } = crate::constructions::jarnik_quotients(&omega, *terms, ctx.cap)?;
            let checks = verify_jarnik_condition(&cf, &omega, ctx.cap);
            let convs = cf.convergents();
            let mut t = Table::new(&["n", "b", "q", "product", "exceeds_one"]);
            for c in &checks.value {
                t.push(vec![
                    (c.n + 1).to_string(),
                    cf.quotients()[c.n].to_string(),
                    convs[c.n].q.to_string(),
                    to_decimal(&c.value.midpoint(), 20),
                    c.exceeds_one.to_string(),
                ]);
            }
            let doc = json!({
                "omega": omega.to_string(),
                "b0": to_json(&cf)["b0"],
                "quotients": to_json(&cf)["quotients"],
                "tail": to_json(&cf)["tail"],
                "convergents": to_json(&convs),
                "checks": to_json(&checks.value),
            });
            let mut out = Output::new(doc, t).with_overflow(overflow.or(checks.overflow));
            out.summary = vec![format!("jarnik {omega}: {cf}")];
            Ok(out)
        }
        Construct::Sondow {
            beta,
            beta_decimal,
            terms,
        } => {
            let beta = match (beta, beta_decimal) {
                (Some(b), _) => Beta::parse_value(b)?,
                (None, Some(d)) => Beta::parse_decimal(d)?,
                (None, None) => unreachable!("clap requires one of the beta flags"),
            };
            let Capped { value: s, overflow } = beta.series(*terms, ctx.cap)?;
            let mut t = Table::new(&["n", "r", "t", "s"]);
            for (n, (r, tower)) in s.staircase().iter().zip(s.towers()).enumerate() {
                t.push(vec![
                    n.to_string(),
                    rat_to_string(r),
                    tower.to_string(),
                    rat_to_string(&s.partial_sum(n)),
                ]);
            }
            let mut out = Output::new(to_json(&s), t).with_overflow(overflow);
            out.summary = vec![
                format!("series terms: {}", s.towers().len()),
                format!("conditions hold: {}", s.conditions().all()),
            ];
            Ok(out)
        }
        Construct::Superliouville { terms } => {
            let Capped { value: s, overflow } = super_liouville_sum(*terms, ctx.cap)?;
            let mut t = Table::new(&["n", "b", "s"]);
            for (i, (b, sum)) in s.denominators.iter().zip(&s.partial_sums).enumerate() {
                t.push(vec![(i + 1).to_string(), b.to_string(), rat_to_string(sum)]);
            }
            let doc = insert(
                to_json(&s),
                "denominators_match",
                json!(s.denominators_match()),
            );
            let mut out = Output::new(doc, t).with_overflow(overflow);
            out.summary = vec![format!("terms: {}", s.denominators.len())];
            Ok(out)
        }
        Construct::Family { name, terms } => {
            let family: Family = name.parse()?;
            let Capped {
                value: cf,
                overflow,
            } = crate::constructions::example_family(family, *terms, ctx.cap)?;
            let mut t = Table::new(&["n", "b"]);
            for (i, b) in cf.quotients().iter().enumerate() {
                t.push(vec![(i + 1).to_string(), b.to_string()]);
            }
            let doc = insert(to_json(&cf), "family", json!(family.to_string()));
            let mut out = Output::new(doc, t).with_overflow(overflow);
            out.summary = vec![format!("{family}: {cf}")];
            Ok(out)
        }
    }
}

fn record_rows(records: &[ApproximationRecord]) -> Table {
    let mut t = Table::new(&["q", "p", "distance_lo", "distance_hi", "omega", "verdict"]);
    for r in records {
        t.push(vec![
            r.q.to_string(),
            r.best_p.to_string(),
            crate::numerics::to_scientific(r.distance.lo(), 6, false),
            crate::numerics::to_scientific(r.distance.hi(), 6, true),
            r.omega_value
                .as_ref()
                .map(|w| crate::numerics::to_scientific(w.lo(), 6, false))
                .unwrap_or_default(),
            r.verdict
                .map(|v| format!("{v:?}").to_lowercase())
                .unwrap_or_default(),
        ]);
    }
    t
}

fn report_output(report: VerificationReport, detail: Value, table: Table, failed: bool) -> Output {
    let summary = vec![
        format!("witnesses: {:?}", report.witnesses),
        format!("violations: {:?}", report.violations),
        format!("undecided: {:?}", report.undecided),
        format!(
            "largest violation: {}",
            report
                .largest_violation
                .map_or("none".into(), |q| q.to_string())
        ),
        format!("result: {}", if failed { "FAIL" } else { "pass" }),
    ];
    let doc = insert(
        insert(to_json(&report), "detail", detail),
        "passed",
        json!(!failed),
    );
    let mut out = Output::new(doc, table);
    out.summary = summary;
    out.failed = failed;
    out
}

fn cmd_verify(args: &VerifyArgs, ctx: &Context) -> Result<Output> {
    let target: Target = args.target.parse()?;
    let q_max = args.qmax;
    if q_max == 0 {
        return Err(Error::InvalidArgument("--qmax must be positive".into()));
    }
    match args.check {
        Check::Order => {
            let omega: OmegaSpec = args.omega.as_deref().unwrap_or("exp:2").parse()?;
            let resolved = target.resolve(q_max, args.terms, ctx)?;
            let check = check_order(&resolved.alpha, &omega, q_max, ctx.cap)?;
            let along: Vec<Convergent> = resolved
                .prefix
                .convergents()
                .into_iter()
                .filter(|c| c.n >= 1 && c.q <= num_bigint::BigInt::from(q_max))
                .collect();
            let convergent_records =
                convergent_order_records(&resolved.alpha, &along, &omega, ctx.cap)?;
            let report = check.report();
            let failed = report.witnesses.is_empty();
            let detail = json!({
                "target": target.to_string(),
                "omega": omega.to_string(),
                "largest_witness": check.largest_witness(),
                "above": check.above(),
                "convergents": to_json(&convergent_records),
            });
            Ok(report_output(
                report,
                detail,
                record_rows(&check.records),
                failed,
            ))
        }
        Check::Sandwich => {
            let resolved = target.resolve(q_max, args.terms, ctx)?;
            let convs = resolved.prefix.convergents();
            let bound = num_bigint::BigInt::from(q_max);
            let within = convs.iter().filter(|c| c.q <= bound).count();
            // the successor of the last checked index must not be the end of the prefix
            let take = (within + 1).min(convs.len().saturating_sub(1));
            let checks = check_sandwich5(&resolved.alpha, &convs[..take])?;
            let mut t = Table::new(&["n", "q", "lower", "upper"]);
            let mut report = VerificationReport {
                q_max,
                witnesses: Vec::new(),
                violations: Vec::new(),
                undecided: Vec::new(),
                largest_violation: None,
            };
            for c in &checks {
                t.push(vec![
                    c.n.to_string(),
                    convs[c.n].q.to_string(),
                    c.lower.to_string(),
                    c.upper.to_string(),
                ]);
                if c.holds() {
                    report.witnesses.push(c.n as u64);
                } else {
                    report.violations.push(c.n as u64);
                }
            }
            report.largest_violation = report.violations.last().copied();
            let failed = !report.violations.is_empty();
            let determinant = crate::contfrac::determinant_identity_holds(&convs);
            let detail = json!({
                "target": target.to_string(),
                "checks": to_json(&checks),
                "determinant_identity": determinant,
            });
            Ok(report_output(report, detail, t, failed || !determinant))
        }
        Check::Legendre => {
            let resolved = target.resolve(q_max, args.terms, ctx)?;
            let legendre = check_legendre(&resolved.alpha, q_max)?;
            let report = legendre.report();
            let failed = !report.violations.is_empty();
            let mut rows: Vec<ApproximationRecord> = legendre
                .confirmed
                .iter()
                .chain(&legendre.exceptions)
                .chain(&legendre.undecided)
                .cloned()
                .collect();
            rows.sort_by_key(|r| r.q);
            let detail = json!({
                "target": target.to_string(),
                "confirmed": fractions(&legendre.confirmed),
                "exceptions": fractions(&legendre.exceptions),
                "undecided": fractions(&legendre.undecided),
            });
            Ok(report_output(report, detail, record_rows(&rows), failed))
        }
        Check::Lemma3 => {
            let n = args.terms.unwrap_or(DEFAULT_SERIES_TERMS);
            let series = target.series(n, ctx)?.value;
            let epsilon = match &args.epsilon {
                Some(e) => parse_rat(e)?,
                None => (series.beta().lower() - BigRat::from_integer(1.into())) * rat(1, 2),
            };
            let lemma3 = check_lemma3_bounds(&series, &epsilon, ctx.cap)?;
            let report = lemma3.report();
            let failed = !report.violations.is_empty();
            let show = |b: Option<bool>| b.map_or("undecided".to_string(), |b| b.to_string());
            let mut t = Table::new(&["n", "lower20", "upper20", "ineq21"]);
            for r in &lemma3.rows {
                t.push(vec![
                    r.n.to_string(),
                    show(r.lower20),
                    show(r.upper20),
                    show(r.ineq21),
                ]);
            }
            let detail = insert(to_json(&lemma3), "target", json!(target.to_string()));
            Ok(report_output(report, detail, t, failed))
        }
        Check::Ineq11 => {
            let n = args.terms.unwrap_or(DEFAULT_SERIES_TERMS);
            let series = target.series(n, ctx)?.value;
            let ineq = check_inequality11(&series, q_max, ctx.cap)?;
            let failed = ineq.stable_under_doubling == Some(false);
            let detail = json!({
                "target": target.to_string(),
                "stable_under_doubling": ineq.stable_under_doubling,
            });
            Ok(report_output(
                ineq.report(),
                detail,
                Table::new(&["q"]).with_rows(&ineq.violations),
                failed,
            ))
        }
    }
}

fn fractions(records: &[ApproximationRecord]) -> Vec<String> {
    records
        .iter()
        .map(|r| format!("{}/{}", r.best_p, r.q))
        .collect()
}

impl Table {
    fn with_rows(mut self, qs: &[u64]) -> Self {
        for q in qs {
            self.push(vec![q.to_string()]);
        }
        self
    }
}
