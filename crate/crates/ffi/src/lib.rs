//! C interface to the irrmeasure toolkit.
//!
//! Every fallible function returns an [`IrmStatus`]. On failure a message is
//! available from [`irm_last_error`] on the calling thread until the next
//! call into the library from that thread. Handles are opaque and are
//! released with their `_free` function. Strings returned through `char **`
//! out-parameters belong to the caller and are released with
//! [`irm_string_free`].
//!
//! The JSON produced here is the same document the command-line tool prints
//! for the corresponding object.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use irrmeasure::cli::{Beta, Context, Target};
use irrmeasure::constructions::SondowSeries;
use irrmeasure::contfrac::ContinuedFraction;
use irrmeasure::measures::{base_estimates, exponent_estimates};
use irrmeasure::numerics::elementary::DEFAULT_LOG_PRECISION_BITS;
use irrmeasure::numerics::MagnitudeCap;
use irrmeasure::Error;

/// Result of a library call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IrmStatus {
    Ok = 0,
    Parse = 1,
    /// A value exceeded the magnitude cap. Constructors still return the
    /// prefix built before the cap was reached.
    MagnitudeOverflow = 2,
    InsufficientTerms = 3,
    IntervalTooWide = 4,
    InvalidOmega = 5,
    InvalidBeta = 6,
    BetaNotCertifiable = 7,
    RationalValue = 8,
    InvalidArgument = 9,
    NullPointer = 10,
    InvalidUtf8 = 11,
    Panic = 12,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IrmMeasureKind {
    Exponent = 0,
    Base = 1,
}

/// Magnitude cap, logarithm precision and seed shared by calls.
pub struct IrmContext {
    inner: Context,
}

/// A continued-fraction prefix.
pub struct IrmContinuedFraction {
    inner: ContinuedFraction,
}

/// A tower series with its staircase and partial sums.
pub struct IrmSondowSeries {
    inner: SondowSeries,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure {
    status: IrmStatus,
    message: String,
}

impl Failure {
    fn new(status: IrmStatus, message: impl Into<String>) -> Self {
        Self {
            status,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Parse(_) => IrmStatus::Parse,
            Error::MagnitudeOverflow { .. } => IrmStatus::MagnitudeOverflow,
            Error::InsufficientTerms { .. } => IrmStatus::InsufficientTerms,
            Error::IntervalTooWide(_) => IrmStatus::IntervalTooWide,
            Error::InvalidOmega(_) => IrmStatus::InvalidOmega,
            Error::InvalidBeta(_) => IrmStatus::InvalidBeta,
            Error::BetaNotCertifiable { .. } => IrmStatus::BetaNotCertifiable,
            Error::RationalValue => IrmStatus::RationalValue,
            Error::InvalidArgument(_) => IrmStatus::InvalidArgument,
        };
        Self::new(status, e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn set_last_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).expect("NUL bytes replaced");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(text));
}

fn guard(body: impl FnOnce() -> Outcome) -> IrmStatus {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => IrmStatus::Ok,
        Ok(Err(f)) => {
            set_last_error(&f.message);
            f.status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(&format!("internal panic: {message}"));
            IrmStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(text: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if text.is_null() {
        return Err(Failure::new(
            IrmStatus::NullPointer,
            format!("{what} is NULL"),
        ));
    }
    CStr::from_ptr(text)
        .to_str()
        .map_err(|_| Failure::new(IrmStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(h: *const T, what: &str) -> Result<&'a T, Failure> {
    h.as_ref()
        .ok_or_else(|| Failure::new(IrmStatus::NullPointer, format!("{what} is NULL")))
}

fn check_out<T>(out: *mut *mut T) -> Outcome {
    if out.is_null() {
        return Err(Failure::new(
            IrmStatus::NullPointer,
            "output pointer is NULL",
        ));
    }
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, text: String) -> Outcome {
    check_out(out)?;
    let c = CString::new(text)
        .map_err(|_| Failure::new(IrmStatus::InvalidArgument, "output contains NUL"))?;
    *out = c.into_raw();
    Ok(())
}

fn json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("transcripts serialize")
}

/// Creates a context. A `cap_bits` or `log_precision_bits` of 0 selects the
/// default; otherwise the cap must be at least 64 bits and the precision at
/// least 32.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn irm_context_new(
    cap_bits: u64,
    log_precision_bits: u32,
    seed: u64,
    out: *mut *mut IrmContext,
) -> IrmStatus {
    guard(|| {
        check_out(out)?;
        let cap = match cap_bits {
            0 => MagnitudeCap::default(),
            b if b < 64 => {
                return Err(Failure::new(
                    IrmStatus::InvalidArgument,
                    format!("cap must be at least 64 bits, got {b}"),
                ))
            }
            b => MagnitudeCap::new(b)?,
        };
        let log_precision_bits = match log_precision_bits {
            0 => DEFAULT_LOG_PRECISION_BITS,
            p if p < 32 => {
                return Err(Failure::new(
                    IrmStatus::InvalidArgument,
                    format!("log precision must be at least 32 bits, got {p}"),
                ))
            }
            p => p,
        };
        let ctx = Context {
            cap,
            log_precision_bits,
            seed,
        };
        *out = Box::into_raw(Box::new(IrmContext { inner: ctx }));
        Ok(())
    })
}

/// # Safety
/// `ctx` must be NULL or a pointer returned by [`irm_context_new`] that has
/// not been freed.
#[no_mangle]
pub unsafe extern "C" fn irm_context_free(ctx: *mut IrmContext) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

/// Expansion prefix of a named target such as `theta2`, `phi`, `L1`,
/// `tau:1/2`, `jarnik:exp:2`, `13/16` or `1.618`, with at most `terms`
/// quotients after `b_0`.
///
/// On [`IrmStatus::MagnitudeOverflow`] `*out` still receives the prefix
/// built before the cap was reached.
///
/// # Safety
/// `ctx` must be a live context, `target` a NUL-terminated string and `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn irm_cf_from_target(
    ctx: *const IrmContext,
    target: *const c_char,
    terms: usize,
    out: *mut *mut IrmContinuedFraction,
) -> IrmStatus {
    guard(|| {
        let ctx = &handle(ctx, "context")?.inner;
        let target: Target = read_str(target, "target")?.parse()?;
        check_out(out)?;
        let capped = target.continued_fraction(terms, ctx)?;
        *out = Box::into_raw(Box::new(IrmContinuedFraction {
            inner: capped.value,
        }));
        match capped.overflow {
            Some(e) => Err(e.into()),
            None => Ok(()),
        }
    })
}

/// Reads an expansion from its JSON form `{"b0", "quotients", "tail"}`.
///
/// # Safety
/// `json_text` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn irm_cf_from_json(
    json_text: *const c_char,
    out: *mut *mut IrmContinuedFraction,
) -> IrmStatus {
    guard(|| {
        let text = read_str(json_text, "json")?;
        check_out(out)?;
        let cf: ContinuedFraction = serde_json::from_str(text)
            .map_err(|e| Failure::new(IrmStatus::Parse, e.to_string()))?;
        *out = Box::into_raw(Box::new(IrmContinuedFraction { inner: cf }));
        Ok(())
    })
}

/// Number of quotients after `b_0`; 0 for NULL.
///
/// # Safety
/// `cf` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn irm_cf_len(cf: *const IrmContinuedFraction) -> usize {
    cf.as_ref().map_or(0, |c| c.inner.len())
}

/// Decimal text of quotient `index`, where index 0 is `b_0`.
///
/// # Safety
/// `cf` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn irm_cf_quotient(
    cf: *const IrmContinuedFraction,
    index: usize,
    out: *mut *mut c_char,
) -> IrmStatus {
    guard(|| {
        let cf = &handle(cf, "continued fraction")?.inner;
        let text = match index {
            0 => cf.b0().to_string(),
            i => cf
                .quotients()
                .get(i - 1)
                .ok_or_else(|| {
                    Failure::new(
                        IrmStatus::InvalidArgument,
                        format!("index {i} past the last quotient {}", cf.len()),
                    )
                })?
                .to_string(),
        };
        write_string(out, text)
    })
}

/// # Safety
/// `cf` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn irm_cf_to_json(
    cf: *const IrmContinuedFraction,
    out: *mut *mut c_char,
) -> IrmStatus {
    guard(|| write_string(out, json(&handle(cf, "continued fraction")?.inner)))
}

/// JSON array of `{"n", "p", "q"}` for every convergent of the prefix.
///
/// # Safety
/// `cf` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn irm_cf_convergents_json(
    cf: *const IrmContinuedFraction,
    out: *mut *mut c_char,
) -> IrmStatus {
    guard(|| {
        write_string(
            out,
            json(&handle(cf, "continued fraction")?.inner.convergents()),
        )
    })
}

/// # Safety
/// `cf` must be NULL or a live handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn irm_cf_free(cf: *mut IrmContinuedFraction) {
    if !cf.is_null() {
        drop(Box::from_raw(cf));
    }
}

/// Per-index exponent or base estimates as a JSON document.
///
/// # Safety
/// `ctx` and `cf` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn irm_estimate_json(
    ctx: *const IrmContext,
    cf: *const IrmContinuedFraction,
    kind: IrmMeasureKind,
    out: *mut *mut c_char,
) -> IrmStatus {
    guard(|| {
        let prec = handle(ctx, "context")?.inner.log_precision_bits;
        let cf = &handle(cf, "continued fraction")?.inner;
        let estimate = match kind {
            IrmMeasureKind::Exponent => exponent_estimates(cf, prec)?,
            IrmMeasureKind::Base => base_estimates(cf, prec)?,
        };
        write_string(out, json(&estimate))
    })
}

/// Tower series for `beta`, given as `b/a` or as a decimal, with `n_terms`
/// towers.
///
/// On [`IrmStatus::MagnitudeOverflow`] `*out` still receives the towers
/// built before the cap was reached.
///
/// # Safety
/// `ctx` must be a live context, `beta` a NUL-terminated string and `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn irm_sondow_new(
    ctx: *const IrmContext,
    beta: *const c_char,
    n_terms: usize,
    out: *mut *mut IrmSondowSeries,
) -> IrmStatus {
    guard(|| {
        let ctx = &handle(ctx, "context")?.inner;
        let text = read_str(beta, "beta")?;
        check_out(out)?;
        let beta = if text.contains('.') {
            Beta::parse_decimal(text)?
        } else {
            Beta::parse_value(text)?
        };
        let capped = beta.series(n_terms, ctx.cap)?;
        *out = Box::into_raw(Box::new(IrmSondowSeries {
            inner: capped.value,
        }));
        match capped.overflow {
            Some(e) => Err(e.into()),
            None => Ok(()),
        }
    })
}

/// Number of towers `t_0, t_1, ...` in the series; 0 for NULL.
///
/// # Safety
/// `series` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn irm_sondow_tower_count(series: *const IrmSondowSeries) -> usize {
    series.as_ref().map_or(0, |s| s.inner.towers().len())
}

/// # Safety
/// `series` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn irm_sondow_to_json(
    series: *const IrmSondowSeries,
    out: *mut *mut c_char,
) -> IrmStatus {
    guard(|| write_string(out, json(&handle(series, "series")?.inner)))
}

/// Certified bracket `{"lo", "hi"}` of the series value.
///
/// # Safety
/// `ctx` and `series` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn irm_sondow_value_bracket_json(
    ctx: *const IrmContext,
    series: *const IrmSondowSeries,
    out: *mut *mut c_char,
) -> IrmStatus {
    guard(|| {
        let cap = handle(ctx, "context")?.inner.cap;
        let bracket = handle(series, "series")?.inner.value_bracket(cap)?;
        write_string(out, json(&bracket))
    })
}

/// # Safety
/// `series` must be NULL or a live handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn irm_sondow_free(series: *mut IrmSondowSeries) {
    if !series.is_null() {
        drop(Box::from_raw(series));
    }
}

/// Runs the command-line tool in process. `argv` excludes the program name.
/// The tool's exit code goes to `*exit_code` and its output to the two
/// string out-parameters; the call itself fails only on bad pointers or
/// non-UTF-8 arguments.
///
/// # Safety
/// `argv` must point to `argc` NUL-terminated strings (or be NULL when
/// `argc` is 0) and every out-parameter must be writable.
#[no_mangle]
pub unsafe extern "C" fn irm_cli_run(
    argv: *const *const c_char,
    argc: usize,
    exit_code: *mut i32,
    stdout_text: *mut *mut c_char,
    stderr_text: *mut *mut c_char,
) -> IrmStatus {
    guard(|| {
        if exit_code.is_null() {
            return Err(Failure::new(IrmStatus::NullPointer, "exit_code is NULL"));
        }
        check_out(stdout_text)?;
        check_out(stderr_text)?;
        if argv.is_null() && argc > 0 {
            return Err(Failure::new(IrmStatus::NullPointer, "argv is NULL"));
        }
        let mut args = vec!["irrmeasure"];
        for i in 0..argc {
            args.push(read_str(*argv.add(i), "argument")?);
        }
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = irrmeasure::cli::run(args, &mut out, &mut err);
        let to_text = |bytes: Vec<u8>| String::from_utf8_lossy(&bytes).into_owned();
        write_string(stdout_text, to_text(out))?;
        write_string(stderr_text, to_text(err))?;
        *exit_code = code;
        Ok(())
    })
}

/// Message of the last failed call on this thread, or NULL. The pointer is
/// valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn irm_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `text` must be NULL or a string returned by this library that has not
/// been freed.
#[no_mangle]
pub unsafe extern "C" fn irm_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(CString::from_raw(text));
    }
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn irm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
