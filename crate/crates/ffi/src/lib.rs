//! C interface to `coh-core`.
//!
//! Handles are opaque and owned by the caller until passed to the matching
//! `*_free`. Strings returned through out-parameters are heap-allocated and
//! released with [`coh_string_free`]. Every fallible call returns a
//! [`CohStatus`]; on failure, [`coh_last_error`] describes the problem.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use coh_core::coherence::{coherent_set_with, extension_interval_with, CoherenceVerdict};
use coh_core::fp::{decide_consequence_with, local_deduction_exponent_with};
use coh_core::pwl::Strategy;
use coh_core::{format_rational, parse_event, parse_modal, parse_rational, Book, Error, EventFormula, EventList, Limits};

/// Result of a call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CohStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// A formula or rational failed to parse.
    Parse = 3,
    /// Well-formed input that the operation rejects.
    Validation = 4,
    /// Too many events or variables, or a formula too deep.
    DimensionCap = 5,
    /// The book is incoherent, so the operation has no answer.
    Incoherent = 6,
    Internal = 7,
}

/// An ordered list of events.
pub struct CohEventList {
    events: Vec<EventFormula>,
}

/// The outcome of a coherence check, with its certificate.
pub struct CohVerdict {
    verdict: CoherenceVerdict,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> CohStatus {
    match e {
        Error::Syntax { .. } | Error::UnknownVariable(_) | Error::InvalidRational(_) => CohStatus::Parse,
        Error::DimensionCap { .. } | Error::DepthCap { .. } => CohStatus::DimensionCap,
        Error::Incoherent(_) => CohStatus::Incoherent,
        Error::Internal(_) | Error::Unbounded | Error::ExponentBound(_) => CohStatus::Internal,
        _ => CohStatus::Validation,
    }
}

struct Fail(CohStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

type FfiResult<T> = std::result::Result<T, Fail>;

fn guard<F: FnOnce() -> FfiResult<()>>(f: F) -> CohStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            CohStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            CohStatus::Internal
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(CohStatus::NullPointer, format!("null pointer: {what}"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> FfiResult<&'a str> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(CohStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn list_arg<'a>(p: *const CohEventList) -> FfiResult<&'a CohEventList> {
    p.as_ref().ok_or_else(|| null("event list"))
}

unsafe fn book_arg(prices: *const *const c_char, n: usize) -> FfiResult<Book> {
    if prices.is_null() && n > 0 {
        return Err(null("prices"));
    }
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        out.push(parse_rational(str_arg(*prices.add(i), "price")?)?);
    }
    Ok(Book::new(out)?)
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> FfiResult<()> {
    if out.is_null() {
        return Err(null("output"));
    }
    *out = CString::new(s).expect("no interior nul").into_raw();
    Ok(())
}

fn event_list(l: &CohEventList) -> FfiResult<EventList> {
    Ok(EventList::new(l.events.clone())?)
}

fn json(v: impl serde::Serialize) -> String {
    serde_json::to_string(&v).expect("serializable")
}

/// The message of the last failed call on this thread, or null. Valid until
/// the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn coh_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn coh_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[no_mangle]
pub extern "C" fn coh_event_list_new() -> *mut CohEventList {
    Box::into_raw(Box::new(CohEventList { events: Vec::new() }))
}

/// Parses `event` and appends it.
///
/// # Safety
/// `list` must come from [`coh_event_list_new`]; `event` must be a
/// nul-terminated string.
#[no_mangle]
pub unsafe extern "C" fn coh_event_list_push(list: *mut CohEventList, event: *const c_char) -> CohStatus {
    guard(|| {
        let l = list.as_mut().ok_or_else(|| null("event list"))?;
        let e = parse_event(str_arg(event, "event")?)?;
        l.events.push(e);
        Ok(())
    })
}

/// # Safety
/// `list` must be null or come from [`coh_event_list_new`].
#[no_mangle]
pub unsafe extern "C" fn coh_event_list_len(list: *const CohEventList) -> usize {
    list.as_ref().map_or(0, |l| l.events.len())
}

/// # Safety
/// `list` must be null or come from [`coh_event_list_new`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn coh_event_list_free(list: *mut CohEventList) {
    if !list.is_null() {
        drop(Box::from_raw(list));
    }
}

/// Writes the coherent set as JSON `{"vertices": [...], "halfspaces": [...]}`.
///
/// # Safety
/// `list` must be a live event list and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn coh_coherent_set_json(list: *const CohEventList, out_json: *mut *mut c_char) -> CohStatus {
    guard(|| {
        let e = event_list(list_arg(list)?)?;
        let set = coherent_set_with(&e, &Limits::from_env()?, &Strategy::default())?;
        put_string(out_json, json(set.polytope().to_json()))
    })
}

/// Decides coherence of the book `prices[0..n]` (rational strings such as
/// `"1/2"`) on `list`.
///
/// # Safety
/// `list` must be a live event list, `prices` must point to `n` strings and
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn coh_check_book(
    list: *const CohEventList,
    prices: *const *const c_char,
    n: usize,
    out: *mut *mut CohVerdict,
) -> CohStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("output"));
        }
        let e = event_list(list_arg(list)?)?;
        let book = book_arg(prices, n)?;
        let set = coherent_set_with(&e, &Limits::from_env()?, &Strategy::default())?;
        let verdict = set.check(&book)?;
        *out = Box::into_raw(Box::new(CohVerdict { verdict }));
        Ok(())
    })
}

/// # Safety
/// `v` must be null or a live verdict.
#[no_mangle]
pub unsafe extern "C" fn coh_verdict_is_coherent(v: *const CohVerdict) -> bool {
    v.as_ref().is_some_and(|v| v.verdict.coherent)
}

/// # Safety
/// `v` must be a live verdict and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn coh_verdict_to_json(v: *const CohVerdict, out_json: *mut *mut c_char) -> CohStatus {
    guard(|| {
        let v = v.as_ref().ok_or_else(|| null("verdict"))?;
        put_string(out_json, json(v.verdict.to_json()))
    })
}

/// # Safety
/// `v` must be null or a live verdict, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn coh_verdict_free(v: *mut CohVerdict) {
    if !v.is_null() {
        drop(Box::from_raw(v));
    }
}

/// The interval of coherent prices for `event` given a coherent book on
/// `list`. Returns [`CohStatus::Incoherent`] if the book is not coherent.
///
/// # Safety
/// As for [`coh_check_book`]; `event` must be a nul-terminated string and
/// `out_lo`, `out_hi` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn coh_extension_interval(
    list: *const CohEventList,
    prices: *const *const c_char,
    n: usize,
    event: *const c_char,
    out_lo: *mut *mut c_char,
    out_hi: *mut *mut c_char,
) -> CohStatus {
    guard(|| {
        if out_lo.is_null() || out_hi.is_null() {
            return Err(null("output"));
        }
        let e = event_list(list_arg(list)?)?;
        let book = book_arg(prices, n)?;
        let psi = parse_event(str_arg(event, "event")?)?;
        let (lo, hi) = extension_interval_with(&e, &book, &psi, &Limits::from_env()?)?;
        put_string(out_lo, format_rational(&lo))?;
        put_string(out_hi, format_rational(&hi))
    })
}

/// Decides whether `premise` entails `conclusion` in FP(Ł,Ł). `out_json`
/// may be null; otherwise it receives `{"holds": ..., "countermodel": ...}`.
///
/// # Safety
/// `premise`, `conclusion` must be nul-terminated strings; `out_holds` must
/// be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn coh_decide_consequence(
    premise: *const c_char,
    conclusion: *const c_char,
    out_holds: *mut bool,
    out_json: *mut *mut c_char,
) -> CohStatus {
    guard(|| {
        if out_holds.is_null() {
            return Err(null("output"));
        }
        let phi = parse_modal(str_arg(premise, "premise")?)?;
        let psi = parse_modal(str_arg(conclusion, "conclusion")?)?;
        let c = decide_consequence_with(&phi, &psi, &Limits::from_env()?)?;
        *out_holds = c.holds;
        if !out_json.is_null() {
            put_string(out_json, json(c.to_json()))?;
        }
        Ok(())
    })
}

/// The least `n` with `premise^n -> conclusion` a theorem, or 0 when the
/// premise does not entail the conclusion.
///
/// # Safety
/// `premise`, `conclusion` must be nul-terminated strings; `out_n` must be a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn coh_local_deduction_exponent(
    premise: *const c_char,
    conclusion: *const c_char,
    out_n: *mut u32,
) -> CohStatus {
    guard(|| {
        if out_n.is_null() {
            return Err(null("output"));
        }
        let phi = parse_modal(str_arg(premise, "premise")?)?;
        let psi = parse_modal(str_arg(conclusion, "conclusion")?)?;
        *out_n = local_deduction_exponent_with(&phi, &psi, &Limits::from_env()?)?.unwrap_or(0);
        Ok(())
    })
}
