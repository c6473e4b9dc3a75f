//! C interface to `spekkens`.
//!
//! Every fallible call returns an `int32_t` status: `SPK_OK` on success,
//! otherwise one of the `SPK_ERR_*` codes. The message for the most recent
//! failure on the calling thread is available from `spk_last_error`.
//!
//! Handles are opaque and owned by the caller once returned; release them
//! with the matching `*_free`. Strings returned through `char **` are
//! NUL-terminated UTF-8 and must be released with `spk_string_free`.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use spekkens::document::{read_state, write_state};
use spekkens::epistemic::EpistemicState;
use spekkens::expr::parse_observable;
use spekkens::measurement::{outcome_probability, update, SharpMeasurement};
use spekkens::render::render_map;
use spekkens::wigner::wigner_of_epistemic;
use spekkens::Error;

pub const SPK_OK: i32 = 0;
pub const SPK_ERR_NULL_POINTER: i32 = 1;
pub const SPK_ERR_INVALID_UTF8: i32 = 2;
pub const SPK_ERR_PANIC: i32 = 3;
pub const SPK_ERR_MIXED_MODULUS: i32 = 10;
pub const SPK_ERR_DIMENSION_MISMATCH: i32 = 11;
pub const SPK_ERR_INVALID_MODULUS: i32 = 12;
pub const SPK_ERR_TOO_LARGE: i32 = 13;
pub const SPK_ERR_ZERO_OBSERVABLE: i32 = 20;
pub const SPK_ERR_INVALID_OUTCOME: i32 = 21;
pub const SPK_ERR_INCONSISTENT_OUTCOMES: i32 = 22;
pub const SPK_ERR_NOT_COARSE: i32 = 23;
pub const SPK_ERR_NOT_COMMUTING: i32 = 24;
pub const SPK_ERR_COARSE_GENERATOR: i32 = 25;
pub const SPK_ERR_NOT_ISOTROPIC: i32 = 26;
pub const SPK_ERR_IMPOSSIBLE_OUTCOME: i32 = 30;
pub const SPK_ERR_EVEN_DIMENSION: i32 = 31;
pub const SPK_ERR_INCONSISTENT: i32 = 32;
pub const SPK_ERR_NOT_PROJECTOR: i32 = 33;
pub const SPK_ERR_INVALID_STATE: i32 = 40;
pub const SPK_ERR_SYNTAX: i32 = 50;
pub const SPK_ERR_INDEX_OUT_OF_RANGE: i32 = 51;
pub const SPK_ERR_DOCUMENT: i32 = 60;

/// An epistemic state (V, w).
pub struct SpkState(EpistemicState);

/// One element of a sharp measurement.
pub struct SpkMeasurement(SharpMeasurement);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

struct Failure(i32, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.code(), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(SPK_ERR_NULL_POINTER, format!("{what} is null"))
}

/// Runs `f`, turning errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error(String::new());
            SPK_OK
        }
        Ok(Err(Failure(code, msg))) => {
            set_last_error(msg);
            code
        }
        Err(_) => {
            set_last_error("internal panic".into());
            SPK_ERR_PANIC
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(SPK_ERR_INVALID_UTF8, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn emit_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = CString::new(s).map_err(|_| Failure(SPK_ERR_PANIC, "string contains NUL".into()))?.into_raw();
    Ok(())
}

unsafe fn emit<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn spk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

#[no_mangle]
pub unsafe extern "C" fn spk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a JSON state document.
#[no_mangle]
pub unsafe extern "C" fn spk_state_from_json(json: *const c_char, out: *mut *mut SpkState) -> i32 {
    guard(|| {
        let state = read_state(text(json, "json")?)?;
        emit(out, SpkState(state))
    })
}

/// Canonical JSON document of the state.
#[no_mangle]
pub unsafe extern "C" fn spk_state_to_json(state: *const SpkState, out: *mut *mut c_char) -> i32 {
    guard(|| emit_string(out, write_state(&handle(state, "state")?.0)))
}

#[no_mangle]
pub unsafe extern "C" fn spk_state_free(state: *mut SpkState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Writes d and n of the state's phase space.
#[no_mangle]
pub unsafe extern "C" fn spk_state_dims(state: *const SpkState, d: *mut u64, n: *mut usize) -> i32 {
    guard(|| {
        let s = handle(state, "state")?;
        if d.is_null() || n.is_null() {
            return Err(null("out"));
        }
        *d = s.0.space().d();
        *n = s.0.space().n();
        Ok(())
    })
}

/// Number of points in the ontic support.
#[no_mangle]
pub unsafe extern "C" fn spk_state_support_size(state: *const SpkState, out: *mut u64) -> i32 {
    guard(|| {
        let s = handle(state, "state")?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = u64::try_from(s.0.support_size()).map_err(|_| Failure(SPK_ERR_TOO_LARGE, "support too large".into()))?;
        Ok(())
    })
}

/// The state's distribution as a text grid.
#[no_mangle]
pub unsafe extern "C" fn spk_state_grid(state: *const SpkState, out: *mut *mut c_char) -> i32 {
    guard(|| {
        let s = &handle(state, "state")?.0;
        let dist = s.distribution()?;
        emit_string(out, render_map(s.space(), |l| dist.probability(l))?)
    })
}

/// The state's exact Wigner function as a text grid (odd d only).
#[no_mangle]
pub unsafe extern "C" fn spk_wigner_grid(state: *const SpkState, out: *mut *mut c_char) -> i32 {
    guard(|| emit_string(out, wigner_of_epistemic(&handle(state, "state")?.0)?.to_string()))
}

/// Builds the element on which each observable expression `observables[i]`
/// reads `outcomes[i]`, on the phase space of `state`.
#[no_mangle]
pub unsafe extern "C" fn spk_measurement_new(
    state: *const SpkState,
    observables: *const *const c_char,
    outcomes: *const u64,
    count: usize,
    out: *mut *mut SpkMeasurement,
) -> i32 {
    guard(|| {
        let space = *handle(state, "state")?.0.space();
        if count > 0 && (observables.is_null() || outcomes.is_null()) {
            return Err(null("observables or outcomes"));
        }
        let mut gens = Vec::with_capacity(count);
        for i in 0..count {
            gens.push(parse_observable(text(*observables.add(i), "observable")?, &space)?);
        }
        let outs = if count == 0 { &[][..] } else { std::slice::from_raw_parts(outcomes, count) };
        emit(out, SpkMeasurement(SharpMeasurement::new(space, gens, outs)?))
    })
}

#[no_mangle]
pub unsafe extern "C" fn spk_measurement_free(element: *mut SpkMeasurement) {
    if !element.is_null() {
        drop(Box::from_raw(element));
    }
}

/// Exact outcome probability as numerator / denominator.
#[no_mangle]
pub unsafe extern "C" fn spk_outcome_probability(
    state: *const SpkState,
    element: *const SpkMeasurement,
    numerator: *mut i64,
    denominator: *mut i64,
) -> i32 {
    guard(|| {
        let p = outcome_probability(&handle(state, "state")?.0, &handle(element, "element")?.0)?;
        if numerator.is_null() || denominator.is_null() {
            return Err(null("out"));
        }
        *numerator = *p.numer();
        *denominator = *p.denom();
        Ok(())
    })
}

/// Posterior state after observing `element`. Fails with
/// `SPK_ERR_IMPOSSIBLE_OUTCOME` when the outcome has probability 0.
#[no_mangle]
pub unsafe extern "C" fn spk_update(
    state: *const SpkState,
    element: *const SpkMeasurement,
    out: *mut *mut SpkState,
) -> i32 {
    guard(|| {
        let post = update(&handle(state, "state")?.0, &handle(element, "element")?.0)?;
        emit(out, SpkState(post))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes_match_the_library() {
        let cases = [
            (Error::ZeroObservable, SPK_ERR_ZERO_OBSERVABLE),
            (Error::InconsistentOutcomes, SPK_ERR_INCONSISTENT_OUTCOMES),
            (Error::NotCoarse, SPK_ERR_NOT_COARSE),
            (Error::NotCommuting, SPK_ERR_NOT_COMMUTING),
            (Error::CoarseGenerator, SPK_ERR_COARSE_GENERATOR),
            (Error::NotIsotropic, SPK_ERR_NOT_ISOTROPIC),
            (Error::ImpossibleOutcome, SPK_ERR_IMPOSSIBLE_OUTCOME),
            (Error::EvenDimension(4), SPK_ERR_EVEN_DIMENSION),
            (Error::Inconsistent, SPK_ERR_INCONSISTENT),
            (Error::NotProjector, SPK_ERR_NOT_PROJECTOR),
            (Error::InvalidModulus(1), SPK_ERR_INVALID_MODULUS),
            (Error::DimensionMismatch { expected: 2, found: 3 }, SPK_ERR_DIMENSION_MISMATCH),
            (Error::TooLarge { size: 2, limit: 1 }, SPK_ERR_TOO_LARGE),
            (Error::InvalidOutcome { outcome: 1, degeneracy: 3 }, SPK_ERR_INVALID_OUTCOME),
            (Error::Syntax { offset: 0, message: String::new() }, SPK_ERR_SYNTAX),
            (Error::IndexOutOfRange { index: 3, offset: 0, n: 2 }, SPK_ERR_INDEX_OUT_OF_RANGE),
            (Error::Document(String::new()), SPK_ERR_DOCUMENT),
        ];
        for (e, code) in cases {
            assert_eq!(e.code(), code, "{e}");
        }
    }
}
