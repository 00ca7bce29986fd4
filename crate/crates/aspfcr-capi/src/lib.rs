//! C ABI for the solver.
//!
//! The surface is deliberately small: parse-and-ground a program into an
//! opaque handle, solve it into an opaque result, and read the result out as
//! strings. Every function returns an integer status; strings returned to
//! the caller are heap-allocated and must be released with
//! `aspfcr_string_free`, handles with their matching `_free` function.
//!
//! `include/aspfcr.h` mirrors this surface for C and C++ callers.

use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Duration;

use aspfcr::cli::model_line;
use aspfcr::crsolver::{solve_cr, support_label};
use aspfcr::grounder::{ground, stats, GroundProgram};
use aspfcr::parser::parse;
use aspfcr::solver::{solve, SolveLimits};

pub const ASPFCR_OK: i32 = 0;
pub const ASPFCR_INVALID_ARG: i32 = 1;
pub const ASPFCR_PARSE: i32 = 2;
pub const ASPFCR_GROUND: i32 = 3;
pub const ASPFCR_EVAL: i32 = 4;
/// The time budget expired before any answer was found.
pub const ASPFCR_LIMIT: i32 = 5;
pub const ASPFCR_INTERNAL: i32 = 6;

/// A parsed and grounded program.
pub struct AspfcrProgram {
    g: GroundProgram,
}

/// Answers from one solve call: visible projection and support label per
/// answer (the label is empty for programs without cr-rules), plus whether
/// the enumeration is known to be exhaustive.
pub struct AspfcrResult {
    answers: Vec<(String, String)>,
    complete: bool,
}

fn owned_c_string(s: &str) -> *mut c_char {
    let cleaned: String = s.chars().map(|c| if c == '\0' { ' ' } else { c }).collect();
    CString::new(cleaned).expect("NUL bytes removed").into_raw()
}

unsafe fn set_err(err: *mut *mut c_char, msg: &str) {
    if !err.is_null() {
        *err = owned_c_string(msg);
    }
}

/// Returns the library version as a static string; do not free it.
#[no_mangle]
pub extern "C" fn aspfcr_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Frees a string returned by this library. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn aspfcr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses and grounds `src` (UTF-8, NUL-terminated). On success stores a
/// handle in `*out`; on failure stores a message in `*err` when `err` is
/// non-NULL.
#[no_mangle]
pub unsafe extern "C" fn aspfcr_program_parse(
    src: *const c_char,
    out: *mut *mut AspfcrProgram,
    err: *mut *mut c_char,
) -> i32 {
    if src.is_null() || out.is_null() {
        set_err(err, "null argument");
        return ASPFCR_INVALID_ARG;
    }
    let text = match CStr::from_ptr(src).to_str() {
        Ok(t) => t.to_string(),
        Err(_) => {
            set_err(err, "program source is not valid UTF-8");
            return ASPFCR_INVALID_ARG;
        }
    };
    let outcome = catch_unwind(AssertUnwindSafe(|| -> Result<GroundProgram, (i32, String)> {
        let prog = parse(&text).map_err(|e| (ASPFCR_PARSE, e.to_string()))?;
        ground(&prog).map_err(|e| (ASPFCR_GROUND, e.to_string()))
    }));
    match outcome {
        Ok(Ok(g)) => {
            *out = Box::into_raw(Box::new(AspfcrProgram { g }));
            ASPFCR_OK
        }
        Ok(Err((code, msg))) => {
            set_err(err, &msg);
            code
        }
        Err(_) => {
            set_err(err, "internal panic");
            ASPFCR_INTERNAL
        }
    }
}

/// Frees a program handle. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn aspfcr_program_free(p: *mut AspfcrProgram) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Returns the ground program in concrete syntax.
#[no_mangle]
pub unsafe extern "C" fn aspfcr_program_ground_text(p: *const AspfcrProgram) -> *mut c_char {
    if p.is_null() {
        return std::ptr::null_mut();
    }
    owned_c_string(&(*p).g.render())
}

/// Returns per-rule instantiation counts as CSV (line,hash,instances).
#[no_mangle]
pub unsafe extern "C" fn aspfcr_program_stats_csv(p: *const AspfcrProgram) -> *mut c_char {
    if p.is_null() {
        return std::ptr::null_mut();
    }
    owned_c_string(&stats(&(*p).g).to_csv())
}

/// Solves the program. `max_models` 0 means all answers;
/// `time_budget_ms` 0 means no budget. On success (including a budget that
/// expired after at least one answer) stores a result handle in `*out`.
/// Returns `ASPFCR_LIMIT`, with a valid empty result in `*out`, when the
/// budget expired before any answer was found.
#[no_mangle]
pub unsafe extern "C" fn aspfcr_solve(
    p: *const AspfcrProgram,
    max_models: usize,
    time_budget_ms: u64,
    out: *mut *mut AspfcrResult,
    err: *mut *mut c_char,
) -> i32 {
    if p.is_null() || out.is_null() {
        set_err(err, "null argument");
        return ASPFCR_INVALID_ARG;
    }
    let g = &(*p).g;
    let limits = SolveLimits {
        max_models,
        time_budget: (time_budget_ms > 0).then(|| Duration::from_millis(time_budget_ms)),
    };
    let outcome =
        catch_unwind(AssertUnwindSafe(|| -> Result<(Vec<(String, String)>, bool), String> {
            if g.cr_rules.is_empty() {
                let res = solve(g, &limits).map_err(|e| e.to_string())?;
                let answers = res
                    .models
                    .iter()
                    .map(|m| (model_line(m, &g.shows), String::new()))
                    .collect();
                Ok((answers, res.timed_out))
            } else {
                let res = solve_cr(g, &limits).map_err(|e| e.to_string())?;
                let answers = res
                    .answers
                    .iter()
                    .map(|a| (model_line(&a.model, &g.shows), support_label(g, &a.support)))
                    .collect();
                Ok((answers, res.timed_out))
            }
        }));
    match outcome {
        Ok(Ok((answers, timed_out))) => {
            let truncated = max_models > 0 && answers.len() >= max_models;
            let empty_after_timeout = timed_out && answers.is_empty();
            let result =
                AspfcrResult { answers, complete: !timed_out && !truncated };
            *out = Box::into_raw(Box::new(result));
            if empty_after_timeout {
                ASPFCR_LIMIT
            } else {
                ASPFCR_OK
            }
        }
        Ok(Err(msg)) => {
            set_err(err, &msg);
            ASPFCR_EVAL
        }
        Err(_) => {
            set_err(err, "internal panic");
            ASPFCR_INTERNAL
        }
    }
}

/// Frees a result handle. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn aspfcr_result_free(r: *mut AspfcrResult) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Number of answers in the result.
#[no_mangle]
pub unsafe extern "C" fn aspfcr_result_count(r: *const AspfcrResult) -> usize {
    if r.is_null() {
        return 0;
    }
    (*r).answers.len()
}

/// 1 when the enumeration is known exhaustive, 0 when answers may be
/// missing (budget expired or the model cap was reached).
#[no_mangle]
pub unsafe extern "C" fn aspfcr_result_complete(r: *const AspfcrResult) -> i32 {
    if r.is_null() {
        return 0;
    }
    (*r).complete as i32
}

/// The i-th answer's visible literals, sorted and space-separated. NULL
/// when out of range.
#[no_mangle]
pub unsafe extern "C" fn aspfcr_result_model(r: *const AspfcrResult, i: usize) -> *mut c_char {
    if r.is_null() {
        return std::ptr::null_mut();
    }
    match (&*r).answers.get(i) {
        Some((m, _)) => owned_c_string(m),
        None => std::ptr::null_mut(),
    }
}

/// The i-th answer's support label, e.g. `{cr@4[P=p2]}`; the empty string
/// for programs without cr-rules. NULL when out of range.
#[no_mangle]
pub unsafe extern "C" fn aspfcr_result_support(r: *const AspfcrResult, i: usize) -> *mut c_char {
    if r.is_null() {
        return std::ptr::null_mut();
    }
    match (&*r).answers.get(i) {
        Some((_, s)) => owned_c_string(s),
        None => std::ptr::null_mut(),
    }
}
