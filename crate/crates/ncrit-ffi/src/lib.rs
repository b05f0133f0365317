//! C ABI over ncrit.
//!
//! Handles are opaque and owned by the caller once returned; each has a
//! matching `*_free`. Every entry point returns an `NcritStatus`. On failure
//! the message is available from `ncrit_last_error` on the same thread until
//! the next failing call. Strings returned through out-parameters are freed
//! with `ncrit_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ncrit::assembly::{self, DeskParams, Verdict};
use ncrit::field::Rat;
use ncrit::formula::{eval, parse, EvalResult, Formula};
use ncrit::linalg::Mat;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NcritStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidArgument = 4,
    Infeasible = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NcritVerdict {
    Zero = 0,
    Nonzero = 1,
    LikelyZero = 2,
}

impl From<Verdict> for NcritVerdict {
    fn from(v: Verdict) -> NcritVerdict {
        match v {
            Verdict::Zero => NcritVerdict::Zero,
            Verdict::Nonzero => NcritVerdict::Nonzero,
            Verdict::LikelyZero => NcritVerdict::LikelyZero,
        }
    }
}

/// A parsed rational formula.
pub struct NcritFormula(Formula);

/// The outcome of a test: verdict plus the full JSON report.
pub struct NcritReport {
    verdict: NcritVerdict,
    json: String,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let c = CString::new(msg.into().replace('\0', " ")).unwrap();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

type Res<T> = Result<T, (NcritStatus, String)>;

fn guard(f: impl FnOnce() -> Res<()>) -> NcritStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => NcritStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            NcritStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Res<&'a T> {
    p.as_ref().ok_or((NcritStatus::NullArgument, format!("{what} is null")))
}

fn out<T>(p: *mut T, what: &str) -> Res<*mut T> {
    if p.is_null() {
        Err((NcritStatus::NullArgument, format!("{what} is null")))
    } else {
        Ok(p)
    }
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Last error message on this thread, or NULL. Owned by the library.
#[no_mangle]
pub extern "C" fn ncrit_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

#[no_mangle]
pub extern "C" fn ncrit_clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

/// Parse formula text (NUL-terminated UTF-8) into `*out_formula`.
///
/// # Safety
/// `text` must be a valid C string; `out_formula` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ncrit_formula_parse(text: *const c_char, out_formula: *mut *mut NcritFormula) -> NcritStatus {
    guard(|| {
        let dst = out(out_formula, "out_formula")?;
        if text.is_null() {
            return Err((NcritStatus::NullArgument, "text is null".into()));
        }
        let s = CStr::from_ptr(text).to_str().map_err(|e| (NcritStatus::InvalidUtf8, e.to_string()))?;
        let f = parse(s).map_err(|e| (NcritStatus::ParseError, e.to_string()))?;
        *dst = Box::into_raw(Box::new(NcritFormula(f)));
        Ok(())
    })
}

/// # Safety
/// `f` must come from `ncrit_formula_parse` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ncrit_formula_free(f: *mut NcritFormula) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Number of variables, size and inversion height.
///
/// # Safety
/// `f` must be a live handle; the out pointers must be writable or NULL.
#[no_mangle]
pub unsafe extern "C" fn ncrit_formula_measures(
    f: *const NcritFormula,
    nvars: *mut usize,
    size: *mut usize,
    height: *mut usize,
) -> NcritStatus {
    guard(|| {
        let f = &borrow(f, "formula")?.0;
        for (p, v) in [(nvars, f.nvars()), (size, f.size()), (height, f.height())] {
            if !p.is_null() {
                *p = v;
            }
        }
        Ok(())
    })
}

fn report(verdict: Verdict, json: String, dst: *mut *mut NcritReport) {
    let r = NcritReport { verdict: verdict.into(), json };
    unsafe { *dst = Box::into_raw(Box::new(r)) };
}

/// Deterministic test against the desk-parameter hitting set. `height` < 0
/// selects the formula's own inversion height.
///
/// # Safety
/// `f` must be a live handle; `out_report` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ncrit_test_hitset(f: *const NcritFormula, height: i32, out_report: *mut *mut NcritReport) -> NcritStatus {
    guard(|| {
        let dst = out(out_report, "out_report")?;
        let f = &borrow(f, "formula")?.0;
        let h = usize::try_from(height).ok();
        let rep = assembly::test_formula(f, h, &DeskParams::default()).map_err(|e| (NcritStatus::Infeasible, e.to_string()))?;
        report(rep.verdict, serde_json::to_string(&rep).unwrap(), dst);
        Ok(())
    })
}

/// Randomized test: `trials` points per dimension 1..=max_dim.
///
/// # Safety
/// `f` must be a live handle; `out_report` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ncrit_test_random(
    f: *const NcritFormula,
    max_dim: usize,
    trials: usize,
    seed: u64,
    out_report: *mut *mut NcritReport,
) -> NcritStatus {
    guard(|| {
        let dst = out(out_report, "out_report")?;
        let f = &borrow(f, "formula")?.0;
        let rep = assembly::random_oracle_test(f, max_dim, trials, seed);
        report(rep.verdict, serde_json::to_string(&rep).unwrap(), dst);
        Ok(())
    })
}

/// # Safety
/// `r` must be a live report.
#[no_mangle]
pub unsafe extern "C" fn ncrit_report_verdict(r: *const NcritReport, verdict: *mut NcritVerdict) -> NcritStatus {
    guard(|| {
        let r = borrow(r, "report")?;
        *out(verdict, "verdict")? = r.verdict;
        Ok(())
    })
}

/// JSON form of the report, to be released with `ncrit_string_free`.
///
/// # Safety
/// `r` must be a live report; `json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ncrit_report_json(r: *const NcritReport, json: *mut *mut c_char) -> NcritStatus {
    guard(|| {
        let r = borrow(r, "report")?;
        *out(json, "json")? = to_c_string(r.json.clone());
        Ok(())
    })
}

/// # Safety
/// `r` must come from a test call and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ncrit_report_free(r: *mut NcritReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Evaluate at `count` integer matrices of size dim×dim given row-major,
/// back to back. Writes `{"result":"VALUE","value":…}` or
/// `{"result":"NOT_DEFINED","path":…}` to `*json`.
///
/// # Safety
/// `entries` must hold count·dim·dim values; `json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ncrit_eval_int(
    f: *const NcritFormula,
    count: usize,
    dim: usize,
    entries: *const i64,
    json: *mut *mut c_char,
) -> NcritStatus {
    guard(|| {
        let dst = out(json, "json")?;
        let f = &borrow(f, "formula")?.0;
        if dim == 0 || count < f.nvars() {
            return Err((NcritStatus::InvalidArgument, format!("need {} matrices of positive dimension", f.nvars())));
        }
        if entries.is_null() {
            return Err((NcritStatus::NullArgument, "entries is null".into()));
        }
        let vals = std::slice::from_raw_parts(entries, count * dim * dim);
        let point: Vec<Mat<Rat>> = vals
            .chunks(dim * dim)
            .map(|c| Mat::new((), dim, dim, c.iter().map(|&v| Rat::int(v)).collect()).unwrap())
            .collect();
        let v = match eval(f, &point, dim).map_err(|e| (NcritStatus::InvalidArgument, e.to_string()))? {
            EvalResult::Value(m) => serde_json::json!({ "result": "VALUE", "value": m }),
            EvalResult::NotDefined(p) => serde_json::json!({ "result": "NOT_DEFINED", "path": p }),
        };
        *dst = to_c_string(v.to_string());
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ncrit_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
