use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use ncrit_ffi::*;

fn parse(s: &str) -> *mut NcritFormula {
    let c = CString::new(s).unwrap();
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { ncrit_formula_parse(c.as_ptr(), &mut f) }, NcritStatus::Ok);
    f
}

fn last_error() -> String {
    let p = ncrit_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn measures_and_verdicts() {
    let f = parse("inv(x1)*x1 - 1");
    let (mut n, mut s, mut h) = (0, 0, 0);
    assert_eq!(unsafe { ncrit_formula_measures(f, &mut n, &mut s, &mut h) }, NcritStatus::Ok);
    assert_eq!((n, h), (1, 1));
    assert!(s > 0);

    let mut rep = ptr::null_mut();
    assert_eq!(unsafe { ncrit_test_hitset(f, -1, &mut rep) }, NcritStatus::Ok);
    let mut v = NcritVerdict::Nonzero;
    assert_eq!(unsafe { ncrit_report_verdict(rep, &mut v) }, NcritStatus::Ok);
    assert_eq!(v, NcritVerdict::Zero);
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { ncrit_report_json(rep, &mut json) }, NcritStatus::Ok);
    let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_owned();
    assert!(text.contains("\"verdict\":\"ZERO\""));
    unsafe {
        ncrit_string_free(json);
        ncrit_report_free(rep);
        ncrit_formula_free(f);
    }
}

#[test]
fn errors_set_last_error() {
    ncrit_clear_error();
    assert!(ncrit_last_error().is_null());
    let bad = CString::new("inv(").unwrap();
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { ncrit_formula_parse(bad.as_ptr(), &mut f) }, NcritStatus::ParseError);
    assert!(f.is_null());
    assert!(!last_error().is_empty());

    assert_eq!(unsafe { ncrit_formula_parse(ptr::null(), &mut f) }, NcritStatus::NullArgument);
    assert!(last_error().contains("null"));

    let g = parse("x1*x2");
    let mut rep = ptr::null_mut();
    assert_eq!(unsafe { ncrit_test_hitset(g, 3, &mut rep) }, NcritStatus::Infeasible);
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { ncrit_eval_int(g, 1, 1, [1i64].as_ptr(), &mut json) }, NcritStatus::InvalidArgument);
    unsafe { ncrit_formula_free(g) };
    // freeing NULL is a no-op
    unsafe {
        ncrit_formula_free(ptr::null_mut());
        ncrit_report_free(ptr::null_mut());
        ncrit_string_free(ptr::null_mut());
    }
}

#[test]
fn eval_reports_value_and_not_defined() {
    let f = parse("x1*x2 - x2*x1");
    let mut json = ptr::null_mut();
    // x1 = E12, x2 = E11: the commutator is −E12
    let pt = [0i64, 1, 0, 0, 1, 0, 0, 0];
    assert_eq!(unsafe { ncrit_eval_int(f, 2, 2, pt.as_ptr(), &mut json) }, NcritStatus::Ok);
    let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_owned();
    assert_eq!(text, r#"{"result":"VALUE","value":[["0","-1"],["0","0"]]}"#);
    unsafe {
        ncrit_string_free(json);
        ncrit_formula_free(f);
    }
}

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn header_declares_every_entry_point() {
    let h = std::fs::read_to_string(crate_dir().join("include/ncrit.h")).unwrap();
    for sym in [
        "ncrit_last_error",
        "ncrit_clear_error",
        "ncrit_formula_parse",
        "ncrit_formula_free",
        "ncrit_formula_measures",
        "ncrit_test_hitset",
        "ncrit_test_random",
        "ncrit_report_verdict",
        "ncrit_report_json",
        "ncrit_report_free",
        "ncrit_eval_int",
        "ncrit_string_free",
        "typedef struct NcritFormula NcritFormula",
    ] {
        assert!(h.contains(sym), "{sym} missing from header");
    }
}

/// Compiles tests/c/smoke.c against the header and the static library.
#[test]
fn c_program_links_and_runs() {
    let Ok(cc) = which_cc() else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("libncrit_ffi.a");
    assert!(lib.exists(), "{} not built", lib.display());
    let exe = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("ncrit_smoke");
    let status = Command::new(cc)
        .arg(crate_dir().join("tests/c/smoke.c"))
        .arg("-I")
        .arg(crate_dir().join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}

fn which_cc() -> Result<&'static str, ()> {
    ["cc", "clang", "gcc"]
        .into_iter()
        .find(|c| Command::new(c).arg("--version").output().is_ok_and(|o| o.status.success()))
        .ok_or(())
}
