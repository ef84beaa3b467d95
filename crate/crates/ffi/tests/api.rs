use std::ffi::{c_char, CStr, CString};
use std::ptr;

use qrees_ffi::*;

const CUSP: &str = "field Q\nchart x y\ngen x^2+y^3 : 2\n";
const CHAR_TWO: &str = "field F 2\nchart x y z\ngen (x^2 + y^2*z) : 2\n";

fn parse(text: &str) -> (QreesStatus, *mut QreesProblem) {
    let c = CString::new(text).unwrap();
    let mut handle = ptr::null_mut();
    let status = unsafe { qrees_problem_parse(c.as_ptr(), &mut handle) };
    (status, handle)
}

fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { qrees_string_free(s) };
    out
}

fn last_error() -> String {
    take(qrees_last_error())
}

#[test]
fn diff_through_the_c_api() {
    let (status, p) = parse(CHAR_TWO);
    assert_eq!(status, QreesStatus::Ok);
    let cmd = CString::new("diff").unwrap();
    let mut out = ptr::null_mut();
    let status = unsafe { qrees_run(p, cmd.as_ptr(), ptr::null(), &mut out) };
    assert_eq!(status, QreesStatus::Ok);
    assert_eq!(take(out), "(x^2+y^2*z) : 2\ny^2 : 1\n");
    unsafe { qrees_problem_free(p) };
}

#[test]
fn ord_with_options() {
    let (_, p) = parse(CHAR_TWO);
    let point = CString::new("0,0,0").unwrap();
    let mut opts = qrees_options_default();
    opts.point = point.as_ptr();
    opts.json = true;
    let cmd = CString::new("ord").unwrap();
    let mut out = ptr::null_mut();
    let status = unsafe { qrees_run(p, cmd.as_ptr(), &opts, &mut out) };
    assert_eq!(status, QreesStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v["ord"], "1");
    unsafe { qrees_problem_free(p) };
}

#[test]
fn resolve_json_and_error_codes() {
    let (_, p) = parse(CUSP);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { qrees_resolve_json(p, 50, &mut out) }, QreesStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v["status"], "resolved");
    assert_eq!(v["steps"].as_array().unwrap().len(), 1);

    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { qrees_resolve_json(p, 0, &mut out) },
        QreesStatus::NotTerminated
    );
    let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v["status"], "not_terminated");
    assert!(last_error().starts_with("NOT_TERMINATED"));
    unsafe { qrees_problem_free(p) };

    let (_, p) = parse(CHAR_TWO);
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { qrees_resolve_json(p, 50, &mut out) },
        QreesStatus::UnsupportedCharacteristic
    );
    assert!(out.is_null());
    assert!(last_error().starts_with("UNSUPPORTED_CHARACTERISTIC"));
    unsafe { qrees_problem_free(p) };
}

#[test]
fn parse_errors_and_null_arguments() {
    let (status, p) = parse("field Q\nchart x\nbogus\n");
    assert_eq!(status, QreesStatus::ParseError);
    assert!(p.is_null());
    assert!(last_error().contains("line 3"));

    let mut handle = ptr::null_mut();
    assert_eq!(
        unsafe { qrees_problem_parse(ptr::null(), &mut handle) },
        QreesStatus::NullArgument
    );
    let mut out = ptr::null_mut();
    let cmd = CString::new("diff").unwrap();
    assert_eq!(
        unsafe { qrees_run(ptr::null(), cmd.as_ptr(), ptr::null(), &mut out) },
        QreesStatus::NullArgument
    );
    unsafe {
        qrees_problem_free(ptr::null_mut());
        qrees_string_free(ptr::null_mut());
    }
}

#[test]
fn unknown_command_is_a_precondition_error() {
    let (_, p) = parse(CUSP);
    let cmd = CString::new("explode").unwrap();
    let mut out = ptr::null_mut();
    let status = unsafe { qrees_run(p, cmd.as_ptr(), ptr::null(), &mut out) };
    assert_eq!(status, QreesStatus::PreconditionViolated);
    assert!(last_error().contains("explode"));
    unsafe { qrees_problem_free(p) };
}
