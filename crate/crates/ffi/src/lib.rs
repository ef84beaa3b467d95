//! C API over the `qrees` crate: opaque problem handles, integer status
//! codes and heap strings owned by the caller until released with
//! [`qrees_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use qrees::cli::{run_command, Command, Options};
use qrees::problem::{parse_problem, ProblemFile};
use qrees::Error;

/// Status codes; values 2 to 6 match the command line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QreesStatus {
    Ok = 0,
    ParseError = 2,
    UnsupportedCharacteristic = 3,
    ChartSplitRequired = 4,
    NotTerminated = 5,
    PreconditionViolated = 6,
    NullArgument = 7,
    InvalidUtf8 = 8,
}

impl QreesStatus {
    fn from_code(code: i32) -> QreesStatus {
        match code {
            0 => QreesStatus::Ok,
            2 => QreesStatus::ParseError,
            3 => QreesStatus::UnsupportedCharacteristic,
            4 => QreesStatus::ChartSplitRequired,
            5 => QreesStatus::NotTerminated,
            _ => QreesStatus::PreconditionViolated,
        }
    }
}

/// A parsed problem file. Opaque to C.
pub struct QreesProblem {
    inner: ProblemFile,
}

/// Command flags. String fields may be null; `cap` null means the default.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct QreesOptions {
    pub json: bool,
    pub dot: bool,
    pub n_max: u32,
    pub max_steps: usize,
    pub cap: *const c_char,
    pub point: *const c_char,
    pub var: *const c_char,
    pub center: *const c_char,
    pub chart_var: *const c_char,
    pub algebra: *const c_char,
    pub poly: *const c_char,
    pub weight: *const c_char,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(e: &Error) -> QreesStatus {
    set_error(e.to_string());
    QreesStatus::from_code(e.code())
}

/// # Safety
/// `p` is null or a valid NUL-terminated string.
unsafe fn opt_str(p: *const c_char) -> Result<Option<String>, QreesStatus> {
    if p.is_null() {
        return Ok(None);
    }
    // SAFETY: guaranteed by the caller.
    match unsafe { CStr::from_ptr(p) }.to_str() {
        Ok(s) => Ok(Some(s.to_owned())),
        Err(_) => {
            set_error("argument is not valid UTF-8".into());
            Err(QreesStatus::InvalidUtf8)
        }
    }
}

/// # Safety
/// `p` is a valid NUL-terminated string or null.
unsafe fn req_str(p: *const c_char) -> Result<String, QreesStatus> {
    // SAFETY: guaranteed by the caller.
    match unsafe { opt_str(p) }? {
        Some(s) => Ok(s),
        None => {
            set_error("required argument is null".into());
            Err(QreesStatus::NullArgument)
        }
    }
}

fn give_string(s: String, out: *mut *mut c_char) {
    let c = CString::new(s.replace('\0', " ")).expect("interior NULs removed");
    // SAFETY: callers checked `out` for null.
    unsafe { *out = c.into_raw() };
}

/// Default flags: text output, `n_max` 4, 50 resolution steps.
#[no_mangle]
pub extern "C" fn qrees_options_default() -> QreesOptions {
    let d = Options::default();
    QreesOptions {
        json: d.json,
        dot: d.dot,
        n_max: d.n_max,
        max_steps: d.max_steps,
        cap: ptr::null(),
        point: ptr::null(),
        var: ptr::null(),
        center: ptr::null(),
        chart_var: ptr::null(),
        algebra: ptr::null(),
        poly: ptr::null(),
        weight: ptr::null(),
    }
}

/// Parses a problem file. On success `*out` receives a handle to release
/// with [`qrees_problem_free`].
///
/// # Safety
/// `text` is a NUL-terminated string; `out` is a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qrees_problem_parse(text: *const c_char, out: *mut *mut QreesProblem) -> QreesStatus {
    if out.is_null() {
        set_error("output pointer is null".into());
        return QreesStatus::NullArgument;
    }
    // SAFETY: guaranteed by the caller.
    let text = match unsafe { req_str(text) } {
        Ok(t) => t,
        Err(s) => return s,
    };
    match parse_problem(&text) {
        Ok(p) => {
            // SAFETY: `out` is non-null and valid per the contract.
            unsafe { *out = Box::into_raw(Box::new(QreesProblem { inner: p })) };
            QreesStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Releases a handle from [`qrees_problem_parse`]. Null is ignored.
///
/// # Safety
/// `problem` is null or a live handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qrees_problem_free(problem: *mut QreesProblem) {
    if !problem.is_null() {
        // SAFETY: the handle came from `Box::into_raw` in `qrees_problem_parse`.
        drop(unsafe { Box::from_raw(problem) });
    }
}

/// Runs a command (`diff`, `sing`, `ord`, ..., `resolve`). The rendered
/// output goes to `*out` whenever the status is `Ok` or `NotTerminated`.
///
/// # Safety
/// `problem` is a live handle, `command` a NUL-terminated string, `options`
/// null or valid with valid string fields, and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qrees_run(
    problem: *const QreesProblem,
    command: *const c_char,
    options: *const QreesOptions,
    out: *mut *mut c_char,
) -> QreesStatus {
    if problem.is_null() || out.is_null() {
        set_error("problem handle or output pointer is null".into());
        return QreesStatus::NullArgument;
    }
    // SAFETY: guaranteed by the caller.
    let problem = unsafe { &(*problem).inner };
    // SAFETY: guaranteed by the caller.
    let command: Command = match unsafe { req_str(command) } {
        Ok(c) => match c.parse() {
            Ok(c) => c,
            Err(e) => return fail(&e),
        },
        Err(s) => return s,
    };
    let raw = if options.is_null() {
        qrees_options_default()
    } else {
        // SAFETY: guaranteed by the caller.
        unsafe { *options }
    };
    // SAFETY: string fields are null or valid per the contract.
    let opts = match unsafe { convert_options(&raw) } {
        Ok(o) => o,
        Err(s) => return s,
    };
    match run_command(command, problem, &opts) {
        Ok(output) => {
            give_string(output.text, out);
            let status = QreesStatus::from_code(output.code);
            if status != QreesStatus::Ok {
                set_error(Error::NotTerminated(opts.max_steps).to_string());
            }
            status
        }
        Err(e) => fail(&e),
    }
}

/// # Safety
/// String fields of `raw` are null or valid NUL-terminated strings.
unsafe fn convert_options(raw: &QreesOptions) -> Result<Options, QreesStatus> {
    let mut opts = Options {
        json: raw.json,
        dot: raw.dot,
        n_max: raw.n_max,
        max_steps: raw.max_steps,
        ..Options::default()
    };
    // SAFETY: guaranteed by the caller for every field below.
    unsafe {
        if let Some(cap) = opt_str(raw.cap)? {
            opts.cap = cap.parse().map_err(|e| fail(&e))?;
        }
        opts.point = opt_str(raw.point)?;
        opts.var = opt_str(raw.var)?;
        opts.center = opt_str(raw.center)?;
        opts.chart_var = opt_str(raw.chart_var)?;
        opts.algebra = opt_str(raw.algebra)?;
        opts.poly = opt_str(raw.poly)?;
        opts.weight = opt_str(raw.weight)?;
    }
    Ok(opts)
}

/// Shorthand for `resolve` with JSON output and the given step budget.
///
/// # Safety
/// `problem` is a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qrees_resolve_json(
    problem: *const QreesProblem,
    max_steps: usize,
    out: *mut *mut c_char,
) -> QreesStatus {
    let mut opts = qrees_options_default();
    opts.json = true;
    opts.max_steps = max_steps;
    let command = c"resolve";
    // SAFETY: forwarded contract; `command` and `opts` are valid.
    unsafe { qrees_run(problem, command.as_ptr(), &opts, out) }
}

/// Message for the last failure on this thread, or null. Release with
/// [`qrees_string_free`].
#[no_mangle]
pub extern "C" fn qrees_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null_mut(), |c| c.clone().into_raw()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` is null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qrees_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: the string came from `CString::into_raw`.
        drop(unsafe { CString::from_raw(s) });
    }
}
