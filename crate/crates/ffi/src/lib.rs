//! C ABI over `ds-core`.
//!
//! Every function returns a [`DsStatus`]. On failure the message is kept per thread and
//! read with [`ds_last_error_message`]. Strings handed out must be released with
//! [`ds_string_free`], handles with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use ds_core::algebra::CyclicAlgebra;
use ds_core::base::{Poly, Tower};
use ds_core::module::{FieldSpec, FiniteModule};
use ds_core::parse::{parse_elem, parse_poly};
use ds_core::report::{self, prime_power, RunConfig};
use ds_core::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Config = 3,
    Parse = 4,
    Precondition = 5,
    Bound = 6,
    Math = 7,
    CheckFailed = 8,
    Panic = 9,
}

/// Opaque handle to a central division algebra `D = (F_q^d(T)/F_q(T), σ, r)` with its order.
pub struct DsAlgebra {
    alg: CyclicAlgebra,
}

/// Opaque handle to a module over a finite field.
pub struct DsModule {
    module: FiniteModule,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> DsStatus {
    match e {
        Error::Config(_) => DsStatus::Config,
        Error::Parse(_) => DsStatus::Parse,
        Error::Precondition(_) => DsStatus::Precondition,
        Error::Bound(_) => DsStatus::Bound,
        _ => DsStatus::Math,
    }
}

enum Fail {
    Null,
    Utf8,
    Core(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Core(e)
    }
}

fn guard(f: impl FnOnce() -> Result<DsStatus, Fail>) -> DsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => {
            if s == DsStatus::Ok {
                set_error("");
            }
            s
        }
        Ok(Err(Fail::Null)) => {
            set_error("null pointer argument");
            DsStatus::NullPointer
        }
        Ok(Err(Fail::Utf8)) => {
            set_error("string argument is not valid UTF-8");
            DsStatus::InvalidUtf8
        }
        Ok(Err(Fail::Core(e))) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic");
            DsStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(Fail::Null);
    }
    CStr::from_ptr(s).to_str().map_err(|_| Fail::Utf8)
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null);
    }
    *out = CString::new(s).map_err(|_| Fail::Utf8)?.into_raw();
    Ok(())
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null)
}

/// Message for the last failing call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn ds_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn ds_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Build the algebra for `q`, `d` and `r` (e.g. `"T^2+2"`).
///
/// # Safety
/// `r` must be a NUL-terminated string, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ds_algebra_new(q: u64, d: u32, r: *const c_char, out: *mut *mut DsAlgebra) -> DsStatus {
    guard(|| {
        if out.is_null() {
            return Err(Fail::Null);
        }
        let r = read_str(r)?;
        let (p, e) = prime_power(q)?;
        let tower = Tower::from_pqd(p, e, d)?;
        let r: Poly = parse_poly(&tower.fq, r)?;
        let alg = CyclicAlgebra::new(&tower, &r)?;
        *out = Box::into_raw(Box::new(DsAlgebra { alg }));
        Ok(DsStatus::Ok)
    })
}

/// # Safety
/// `a` must come from [`ds_algebra_new`] or be null.
#[no_mangle]
pub unsafe extern "C" fn ds_algebra_free(a: *mut DsAlgebra) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// Local invariants as a JSON object `{"place": "k/d", ...}`.
///
/// # Safety
/// `a` must be a live handle, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ds_algebra_invariants_json(a: *const DsAlgebra, out: *mut *mut c_char) -> DsStatus {
    guard(|| {
        let a = handle(a)?;
        let map: std::collections::BTreeMap<String, String> =
            a.alg.invariants().iter().map(|(pl, v)| (pl.to_string(), v.to_string())).collect();
        put_string(out, serde_json::to_string(&map).expect("serializes"))?;
        Ok(DsStatus::Ok)
    })
}

/// # Safety
/// `a` must be a live handle, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ds_algebra_is_maximal(a: *const DsAlgebra, out: *mut bool) -> DsStatus {
    guard(|| {
        let a = handle(a)?;
        if out.is_null() {
            return Err(Fail::Null);
        }
        *out = a.alg.is_maximal();
        Ok(DsStatus::Ok)
    })
}

/// log_q of the index `#(O_D / b O_D)` for `b` written in `T`, `h`, `z`.
///
/// # Safety
/// `a` must be a live handle, `b` a NUL-terminated string, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ds_algebra_order_index_exp(a: *const DsAlgebra, b: *const c_char, out: *mut u64) -> DsStatus {
    guard(|| {
        let a = handle(a)?;
        let b = parse_elem(&a.alg, read_str(b)?)?;
        if out.is_null() {
            return Err(Fail::Null);
        }
        *out = a.alg.order_index_exp(&b)? as u64;
        Ok(DsStatus::Ok)
    })
}

/// The standard module over `L = F_q^m` with `T ↦ gamma` (a field element encoding).
///
/// # Safety
/// `a` must be a live handle, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ds_module_new_standard(
    a: *const DsAlgebra,
    m: u32,
    gamma: u64,
    out: *mut *mut DsModule,
) -> DsStatus {
    guard(|| {
        let a = handle(a)?;
        if out.is_null() {
            return Err(Fail::Null);
        }
        let module = FiniteModule::standard_finite(&a.alg, m, gamma)?;
        *out = Box::into_raw(Box::new(DsModule { module }));
        Ok(DsStatus::Ok)
    })
}

/// The standard module in A-characteristic `p` (a prime of A, e.g. `"T^2+1"`).
///
/// # Safety
/// `a` must be a live handle, `p` a NUL-terminated string, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ds_module_new_at_prime(
    a: *const DsAlgebra,
    p: *const c_char,
    out: *mut *mut DsModule,
) -> DsStatus {
    guard(|| {
        let a = handle(a)?;
        let p = parse_poly(&a.alg.tower.fq, read_str(p)?)?;
        if out.is_null() {
            return Err(Fail::Null);
        }
        let FieldSpec::Finite { m, t0 } = FieldSpec::for_characteristic(&a.alg, &p)? else {
            return Err(Fail::Core(Error::Invariant("characteristic gave a generic field".into())));
        };
        let module = FiniteModule::standard_finite(&a.alg, m, t0)?;
        *out = Box::into_raw(Box::new(DsModule { module }));
        Ok(DsStatus::Ok)
    })
}

/// # Safety
/// `m` must come from a module constructor or be null.
#[no_mangle]
pub unsafe extern "C" fn ds_module_free(m: *mut DsModule) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Run the checks and write them as a JSON array. Returns `CheckFailed` (with the JSON
/// still written) if any check fails.
///
/// # Safety
/// `m` must be a live handle, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ds_module_verify_json(
    m: *const DsModule,
    samples: u32,
    deg: u32,
    seed: u64,
    out: *mut *mut c_char,
) -> DsStatus {
    guard(|| {
        let m = handle(m)?;
        let checks = m.module.verify(samples as usize, deg as usize, seed)?;
        put_string(out, serde_json::to_string(&checks).expect("serializes"))?;
        if checks.iter().all(|c| c.pass) {
            Ok(DsStatus::Ok)
        } else {
            set_error("a check failed");
            Ok(DsStatus::CheckFailed)
        }
    })
}

/// log_q of the order of the kernel group scheme of `φ_b`.
///
/// # Safety
/// `m` must be a live handle, `b` a NUL-terminated string, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ds_module_scheme_order_exp(m: *const DsModule, b: *const c_char, out: *mut u64) -> DsStatus {
    guard(|| {
        let m = handle(m)?;
        let b = parse_elem(&m.module.alg, read_str(b)?)?;
        if out.is_null() {
            return Err(Fail::Null);
        }
        *out = m.module.evaluate(&b)?.scheme_order_exp(&m.module.field)? as u64;
        Ok(DsStatus::Ok)
    })
}

/// Run a command on a JSON configuration and write the JSON report.
/// `command` is one of `construct`, `verify`, `invariants`, `maximal`, `supersingular`, `endring`.
/// Returns `CheckFailed` (with the report written) when the report does not pass.
///
/// # Safety
/// `command` and `config_json` must be NUL-terminated strings, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ds_run_json(
    command: *const c_char,
    config_json: *const c_char,
    out: *mut *mut c_char,
) -> DsStatus {
    guard(|| {
        let command = read_str(command)?;
        let cfg: RunConfig = serde_json::from_str(read_str(config_json)?)
            .map_err(|e| Error::Parse(format!("configuration: {e}")))?;
        let r = match command {
            "construct" => report::cmd_construct(&cfg)?,
            "verify" => report::cmd_verify(&cfg)?,
            "invariants" => report::cmd_invariants(&cfg)?,
            "maximal" => report::cmd_maximal(&cfg)?,
            "supersingular" => report::cmd_supersingular(&cfg)?,
            "endring" => report::cmd_endring(&cfg)?,
            other => return Err(Fail::Core(Error::Config(format!("unknown command `{other}`")))),
        };
        put_string(out, r.to_json())?;
        if r.pass {
            Ok(DsStatus::Ok)
        } else {
            set_error("report did not pass");
            Ok(DsStatus::CheckFailed)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    fn take(s: *mut c_char) -> String {
        let v = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
        unsafe { ds_string_free(s) };
        v
    }

    fn last_error() -> String {
        unsafe { CStr::from_ptr(ds_last_error_message()) }.to_str().unwrap().to_owned()
    }

    #[test]
    fn algebra_round_trip() {
        let r = CString::new("T^2+2").unwrap();
        let mut a = ptr::null_mut();
        assert_eq!(unsafe { ds_algebra_new(3, 2, r.as_ptr(), &mut a) }, DsStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(unsafe { ds_algebra_invariants_json(a, &mut s) }, DsStatus::Ok);
        assert_eq!(take(s), r#"{"(T+1)":"1/2","(T+2)":"1/2","inf":"0"}"#);
        let mut max = false;
        assert_eq!(unsafe { ds_algebra_is_maximal(a, &mut max) }, DsStatus::Ok);
        assert!(max);
        let b = CString::new("h+z").unwrap();
        let mut idx = 0;
        assert_eq!(unsafe { ds_algebra_order_index_exp(a, b.as_ptr(), &mut idx) }, DsStatus::Ok);
        let mut m = ptr::null_mut();
        assert_eq!(unsafe { ds_module_new_standard(a, 2, 0, &mut m) }, DsStatus::Ok);
        let mut k = 0;
        assert_eq!(unsafe { ds_module_scheme_order_exp(m, b.as_ptr(), &mut k) }, DsStatus::Ok);
        assert_eq!(k, idx);
        assert_eq!(unsafe { ds_module_verify_json(m, 3, 1, 9, &mut s) }, DsStatus::Ok);
        assert!(take(s).starts_with('['));
        unsafe {
            ds_module_free(m);
            ds_algebra_free(a);
        }
    }

    #[test]
    fn errors_are_reported() {
        let mut a = ptr::null_mut();
        let bad = CString::new("T^2+").unwrap();
        assert_eq!(unsafe { ds_algebra_new(3, 2, bad.as_ptr(), &mut a) }, DsStatus::Parse);
        assert!(last_error().contains("parse"));
        assert!(a.is_null());
        assert_eq!(unsafe { ds_algebra_new(6, 2, bad.as_ptr(), &mut a) }, DsStatus::Config);
        assert_eq!(unsafe { ds_algebra_new(3, 2, ptr::null(), &mut a) }, DsStatus::NullPointer);
        assert_eq!(unsafe { ds_algebra_is_maximal(ptr::null(), ptr::null_mut()) }, DsStatus::NullPointer);
    }

    #[test]
    fn module_at_prime_and_run_json() {
        let r = CString::new("T^2+2").unwrap();
        let p = CString::new("T^2+1").unwrap();
        let mut a = ptr::null_mut();
        let mut m = ptr::null_mut();
        unsafe {
            assert_eq!(ds_algebra_new(3, 2, r.as_ptr(), &mut a), DsStatus::Ok);
            assert_eq!(ds_module_new_at_prime(a, p.as_ptr(), &mut m), DsStatus::Ok);
            ds_module_free(m);
            ds_algebra_free(a);
        }
        let cmd = CString::new("supersingular").unwrap();
        let cfg = CString::new(r#"{"q":3,"d":2,"r":"T^2+2","char":"T"}"#).unwrap();
        let mut s = ptr::null_mut();
        assert_eq!(unsafe { ds_run_json(cmd.as_ptr(), cfg.as_ptr(), &mut s) }, DsStatus::Ok);
        assert!(take(s).contains("\"supersingular\": true"));
        let cmd = CString::new("nope").unwrap();
        assert_eq!(unsafe { ds_run_json(cmd.as_ptr(), cfg.as_ptr(), &mut s) }, DsStatus::Config);
    }
}
