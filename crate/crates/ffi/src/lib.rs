//! C interface to the `staircase` library.
//!
//! Objects are opaque handles owned by the caller and released with the matching
//! `*_free` function. Strings returned by the library are NUL-terminated, owned by
//! the caller and released with `stc_string_free`. Every fallible function returns
//! an `StcStatus`; on failure `stc_last_error` describes the most recent error on
//! the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_bigint::BigInt;
use staircase::classes::from_pq;
use staircase::cremona::is_perfect;
use staircase::exact::parse_rational;
use staircase::obstruct::is_center_blocking;
use staircase::staircase::{build_staircase, limits, liveness, make_family, Liveness};
use staircase::symmetry::sharp;
use staircase::{Base, Dir, Error, GroupElem, PreStaircase, QuasiPerfect};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StcStatus {
    Ok = 0,
    NullPointer = 1,
    Parse = 2,
    Domain = 3,
    NoSolution = 4,
    Invalid = 5,
    Degenerate = 6,
    Arithmetic = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StcLiveness {
    Live = 0,
    Unknown = 1,
}

/// A quasi-perfect class `(d, m, p, q, t, eps)`.
pub struct StcClass(QuasiPerfect);

/// A pre-staircase with its generated steps.
pub struct StcStaircase(PreStaircase);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: StcStatus, msg: impl Into<String>) -> StcStatus {
    set_error(msg.into());
    status
}

fn from_error(e: Error) -> StcStatus {
    let status = match &e {
        Error::Domain(_) => StcStatus::Domain,
        Error::NoSolution(_) => StcStatus::NoSolution,
        Error::Parse(_) => StcStatus::Parse,
        Error::Invalid(_) => StcStatus::Invalid,
        Error::Degenerate(_) => StcStatus::Degenerate,
        Error::Field(..) | Error::Division => StcStatus::Arithmetic,
    };
    fail(status, e.to_string())
}

fn guard(f: impl FnOnce() -> Result<(), StcStatus>) -> StcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            StcStatus::Ok
        }
        Ok(Err(s)) => s,
        Err(_) => fail(StcStatus::Panic, "internal panic"),
    }
}

/// # Safety
/// `s` is null or a valid NUL-terminated string.
unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, StcStatus> {
    if s.is_null() {
        return Err(fail(StcStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(s).to_str().map_err(|_| fail(StcStatus::Parse, format!("{what} is not UTF-8")))
}

unsafe fn read_int(s: *const c_char, what: &str) -> Result<BigInt, StcStatus> {
    let s = read_str(s, what)?;
    s.trim().parse().map_err(|_| fail(StcStatus::Parse, format!("{what}: cannot parse {s:?}")))
}

fn out_ptr<'a, T>(out: *mut T) -> Result<&'a mut T, StcStatus> {
    // SAFETY: the caller passes a writable pointer or null.
    unsafe { out.as_mut() }.ok_or_else(|| fail(StcStatus::NullPointer, "output pointer is null"))
}

fn to_c(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

fn lift<T>(r: staircase::Result<T>) -> Result<T, StcStatus> {
    r.map_err(from_error)
}

/// Message of the last failed call on this thread, or null. Free with `stc_string_free`.
#[no_mangle]
pub extern "C" fn stc_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map(|c| c.clone().into_raw()).unwrap_or(ptr::null_mut()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` is null or was returned by this library and not freed before.
#[no_mangle]
pub unsafe extern "C" fn stc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn stc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// The class with center `p/q` (decimal integers).
///
/// # Safety
/// `p`, `q` are NUL-terminated strings; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn stc_class_from_pq(p: *const c_char, q: *const c_char, out: *mut *mut StcClass) -> StcStatus {
    guard(|| {
        let (p, q) = (read_int(p, "p")?, read_int(q, "q")?);
        let c = lift(from_pq(&p, &q))?;
        *out_ptr(out)? = Box::into_raw(Box::new(StcClass(c)));
        Ok(())
    })
}

/// A class from its coordinates; the identities are checked.
///
/// # Safety
/// All string arguments are NUL-terminated; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn stc_class_new(
    d: *const c_char,
    m: *const c_char,
    p: *const c_char,
    q: *const c_char,
    t: *const c_char,
    eps: i32,
    out: *mut *mut StcClass,
) -> StcStatus {
    guard(|| {
        let eps = match eps {
            1 => 1,
            -1 => -1,
            e => return Err(fail(StcStatus::Domain, format!("eps must be +1 or -1, got {e}"))),
        };
        let c = lift(QuasiPerfect::new(
            read_int(d, "d")?,
            read_int(m, "m")?,
            read_int(p, "p")?,
            read_int(q, "q")?,
            read_int(t, "t")?,
            eps,
        ))?;
        *out_ptr(out)? = Box::into_raw(Box::new(StcClass(c)));
        Ok(())
    })
}

/// # Safety
/// `c` is null or a handle from this library not freed before.
#[no_mangle]
pub unsafe extern "C" fn stc_class_free(c: *mut StcClass) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// `"(d,m,p,q,t,±1)"`, or null for a null handle.
///
/// # Safety
/// `c` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn stc_class_to_string(c: *const StcClass) -> *mut c_char {
    match c.as_ref() {
        Some(c) => to_c(c.0.to_string()),
        None => ptr::null_mut(),
    }
}

/// One coordinate as a decimal string: `index` 0..=4 selects d, m, p, q, t.
///
/// # Safety
/// `c` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn stc_class_coord(c: *const StcClass, index: u32, out: *mut *mut c_char) -> StcStatus {
    guard(|| {
        let c = c.as_ref().ok_or_else(|| fail(StcStatus::NullPointer, "class is null"))?;
        let coords = c.0.coords();
        let x = coords.get(index as usize).ok_or_else(|| fail(StcStatus::Domain, format!("coordinate {index} out of range")))?;
        *out_ptr(out)? = to_c(x.to_string());
        Ok(())
    })
}

/// # Safety
/// `c` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn stc_class_eps(c: *const StcClass) -> i32 {
    c.as_ref().map_or(0, |c| c.0.eps() as i32)
}

/// Certifies the class as exceptional by Cremona reduction.
///
/// # Safety
/// `c` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn stc_class_is_perfect(c: *const StcClass, out: *mut bool) -> StcStatus {
    guard(|| {
        let c = c.as_ref().ok_or_else(|| fail(StcStatus::NullPointer, "class is null"))?;
        *out_ptr(out)? = lift(is_perfect(&c.0))?;
        Ok(())
    })
}

/// # Safety
/// `c` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn stc_class_is_center_blocking(c: *const StcClass, out: *mut bool) -> StcStatus {
    guard(|| {
        let c = c.as_ref().ok_or_else(|| fail(StcStatus::NullPointer, "class is null"))?;
        *out_ptr(out)? = lift(is_center_blocking(&c.0))?;
        Ok(())
    })
}

/// `T^♯(c)` for a symmetry written as `"S^2 R"`, `"R_{v_3}"`, ...
///
/// # Safety
/// `c` is a live handle; `symmetry` is NUL-terminated; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn stc_class_apply(c: *const StcClass, symmetry: *const c_char, out: *mut *mut StcClass) -> StcStatus {
    guard(|| {
        let c = c.as_ref().ok_or_else(|| fail(StcStatus::NullPointer, "class is null"))?;
        let t: GroupElem = lift(read_str(symmetry, "symmetry")?.parse())?;
        let img = lift(sharp(&t, &c.0))?;
        *out_ptr(out)? = Box::into_raw(Box::new(StcClass(img)));
        Ok(())
    })
}

/// Builds `T^♯(S^base)_{dir,n}` with `steps` recursion steps after the two seeds.
/// `base` is `"U"` or `"L"`, `dir` is `"l"` or `"u"`.
///
/// # Safety
/// String arguments are NUL-terminated; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn stc_staircase_build(
    symmetry: *const c_char,
    base: *const c_char,
    n: i64,
    dir: *const c_char,
    steps: usize,
    out: *mut *mut StcStaircase,
) -> StcStatus {
    guard(|| {
        let t: GroupElem = lift(read_str(symmetry, "symmetry")?.parse())?;
        let base: Base = lift(read_str(base, "base")?.parse())?;
        let dir: Dir = lift(read_str(dir, "dir")?.parse())?;
        let sc = lift(build_staircase(&make_family(t, base), n, dir, steps))?;
        *out_ptr(out)? = Box::into_raw(Box::new(StcStaircase(sc)));
        Ok(())
    })
}

/// # Safety
/// `s` is null or a handle from this library not freed before.
#[no_mangle]
pub unsafe extern "C" fn stc_staircase_free(s: *mut StcStaircase) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Number of steps including the two seeds; 0 for a null handle.
///
/// # Safety
/// `s` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn stc_staircase_len(s: *const StcStaircase) -> usize {
    s.as_ref().map_or(0, |s| s.0.steps.len())
}

/// Copy of step `k`.
///
/// # Safety
/// `s` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn stc_staircase_step(s: *const StcStaircase, k: usize, out: *mut *mut StcClass) -> StcStatus {
    guard(|| {
        let s = s.as_ref().ok_or_else(|| fail(StcStatus::NullPointer, "staircase is null"))?;
        let c = s.0.steps.get(k).ok_or_else(|| fail(StcStatus::Domain, format!("step {k} out of range")))?;
        *out_ptr(out)? = Box::into_raw(Box::new(StcClass(c.clone())));
        Ok(())
    })
}

/// Exact limits as strings such as `"7/2+5/6*sqrt(21)"`.
///
/// # Safety
/// `s` is a live handle; `z_inf`, `b_inf` are writable.
#[no_mangle]
pub unsafe extern "C" fn stc_staircase_limits(s: *const StcStaircase, z_inf: *mut *mut c_char, b_inf: *mut *mut c_char) -> StcStatus {
    guard(|| {
        let s = s.as_ref().ok_or_else(|| fail(StcStatus::NullPointer, "staircase is null"))?;
        let ld = lift(limits(&s.0))?;
        let (z, b) = (out_ptr(z_inf)?, out_ptr(b_inf)?);
        *z = to_c(ld.z_inf.to_string());
        *b = to_c(ld.b_inf.to_string());
        Ok(())
    })
}

/// Sufficient liveness test; steps are Cremona-certified first.
///
/// # Safety
/// `s` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn stc_staircase_liveness(s: *const StcStaircase, out: *mut StcLiveness) -> StcStatus {
    guard(|| {
        let s = s.as_ref().ok_or_else(|| fail(StcStatus::NullPointer, "staircase is null"))?;
        let perfect = s.0.geometric_steps().all(|c| is_perfect(c) == Ok(true));
        *out_ptr(out)? = match liveness(&s.0, perfect) {
            Liveness::Live => StcLiveness::Live,
            Liveness::Unknown => StcLiveness::Unknown,
        };
        Ok(())
    })
}

/// `acc(b)` for a rational `b` such as `"1/3"`, as an exact string.
///
/// # Safety
/// `b` is NUL-terminated; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn stc_acc(b: *const c_char, out: *mut *mut c_char) -> StcStatus {
    guard(|| {
        let b = lift(parse_rational(read_str(b, "b")?))?;
        let z = lift(staircase::accum::acc(&b))?;
        *out_ptr(out)? = to_c(z.to_string());
        Ok(())
    })
}
