//! C ABI for `sehgalkit`.
//!
//! Groups are opaque handles. Every call returns an [`SkStatus`]; on failure
//! the message is available from [`sk_last_error`] until the next call on
//! the same thread. Results are returned as JSON strings owned by the
//! library and released with [`sk_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sehgalkit::abgroup::FinAbGroup;
use sehgalkit::construct::{build_candidate, gd_types, match_pairs, verify_candidate};
use sehgalkit::esolve::SolveOptions;
use sehgalkit::helpcmp::{help_solutions, help_system, GdGroup};
use sehgalkit::sehgal::{algorithm1, algorithm2, algorithm3, parse_gamma, Alg3Options, MetabelianGroup};
use sehgalkit::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidGroup = 3,
    Parse = 4,
    Unsupported = 5,
    Hypothesis = 6,
    TooLarge = 7,
    Verification = 8,
    Internal = 9,
}

/// A finite abelian group.
pub struct SkGroup {
    inner: FinAbGroup,
}

/// A split metabelian group `N ⋊ Γ`.
pub struct SkMetabelian {
    inner: MetabelianGroup,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> SkStatus {
    match e {
        Error::InvalidGroup(_) | Error::Dimension(_) | Error::NotInvertible(_) => SkStatus::InvalidGroup,
        Error::Parse(_) | Error::Json(_) => SkStatus::Parse,
        Error::Unsupported(_) | Error::Unbounded(_) => SkStatus::Unsupported,
        Error::Hypothesis(_) => SkStatus::Hypothesis,
        Error::TooLarge(_) => SkStatus::TooLarge,
        Error::Verification(_) => SkStatus::Verification,
        Error::Io(_) => SkStatus::Internal,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (SkStatus, String)>) -> SkStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SkStatus::Ok,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            SkStatus::Internal
        }
    }
}

fn lib<T>(r: sehgalkit::Result<T>) -> Result<T, (SkStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, (SkStatus, String)> {
    if s.is_null() {
        return Err((SkStatus::NullPointer, "null string".into()));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| (SkStatus::InvalidUtf8, "string is not UTF-8".into()))
}

unsafe fn write_json(out: *mut *mut c_char, v: &impl serde::Serialize) -> Result<(), (SkStatus, String)> {
    if out.is_null() {
        return Err((SkStatus::NullPointer, "null output pointer".into()));
    }
    let s = lib(serde_json::to_string(v).map_err(Error::from))?;
    *out = CString::new(s).map_err(|e| (SkStatus::Internal, e.to_string()))?.into_raw();
    Ok(())
}

/// The message of the last failed call on this thread, or null. Owned by
/// the library; valid until the next call.
#[no_mangle]
pub extern "C" fn sk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn sk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a group such as `7^[1,1]x13^[1,1]`.
///
/// # Safety
/// `spec` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sk_group_parse(spec: *const c_char, out: *mut *mut SkGroup) -> SkStatus {
    guard(|| {
        let s = read_str(spec)?;
        if out.is_null() {
            return Err((SkStatus::NullPointer, "null output pointer".into()));
        }
        let g = lib(FinAbGroup::parse(s))?;
        *out = Box::into_raw(Box::new(SkGroup { inner: g }));
        Ok(())
    })
}

/// # Safety
/// `g` must come from [`sk_group_parse`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn sk_group_free(g: *mut SkGroup) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sk_group_order(g: *const SkGroup, out: *mut u64) -> SkStatus {
    guard(|| {
        if g.is_null() || out.is_null() {
            return Err((SkStatus::NullPointer, "null argument".into()));
        }
        *out = (*g).inner.order();
        Ok(())
    })
}

/// Algorithm 3 on `g`, as JSON.
///
/// # Safety
/// `g` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sk_alg3_json(g: *const SkGroup, reduce: bool, out: *mut *mut c_char) -> SkStatus {
    guard(|| {
        if g.is_null() {
            return Err((SkStatus::NullPointer, "null group".into()));
        }
        let opts = Alg3Options {
            reduce,
            ..Alg3Options::default()
        };
        let r = lib(algorithm3(&(*g).inner, opts))?;
        write_json(out, &r)
    })
}

/// `N ⋊ Γ` with `Γ` given as JSON generator matrices, or `"full"`.
///
/// # Safety
/// `n` must be a live handle, `gamma` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sk_metabelian_new(
    n: *const SkGroup,
    gamma: *const c_char,
    out: *mut *mut SkMetabelian,
) -> SkStatus {
    guard(|| {
        if n.is_null() || out.is_null() {
            return Err((SkStatus::NullPointer, "null argument".into()));
        }
        let n = &(*n).inner;
        let gm = lib(parse_gamma(n, read_str(gamma)?))?;
        let m = lib(MetabelianGroup::new(n.clone(), gm))?;
        *out = Box::into_raw(Box::new(SkMetabelian { inner: m }));
        Ok(())
    })
}

/// # Safety
/// `g` must come from [`sk_metabelian_new`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn sk_metabelian_free(g: *mut SkMetabelian) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Algorithm 1 at prime `p`, as JSON.
///
/// # Safety
/// `g` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sk_alg1_json(g: *const SkMetabelian, p: u64, out: *mut *mut c_char) -> SkStatus {
    guard(|| {
        if g.is_null() {
            return Err((SkStatus::NullPointer, "null group".into()));
        }
        let r = lib(algorithm1(&(*g).inner, p, SolveOptions::default()))?;
        write_json(out, &r)
    })
}

/// Algorithm 2, as JSON.
///
/// # Safety
/// `g` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sk_alg2_json(g: *const SkMetabelian, out: *mut *mut c_char) -> SkStatus {
    guard(|| {
        if g.is_null() {
            return Err((SkStatus::NullPointer, "null group".into()));
        }
        let r = lib(algorithm2(&(*g).inner, SolveOptions::default()))?;
        write_json(out, &r)
    })
}

/// The HeLP system for `G_d(p,q)` with its feasible tuples, as JSON.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sk_help_json(p: u64, q: u64, d: u64, out: *mut *mut c_char) -> SkStatus {
    guard(|| {
        let g = lib(GdGroup::new(p, q, d))?;
        let sys = lib(help_system(&g))?;
        let sols = lib(help_solutions(&sys))?;
        write_json(
            out,
            &serde_json::json!({
                "column_sums": sys.column_sums(),
                "distinct_rows": sys.distinct_rows().into_keys().collect::<Vec<_>>(),
                "feasible": sols,
            }),
        )
    })
}

/// Matches table entries for `p` and `q` and builds the first candidate,
/// optionally verifying it. JSON; a failed verification returns
/// [`SkStatus::Verification`] and still writes the report.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sk_construct_json(p: u64, q: u64, verify: bool, out: *mut *mut c_char) -> SkStatus {
    let mut failed = false;
    let s = guard(|| {
        let pairs = lib(match_pairs(p, q, SolveOptions::default()))?;
        let cand = match pairs.first() {
            Some(m) => Some(lib(build_candidate(m))?),
            None => None,
        };
        let report = match (&cand, verify) {
            (Some(c), true) => Some(lib(verify_candidate(c, true, SolveOptions::default()))?),
            _ => None,
        };
        failed = report.as_ref().is_some_and(|r| !r.passed);
        write_json(
            out,
            &serde_json::json!({
                "pairs": pairs.len(),
                "gd_types": gd_types(&pairs),
                "candidate": cand,
                "verification": report,
            }),
        )
    });
    if s == SkStatus::Ok && failed {
        set_error("candidate verification failed".into());
        return SkStatus::Verification;
    }
    s
}

/// The library version, a static string.
#[no_mangle]
pub extern "C" fn sk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
