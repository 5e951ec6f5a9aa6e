//! C interface to knotbench. Diagrams are opaque handles; every call
//! returns a `KbStatus` and writes results through out-pointers. Strings
//! handed out must be released with `kb_string_free`, diagrams with
//! `kb_diagram_free`. The message for the last failure on the calling
//! thread is available from `kb_last_error`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use knotbench::corpus::Corpus;
use knotbench::diagram::io::{from_pd, KnotFile};
use knotbench::diagram::LinkDiagram;
use knotbench::error::Error;
use knotbench::field::Ring;
use knotbench::jones::kauffman_jones;
use knotbench::kh::{khovanov, poincare_polynomial, KhOptions, Method};
use knotbench::s::s_exact;

/// Result code of every call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KbStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidInput = 4,
    Verification = 5,
    ResourceGuard = 6,
    Io = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KbRing {
    Rational = 0,
    F2 = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KbMethod {
    Scan = 0,
    Naive = 1,
}

/// An oriented link diagram.
pub struct KbDiagram {
    inner: LinkDiagram,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> KbStatus {
    match e {
        Error::Parse(_) | Error::Json(_) => KbStatus::Parse,
        Error::Verification(_) | Error::Move { .. } => KbStatus::Verification,
        Error::Guard(_) => KbStatus::ResourceGuard,
        Error::Io(_) => KbStatus::Io,
        _ => KbStatus::InvalidInput,
    }
}

/// Run `f`, turning errors and panics into status codes.
fn guard<F: FnOnce() -> Result<(), KbStatus>>(f: F) -> KbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => KbStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic".into());
            KbStatus::Panic
        }
    }
}

fn fail(e: Error) -> KbStatus {
    let s = status_of(&e);
    set_error(e.to_string());
    s
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, KbStatus> {
    if p.is_null() {
        set_error("null string argument".into());
        return Err(KbStatus::NullArgument);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("string argument is not UTF-8".into());
        KbStatus::InvalidUtf8
    })
}

unsafe fn diagram_arg<'a>(d: *const KbDiagram) -> Result<&'a LinkDiagram, KbStatus> {
    d.as_ref().map(|d| &d.inner).ok_or_else(|| {
        set_error("null diagram".into());
        KbStatus::NullArgument
    })
}

fn check_out<T>(out: *mut T) -> Result<(), KbStatus> {
    if out.is_null() {
        set_error("null output pointer".into());
        return Err(KbStatus::NullArgument);
    }
    Ok(())
}

unsafe fn put_diagram(out: *mut *mut KbDiagram, d: LinkDiagram) {
    *out = Box::into_raw(Box::new(KbDiagram { inner: d }));
}

unsafe fn put_string(out: *mut *mut c_char, s: String) {
    *out = CString::new(s).expect("no interior nul").into_raw();
}

/// Message describing the last failure on this thread, or NULL. Owned by
/// the library; valid until the next failing call on this thread.
#[no_mangle]
pub extern "C" fn kb_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parse a knot file (JSON).
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kb_diagram_from_json(json: *const c_char, out: *mut *mut KbDiagram) -> KbStatus {
    guard(|| {
        check_out(out)?;
        let text = str_arg(json)?;
        let d = KnotFile::from_json(text).and_then(|f| f.diagram()).map_err(fail)?;
        put_diagram(out, d);
        Ok(())
    })
}

/// Diagram from `n_crossings` PD 4-tuples stored contiguously in `labels`.
///
/// # Safety
/// `labels` must point to `4 * n_crossings` integers and `out` be valid.
#[no_mangle]
pub unsafe extern "C" fn kb_diagram_from_pd(
    labels: *const u32,
    n_crossings: usize,
    out: *mut *mut KbDiagram,
) -> KbStatus {
    guard(|| {
        check_out(out)?;
        if labels.is_null() && n_crossings > 0 {
            set_error("null label array".into());
            return Err(KbStatus::NullArgument);
        }
        let d = if n_crossings == 0 {
            LinkDiagram::unknot()
        } else {
            let flat = std::slice::from_raw_parts(labels, 4 * n_crossings);
            let pd: Vec<[u32; 4]> = flat.chunks(4).map(|c| [c[0], c[1], c[2], c[3]]).collect();
            from_pd("ffi", &pd).map_err(fail)?
        };
        put_diagram(out, d);
        Ok(())
    })
}

/// Diagram of a bundled corpus entry.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kb_corpus_diagram(name: *const c_char, out: *mut *mut KbDiagram) -> KbStatus {
    guard(|| {
        check_out(out)?;
        let name = str_arg(name)?;
        let d = Corpus::from_env().and_then(|c| c.diagram(name)).map_err(fail)?;
        put_diagram(out, d);
        Ok(())
    })
}

/// # Safety
/// `d` must come from this library and not be used afterwards. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn kb_diagram_free(d: *mut KbDiagram) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// # Safety
/// `d` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn kb_diagram_crossings(d: *const KbDiagram, out: *mut usize) -> KbStatus {
    guard(|| {
        check_out(out)?;
        *out = diagram_arg(d)?.crossing_count();
        Ok(())
    })
}

/// # Safety
/// `d` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn kb_diagram_components(d: *const KbDiagram, out: *mut usize) -> KbStatus {
    guard(|| {
        check_out(out)?;
        *out = diagram_arg(d)?.component_count();
        Ok(())
    })
}

/// Khovanov homology as a Poincaré polynomial string such as
/// `q + q^3 + q^5t^2 + q^9t^3`.
///
/// # Safety
/// `d` and `out` must be valid; free the string with `kb_string_free`.
#[no_mangle]
pub unsafe extern "C" fn kb_khovanov(
    d: *const KbDiagram,
    ring: KbRing,
    method: KbMethod,
    out: *mut *mut c_char,
) -> KbStatus {
    guard(|| {
        check_out(out)?;
        let d = diagram_arg(d)?;
        let opts = KhOptions {
            ring: match ring {
                KbRing::Rational => Ring::Rational,
                KbRing::F2 => Ring::F2,
            },
            method: match method {
                KbMethod::Scan => Method::Scan,
                KbMethod::Naive => Method::Naive,
            },
            ..KhOptions::default()
        };
        let r = khovanov(d, &opts).map_err(fail)?;
        put_string(out, poincare_polynomial(&r).to_string());
        Ok(())
    })
}

/// Unnormalized Jones polynomial in `q`.
///
/// # Safety
/// `d` and `out` must be valid; free the string with `kb_string_free`.
#[no_mangle]
pub unsafe extern "C" fn kb_jones(d: *const KbDiagram, out: *mut *mut c_char) -> KbStatus {
    guard(|| {
        check_out(out)?;
        let j = kauffman_jones(diagram_arg(d)?).map_err(fail)?;
        put_string(out, j.to_string());
        Ok(())
    })
}

/// Rasmussen s-invariant of a knot.
///
/// # Safety
/// `d` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn kb_s_invariant(d: *const KbDiagram, out: *mut i64) -> KbStatus {
    guard(|| {
        check_out(out)?;
        let r = s_exact(diagram_arg(d)?).map_err(fail)?;
        *out = r.exact().ok_or_else(|| fail(Error::Verification("s not determined".into())))?;
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library and not be used afterwards. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn kb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
