//! C ABI over `rbcm`.
//!
//! Handles are opaque pointers owned by the caller and released with the
//! matching `_free`. Every fallible call returns an [`RbcmStatus`]; on a
//! non-zero status `rbcm_last_error_message` describes the failure on the
//! calling thread. Strings returned by the library are freed with
//! `rbcm_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use rbcm::cayley::{self, JsonError, MapJson};
use rbcm::classify::{self, ClassificationReport, ClassifyError, RealizedRbcm, VerifyLevel};
use rbcm::metacyclic::{Element, Group, GroupDescriptor};
use rbcm::two_adic::{self, Valuation};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RbcmStatus {
    Ok = 0,
    VerificationFailed = 1,
    InvalidInput = 2,
    BudgetExceeded = 3,
    NullPointer = 4,
    Internal = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RbcmElement {
    pub x: u64,
    pub y: u64,
}

impl From<Element> for RbcmElement {
    fn from(e: Element) -> Self {
        RbcmElement { x: e.x, y: e.y }
    }
}

/// One classified map; `genus` is meaningful only when `verified`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RbcmSolution {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub z1: u64,
    pub z: u64,
    pub w: u64,
    pub u_tilde: u64,
    pub u1: u64,
    pub v1: u64,
    pub t: u64,
    pub d: u64,
    pub ell: u64,
    pub verified: bool,
    pub genus: u64,
}

/// Result of `rbcm_classify`.
pub struct RbcmClassification {
    report: ClassificationReport,
    realized: Vec<RealizedRbcm>,
}

/// A group `L(n, m, r)`.
pub struct RbcmGroup {
    group: Group,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn fail(status: RbcmStatus, msg: impl Into<String>) -> RbcmStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> RbcmStatus) -> RbcmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(RbcmStatus::Internal, "internal panic"),
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, RbcmStatus> {
    if p.is_null() {
        return Err(fail(RbcmStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(RbcmStatus::InvalidInput, "string is not UTF-8"))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

/// Message for the last non-zero status on this thread, or null. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn rbcm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn rbcm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Classifies the maps on `D(a,b,c)`. `full` selects full verification.
/// Invalid parameters give `InvalidInput`; a failed check gives
/// `VerificationFailed` and still returns the handle.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rbcm_classify(a: u32, b: u32, c: u32, full: bool, out: *mut *mut RbcmClassification) -> RbcmStatus {
    guard(|| {
        if out.is_null() {
            return fail(RbcmStatus::NullPointer, "out is null");
        }
        *out = ptr::null_mut();
        let level = if full { VerifyLevel::Full } else { VerifyLevel::Fast };
        match classify::classify(a, b, c, level) {
            Ok((report, realized)) => {
                let ok = report.ok();
                if !ok {
                    set_error(format!("verification failed: {:?}", report.failures));
                }
                *out = Box::into_raw(Box::new(RbcmClassification { report, realized }));
                if ok {
                    RbcmStatus::Ok
                } else {
                    RbcmStatus::VerificationFailed
                }
            }
            Err(e @ ClassifyError::Descriptor(_)) => fail(RbcmStatus::InvalidInput, e.to_string()),
            Err(e) => fail(RbcmStatus::Internal, e.to_string()),
        }
    })
}

/// # Safety
/// `h` must come from `rbcm_classify` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn rbcm_classification_free(h: *mut RbcmClassification) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Number of solutions, or 0 for a null handle.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rbcm_classification_len(h: *const RbcmClassification) -> usize {
    h.as_ref().map_or(0, |h| h.report.solutions.len())
}

/// Whether every requested check passed.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rbcm_classification_ok(h: *const RbcmClassification) -> bool {
    h.as_ref().is_some_and(|h| h.report.ok())
}

/// # Safety
/// `h` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn rbcm_classification_get(h: *const RbcmClassification, i: usize, out: *mut RbcmSolution) -> RbcmStatus {
    guard(|| {
        let (Some(h), false) = (h.as_ref(), out.is_null()) else {
            return fail(RbcmStatus::NullPointer, "null handle or out");
        };
        let Some(s) = h.report.solutions.get(i) else {
            return fail(RbcmStatus::InvalidInput, format!("index {i} out of range"));
        };
        *out = RbcmSolution {
            a: s.a,
            b: s.b,
            c: s.c,
            z1: s.z1,
            z: s.z,
            w: s.w,
            u_tilde: s.u_tilde,
            u1: s.u1,
            v1: s.v1,
            t: s.t,
            d: s.d,
            ell: s.ell,
            verified: s.verified,
            genus: s.genus.unwrap_or(0),
        };
        RbcmStatus::Ok
    })
}

/// The whole report as JSON; free with `rbcm_string_free`. Null on error.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rbcm_classification_to_json(h: *const RbcmClassification) -> *mut c_char {
    match h.as_ref() {
        Some(h) => into_c_string(serde_json::to_string_pretty(&h.report).unwrap_or_default()),
        None => {
            set_error("null handle");
            ptr::null_mut()
        }
    }
}

/// The `i`-th verified map in the map-file format; null if out of range.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rbcm_classification_map_json(h: *const RbcmClassification, i: usize) -> *mut c_char {
    match h.as_ref().and_then(|h| h.realized.get(i)) {
        Some(r) => into_c_string(MapJson::from_map(&r.map, Some(&r.skew)).to_string_pretty()),
        None => {
            set_error(format!("no verified map at index {i}"));
            ptr::null_mut()
        }
    }
}

/// Checks a map file's contents: skew identity (if a skew table is present),
/// regularity and t-balance. Writes `t` and the genus on success.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out_t` and `out_genus` may be null.
#[no_mangle]
pub unsafe extern "C" fn rbcm_verify_map_json(json: *const c_char, out_t: *mut u64, out_genus: *mut u64) -> RbcmStatus {
    guard(|| {
        let text = match read_str(json) {
            Ok(s) => s,
            Err(st) => return st,
        };
        let doc = match MapJson::parse(text) {
            Ok(d) => d,
            Err(e) => return fail(RbcmStatus::InvalidInput, e.to_string()),
        };
        let (map, given) = match doc.load() {
            Ok(x) => x,
            Err(JsonError::Skew(w)) => return fail(RbcmStatus::VerificationFailed, w.to_string()),
            Err(e) => return fail(RbcmStatus::InvalidInput, e.to_string()),
        };
        let Some(skew) = cayley::is_regular(&map) else {
            return fail(RbcmStatus::VerificationFailed, "map is not regular");
        };
        if given.is_some_and(|g| g != skew) {
            return fail(RbcmStatus::VerificationFailed, "stored skew-morphism is not the map's");
        }
        let Some(bal) = cayley::balance_data(&map) else {
            return fail(RbcmStatus::VerificationFailed, "map is not t-balanced");
        };
        if !out_t.is_null() {
            *out_t = bal.t;
        }
        if !out_genus.is_null() {
            *out_genus = cayley::genus(&map).genus;
        }
        RbcmStatus::Ok
    })
}

/// 2-adic valuation of `u`; -1 stands for infinity (`u = 0`).
#[no_mangle]
pub extern "C" fn rbcm_deg2(u: i64) -> i32 {
    match two_adic::deg2(u as i128) {
        Valuation::Finite(k) => k as i32,
        Valuation::Infinity => -1,
    }
}

/// Lifts `s^2 == h (mod 2^e)` to a root modulo `2^target`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rbcm_sqrt_lift(s: i64, h: i64, e: u32, target: u32, out: *mut u64) -> RbcmStatus {
    guard(|| {
        if out.is_null() {
            return fail(RbcmStatus::NullPointer, "out is null");
        }
        match two_adic::sqrt_lift(s, h, e, target) {
            Ok(r) => {
                *out = r.value();
                RbcmStatus::Ok
            }
            Err(err) => fail(RbcmStatus::InvalidInput, err.to_string()),
        }
    })
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rbcm_group_new(n: u64, m: u64, r: u64, out: *mut *mut RbcmGroup) -> RbcmStatus {
    guard(|| {
        if out.is_null() {
            return fail(RbcmStatus::NullPointer, "out is null");
        }
        *out = ptr::null_mut();
        match Group::new(n, m, r) {
            Ok(group) => {
                *out = Box::into_raw(Box::new(RbcmGroup { group }));
                RbcmStatus::Ok
            }
            Err(e) => fail(RbcmStatus::InvalidInput, e.to_string()),
        }
    })
}

/// Accepts `Zn`, `Zn x Zm`, `L(n,m,r)` and `D(a,b,c)`.
///
/// # Safety
/// `spec` must be a NUL-terminated string and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn rbcm_group_parse(spec: *const c_char, out: *mut *mut RbcmGroup) -> RbcmStatus {
    guard(|| {
        if out.is_null() {
            return fail(RbcmStatus::NullPointer, "out is null");
        }
        *out = ptr::null_mut();
        let text = match read_str(spec) {
            Ok(s) => s,
            Err(st) => return st,
        };
        match text.parse::<GroupDescriptor>() {
            Ok(d) => {
                *out = Box::into_raw(Box::new(RbcmGroup { group: d.group() }));
                RbcmStatus::Ok
            }
            Err(e) => fail(RbcmStatus::InvalidInput, e.to_string()),
        }
    })
}

/// # Safety
/// `g` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn rbcm_group_free(g: *mut RbcmGroup) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rbcm_group_order(g: *const RbcmGroup) -> u64 {
    g.as_ref().map_or(0, |g| g.group.order())
}

unsafe fn element_in(g: &Group, e: RbcmElement) -> Result<Element, RbcmStatus> {
    let el = Element::new(e.x, e.y);
    if g.contains(el) {
        Ok(el)
    } else {
        Err(fail(RbcmStatus::InvalidInput, format!("({}, {}) is not in normal form for {g}", e.x, e.y)))
    }
}

/// # Safety
/// `g` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn rbcm_group_mul(g: *const RbcmGroup, lhs: RbcmElement, rhs: RbcmElement, out: *mut RbcmElement) -> RbcmStatus {
    guard(|| {
        let (Some(g), false) = (g.as_ref(), out.is_null()) else {
            return fail(RbcmStatus::NullPointer, "null handle or out");
        };
        match (element_in(&g.group, lhs), element_in(&g.group, rhs)) {
            (Ok(x), Ok(y)) => {
                *out = g.group.mul(x, y).into();
                RbcmStatus::Ok
            }
            (Err(s), _) | (_, Err(s)) => s,
        }
    })
}

/// `e^k` for any integer `k`.
///
/// # Safety
/// `g` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn rbcm_group_pow(g: *const RbcmGroup, e: RbcmElement, k: i64, out: *mut RbcmElement) -> RbcmStatus {
    guard(|| {
        let (Some(g), false) = (g.as_ref(), out.is_null()) else {
            return fail(RbcmStatus::NullPointer, "null handle or out");
        };
        match element_in(&g.group, e) {
            Ok(x) => {
                *out = g.group.pow(x, k).into();
                RbcmStatus::Ok
            }
            Err(s) => s,
        }
    })
}

/// # Safety
/// `g` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn rbcm_group_inv(g: *const RbcmGroup, e: RbcmElement, out: *mut RbcmElement) -> RbcmStatus {
    rbcm_group_pow(g, e, -1, out)
}
