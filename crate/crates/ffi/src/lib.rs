//! C ABI over `tridesign`. Handles are opaque and owned by the caller;
//! every fallible call returns a [`TdStatus`] and leaves a message for
//! [`td_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use tridesign::datasets;
use tridesign::designs::TriangleSystem;
use tridesign::format::{self, DesignFile};
use tridesign::gf2n::FieldCtx;
use tridesign::orbits::{self, Certificate};
use tridesign::search::{self, SearchOptions};
use tridesign::xcover::Limits;
use tridesign::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Unsupported = 3,
    Precondition = 4,
    UnknownDataset = 5,
    ExternalDataset = 6,
    Parse = 7,
    Io = 8,
    InvalidCertificate = 9,
    SearchFailed = 10,
    ConstructionFailed = 11,
    OutOfRange = 12,
    Panic = 13,
}

/// A finite field `GF(2^n)` with its log and Zech tables.
pub struct TdField {
    ctx: FieldCtx,
}

/// A design or GDD held in memory.
pub struct TdDesign {
    file: DesignFile,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TdVerifyReport {
    pub ok: bool,
    pub is_gdd: bool,
    pub n: u32,
    pub m: u32,
    pub triangle_count: u64,
    pub lines_total: u64,
    pub group_lines: u64,
    pub lines_covered: u64,
    /// Witness counts; the lists themselves are bounded.
    pub uncovered: u64,
    pub multiply_covered: u64,
    pub group_lines_covered: u64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TdBalanceReport {
    pub balanced: bool,
    /// Common coverage, 0 when unbalanced.
    pub lambda: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> TdStatus {
    match e {
        Error::Capacity(_) | Error::BadPolynomial { .. } | Error::NotPrimitive { .. } => {
            TdStatus::Unsupported
        }
        Error::ZeroElement | Error::ZechAtZero | Error::DegenerateLine(..) => {
            TdStatus::InvalidArgument
        }
        Error::Divisibility { .. }
        | Error::ModSix { .. }
        | Error::StratumInfeasible { .. }
        | Error::Parity(..)
        | Error::Spread(_)
        | Error::DimensionMismatch { .. }
        | Error::Precondition(_) => TdStatus::Precondition,
        Error::UnknownDataset(_) => TdStatus::UnknownDataset,
        Error::ExternalDataset(_) => TdStatus::ExternalDataset,
        Error::Parse { .. } => TdStatus::Parse,
        Error::Io(_) => TdStatus::Io,
        Error::Malformed(_)
        | Error::Json(_)
        | Error::OrbitCollision(_)
        | Error::GroupLineInTriangle(_)
        | Error::CorruptDataset { .. } => TdStatus::InvalidCertificate,
        Error::Unsatisfiable | Error::LimitExceeded { .. } => TdStatus::SearchFailed,
        Error::Construction(_) => TdStatus::ConstructionFailed,
    }
}

fn guard(f: impl FnOnce() -> Result<(), TdStatus>) -> TdStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TdStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("panic inside tridesign");
            TdStatus::Panic
        }
    }
}

fn fail(e: Error) -> TdStatus {
    set_error(&e.to_string());
    status_of(&e)
}

fn null() -> TdStatus {
    set_error("null pointer argument");
    TdStatus::NullPointer
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, TdStatus> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        TdStatus::InvalidArgument
    })
}

unsafe fn write_out<T>(out: *mut T, v: T) -> Result<(), TdStatus> {
    if out.is_null() {
        return Err(null());
    }
    out.write(v);
    Ok(())
}

unsafe fn field_ref<'a>(f: *const TdField) -> Result<&'a FieldCtx, TdStatus> {
    f.as_ref().map(|f| &f.ctx).ok_or_else(null)
}

unsafe fn design_ref<'a>(d: *const TdDesign) -> Result<&'a DesignFile, TdStatus> {
    d.as_ref().map(|d| &d.file).ok_or_else(null)
}

fn into_handle(sys: TriangleSystem, provenance: Option<&str>) -> *mut TdDesign {
    Box::into_raw(Box::new(TdDesign {
        file: DesignFile::new(sys, provenance),
    }))
}

fn into_c_string(s: String) -> Result<*mut c_char, TdStatus> {
    CString::new(s).map(CString::into_raw).map_err(|_| {
        set_error("output contains a NUL byte");
        TdStatus::InvalidArgument
    })
}

/// Message for the last failed call on this thread; empty after success.
/// Valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn td_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn td_status_str(s: TdStatus) -> *const c_char {
    let msg: &'static CStr = match s {
        TdStatus::Ok => c"ok",
        TdStatus::NullPointer => c"null pointer",
        TdStatus::InvalidArgument => c"invalid argument",
        TdStatus::Unsupported => c"unsupported field parameters",
        TdStatus::Precondition => c"precondition violated",
        TdStatus::UnknownDataset => c"unknown dataset",
        TdStatus::ExternalDataset => c"external dataset",
        TdStatus::Parse => c"parse error",
        TdStatus::Io => c"i/o error",
        TdStatus::InvalidCertificate => c"invalid certificate or dataset",
        TdStatus::SearchFailed => c"search failed",
        TdStatus::ConstructionFailed => c"construction failed",
        TdStatus::OutOfRange => c"index out of range",
        TdStatus::Panic => c"internal panic",
    };
    msg.as_ptr()
}

/// Frees a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn td_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds `GF(2^n)`; `poly` 0 selects the default primitive polynomial.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn td_field_new(n: u32, poly: u32, out: *mut *mut TdField) -> TdStatus {
    guard(|| {
        let ctx = FieldCtx::new(n, (poly != 0).then_some(poly)).map_err(fail)?;
        write_out(out, Box::into_raw(Box::new(TdField { ctx })))
    })
}

/// # Safety
/// `f` must come from [`td_field_new`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn td_field_free(f: *mut TdField) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Reduction polynomial, including the `x^n` bit; 0 for a null handle.
///
/// # Safety
/// `f` must be a live field handle or null.
#[no_mangle]
pub unsafe extern "C" fn td_field_poly(f: *const TdField) -> u32 {
    f.as_ref().map_or(0, |f| f.ctx.poly())
}

/// Zech logarithm `z(k)` with `xi^z(k) = 1 + xi^k`.
///
/// # Safety
/// `f` must be a live field handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn td_field_zech(f: *const TdField, k: i64, out: *mut u32) -> TdStatus {
    guard(|| {
        let z = field_ref(f)?.zech(k).map_err(fail)?;
        write_out(out, z)
    })
}

/// Discrete logarithm of a nonzero element.
///
/// # Safety
/// `f` must be a live field handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn td_field_log(f: *const TdField, x: u32, out: *mut u32) -> TdStatus {
    guard(|| {
        let ctx = field_ref(f)?;
        if x >= ctx.size() {
            set_error("element does not fit in n bits");
            return Err(TdStatus::OutOfRange);
        }
        write_out(out, ctx.log(x).map_err(fail)?)
    })
}

/// Element `xi^k` as a bit vector.
///
/// # Safety
/// `f` must be a live field handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn td_field_exp(f: *const TdField, k: i64, out: *mut u32) -> TdStatus {
    guard(|| write_out(out, field_ref(f)?.exp(k)))
}

/// Gamma set of `k`: writes its distinct residues to `out` (room for 6) and
/// their number to `len`.
///
/// # Safety
/// `f` must be a live field handle; `out` must hold 6 values; `len` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn td_gamma(
    f: *const TdField,
    k: i64,
    out: *mut u32,
    len: *mut usize,
) -> TdStatus {
    guard(|| {
        let g = orbits::gamma(field_ref(f)?, k).map_err(fail)?;
        if out.is_null() {
            return Err(null());
        }
        let e = g.elems();
        ptr::copy_nonoverlapping(e.as_ptr(), out, e.len());
        write_out(len, e.len())
    })
}

/// Expands an embedded dataset (`design6`, `gdd6-2`, `gdd12-6`, `frob7`,
/// `frob13`).
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn td_dataset_expand(
    name: *const c_char,
    out: *mut *mut TdDesign,
) -> TdStatus {
    guard(|| {
        let name = str_arg(name)?;
        let ds = datasets::load_dataset(name).map_err(fail)?;
        let sys = ds.expand().map_err(fail)?;
        write_out(out, into_handle(sys, Some(ds.name)))
    })
}

/// Expands a certificate in JSON form under the Singer cycle.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn td_cert_expand(
    json: *const c_char,
    with_groups: bool,
    out: *mut *mut TdDesign,
) -> TdStatus {
    guard(|| {
        let cert = Certificate::from_json(str_arg(json)?).map_err(fail)?;
        let ctx = FieldCtx::new(cert.n(), Some(cert.poly())).map_err(fail)?;
        let sys = orbits::expand_certificate(&ctx, &cert, with_groups).map_err(fail)?;
        write_out(out, into_handle(sys, None))
    })
}

/// Reads a design file, gzip or plain.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn td_design_load(path: *const c_char, out: *mut *mut TdDesign) -> TdStatus {
    guard(|| {
        let f = format::load(Path::new(str_arg(path)?)).map_err(fail)?;
        write_out(out, Box::into_raw(Box::new(TdDesign { file: f })))
    })
}

/// Writes a design file; names ending in `.gz` are compressed.
///
/// # Safety
/// `d` must be a live design handle; `path` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn td_design_save(d: *const TdDesign, path: *const c_char) -> TdStatus {
    guard(|| {
        let f = design_ref(d)?;
        format::save(Path::new(str_arg(path)?), f).map_err(fail)
    })
}

/// # Safety
/// `d` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn td_design_free(d: *mut TdDesign) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Dimension `n` of the ambient space; 0 for a null handle.
///
/// # Safety
/// `d` must be a live design handle or null.
#[no_mangle]
pub unsafe extern "C" fn td_design_n(d: *const TdDesign) -> u32 {
    d.as_ref().map_or(0, |d| d.file.system.n())
}

/// Number of triangles; 0 for a null handle.
///
/// # Safety
/// `d` must be a live design handle or null.
#[no_mangle]
pub unsafe extern "C" fn td_design_triangle_count(d: *const TdDesign) -> u64 {
    d.as_ref()
        .map_or(0, |d| d.file.system.triangles().len() as u64)
}

/// Corners of triangle `i`, ascending.
///
/// # Safety
/// `d` must be a live design handle; `out` must hold 3 values.
#[no_mangle]
pub unsafe extern "C" fn td_design_triangle(d: *const TdDesign, i: u64, out: *mut u32) -> TdStatus {
    guard(|| {
        let tris = design_ref(d)?.system.triangles();
        let t = usize::try_from(i)
            .ok()
            .and_then(|i| tris.get(i))
            .ok_or_else(|| {
                set_error(&format!("triangle {i} of {}", tris.len()));
                TdStatus::OutOfRange
            })?;
        if out.is_null() {
            return Err(null());
        }
        ptr::copy_nonoverlapping(t.corners().as_ptr(), out, 3);
        Ok(())
    })
}

/// Checks that every non-group line lies in exactly one triangle.
///
/// # Safety
/// `d` must be a live design handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn td_design_verify(
    d: *const TdDesign,
    out: *mut TdVerifyReport,
) -> TdStatus {
    guard(|| {
        let sys = &design_ref(d)?.system;
        let r = sys.verify().map_err(fail)?;
        write_out(
            out,
            TdVerifyReport {
                ok: r.ok,
                is_gdd: sys.is_gdd(),
                n: r.n,
                m: r.m,
                triangle_count: r.triangle_count,
                lines_total: r.lines_total,
                group_lines: r.group_lines,
                lines_covered: r.lines_covered,
                uncovered: r.uncovered.len() as u64,
                multiply_covered: r.multiply_covered.len() as u64,
                group_lines_covered: r.group_lines_covered.len() as u64,
            },
        )
    })
}

/// Checks that every nonzero vector lies in the same number of triangles.
///
/// # Safety
/// `d` must be a live design handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn td_design_balance(
    d: *const TdDesign,
    out: *mut TdBalanceReport,
) -> TdStatus {
    guard(|| {
        let b = design_ref(d)?.system.balance();
        write_out(
            out,
            TdBalanceReport {
                balanced: b.balanced,
                lambda: b.lambda.unwrap_or(0),
            },
        )
    })
}

fn options(seed: u64, use_seed: bool, node_limit: u64) -> SearchOptions {
    SearchOptions {
        limits: Limits {
            nodes: (node_limit != 0).then_some(node_limit),
            time: None,
            seed: use_seed.then_some(seed),
        },
        ..Default::default()
    }
}

/// Searches for a Singer-invariant `(n, m)` certificate and returns it as
/// JSON; free it with [`td_string_free`]. `node_limit` 0 means unlimited.
///
/// # Safety
/// `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn td_search_singer(
    n: u32,
    m: u32,
    seed: u64,
    use_seed: bool,
    node_limit: u64,
    out_json: *mut *mut c_char,
) -> TdStatus {
    guard(|| {
        if out_json.is_null() {
            return Err(null());
        }
        let r = search::search_singer(n, m, &options(seed, use_seed, node_limit)).map_err(fail)?;
        write_out(
            out_json,
            into_c_string(Certificate::Singer(r.cert).to_json())?,
        )
    })
}

/// Searches for a Frobenius-invariant certificate on `F_(2^n)`.
///
/// # Safety
/// `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn td_search_frobenius(
    n: u32,
    seed: u64,
    use_seed: bool,
    node_limit: u64,
    out_json: *mut *mut c_char,
) -> TdStatus {
    guard(|| {
        if out_json.is_null() {
            return Err(null());
        }
        let r = search::search_frobenius(n, &options(seed, use_seed, node_limit)).map_err(fail)?;
        write_out(
            out_json,
            into_c_string(Certificate::Frobenius(r.cert).to_json())?,
        )
    })
}
