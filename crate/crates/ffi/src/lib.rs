//! C interface to `ddgeo`.
//!
//! Paths are opaque heap handles released with `ddgeo_path_free`. Every
//! function returns a `DdgeoStatus`; on failure a message is available from
//! `ddgeo_last_error` until the next call on the same thread. Strings
//! returned by the library are released with `ddgeo_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ddgeo::document::PathDocument;
use ddgeo::path::{is_feasible, path_length, validate};
use ddgeo::planner::{plan, PlanOptions};
use ddgeo::rewrite::shorten;
use ddgeo::smooth::dubins_solve;
use ddgeo::typing::analyze;
use ddgeo::{Configuration, DiscretePath, Error, Params, Vec2};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DdgeoStatus {
    Ok = 0,
    Infeasible = 1,
    InvalidArgument = 2,
    Internal = 3,
    NullPointer = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct DdgeoParams {
    /// Turn bound in radians.
    pub theta: f64,
    pub ell: f64,
    pub n_sides: u32,
}

/// Point and heading angle in radians.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct DdgeoConfig {
    pub x: f64,
    pub y: f64,
    pub heading: f64,
}

/// Opaque path handle.
pub struct DdgeoPath {
    inner: DiscretePath,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> DdgeoStatus {
    match e {
        Error::Internal(_) | Error::PlannerFailure(_) => DdgeoStatus::Internal,
        _ => DdgeoStatus::InvalidArgument,
    }
}

/// Runs `f`, recording errors and converting panics.
fn guard(f: impl FnOnce() -> Result<DdgeoStatus, (DdgeoStatus, String)>) -> DdgeoStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("panic inside ddgeo");
            DdgeoStatus::Panic
        }
    }
}

fn fail(e: Error) -> (DdgeoStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (DdgeoStatus, String) {
    (DdgeoStatus::NullPointer, format!("{what} is null"))
}

fn params_of(p: &DdgeoParams) -> Result<Params, (DdgeoStatus, String)> {
    let mut q = Params::new(p.theta, p.ell).map_err(fail)?;
    q.n_sides = p.n_sides;
    Ok(q)
}

fn config_of(c: &DdgeoConfig) -> Configuration {
    Configuration::from_angle(c.x, c.y, c.heading)
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (DdgeoStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn store_path(out: *mut *mut DdgeoPath, path: DiscretePath) {
    *out = Box::into_raw(Box::new(DdgeoPath { inner: path }));
}

/// Message for the last failed call on this thread, or null. Owned by the
/// library; valid until the next call.
#[no_mangle]
pub extern "C" fn ddgeo_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Parameters with `theta = 2π / n_sides`.
///
/// # Safety
/// `out` must be null or point to writable memory for one `DdgeoParams`.
#[no_mangle]
pub unsafe extern "C" fn ddgeo_params_from_n(n_sides: u32, ell: f64, out: *mut DdgeoParams) -> DdgeoStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let p = Params::from_n_sides(n_sides, ell).map_err(fail)?;
        *out = DdgeoParams {
            theta: p.theta,
            ell: p.ell,
            n_sides: p.n_sides,
        };
        Ok(DdgeoStatus::Ok)
    })
}

/// Builds a path from `count` interleaved coordinates `xy[2i], xy[2i+1]`.
/// The first and last vertex must match the configurations.
///
/// # Safety
/// `xy` must point to `2 * count` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ddgeo_path_new(
    start: DdgeoConfig,
    end: DdgeoConfig,
    xy: *const f64,
    count: usize,
    out: *mut *mut DdgeoPath,
) -> DdgeoStatus {
    guard(|| {
        if xy.is_null() {
            return Err(null("xy"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let coords = std::slice::from_raw_parts(xy, 2 * count);
        let vertices = coords.chunks_exact(2).map(|c| Vec2::new(c[0], c[1])).collect();
        let path = DiscretePath::new(config_of(&start), config_of(&end), vertices).map_err(fail)?;
        store_path(out, path);
        Ok(DdgeoStatus::Ok)
    })
}

/// Releases a path; null is ignored.
///
/// # Safety
/// `path` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ddgeo_path_free(path: *mut DdgeoPath) {
    if !path.is_null() {
        drop(Box::from_raw(path));
    }
}

/// # Safety
/// `path` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ddgeo_path_vertex_count(path: *const DdgeoPath, out: *mut usize) -> DdgeoStatus {
    guard(|| {
        let p = deref(path, "path")?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = p.inner.vertices.len();
        Ok(DdgeoStatus::Ok)
    })
}

/// Copies the vertices as interleaved coordinates into `xy`, which holds
/// `capacity` vertices.
///
/// # Safety
/// `xy` must point to `2 * capacity` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn ddgeo_path_vertices(path: *const DdgeoPath, xy: *mut f64, capacity: usize) -> DdgeoStatus {
    guard(|| {
        let p = deref(path, "path")?;
        if xy.is_null() {
            return Err(null("xy"));
        }
        let v = &p.inner.vertices;
        if capacity < v.len() {
            return Err((DdgeoStatus::BufferTooSmall, format!("need {} vertices", v.len())));
        }
        let dst = std::slice::from_raw_parts_mut(xy, 2 * v.len());
        for (i, q) in v.iter().enumerate() {
            dst[2 * i] = q.x;
            dst[2 * i + 1] = q.y;
        }
        Ok(DdgeoStatus::Ok)
    })
}

/// # Safety
/// `path` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ddgeo_path_length(path: *const DdgeoPath, out: *mut f64) -> DdgeoStatus {
    guard(|| {
        let p = deref(path, "path")?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = path_length(&p.inner);
        Ok(DdgeoStatus::Ok)
    })
}

/// `DDGEO_STATUS_OK` when feasible, `DDGEO_STATUS_INFEASIBLE` otherwise;
/// the number of violations goes to `violations` when it is not null.
///
/// # Safety
/// `path` and `params` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn ddgeo_validate(
    path: *const DdgeoPath,
    params: *const DdgeoParams,
    violations: *mut usize,
) -> DdgeoStatus {
    guard(|| {
        let p = deref(path, "path")?;
        let q = params_of(deref(params, "params")?)?;
        let v = validate(&p.inner, &q).map_err(fail)?;
        if !violations.is_null() {
            *violations = v.len();
        }
        Ok(if v.is_empty() { DdgeoStatus::Ok } else { DdgeoStatus::Infeasible })
    })
}

/// Writes the type word (e.g. "ABA") as a NUL-terminated string.
///
/// # Safety
/// `buf` must point to `capacity` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn ddgeo_classify(
    path: *const DdgeoPath,
    params: *const DdgeoParams,
    buf: *mut c_char,
    capacity: usize,
) -> DdgeoStatus {
    guard(|| {
        let p = deref(path, "path")?;
        let q = params_of(deref(params, "params")?)?;
        if buf.is_null() {
            return Err(null("buf"));
        }
        if !is_feasible(&p.inner, &q) {
            return Err((DdgeoStatus::Infeasible, "path is not feasible".into()));
        }
        let word = analyze(&p.inner, &q).map_err(fail)?.type_word;
        let bytes = word.as_str().as_bytes();
        if bytes.len() + 1 > capacity {
            return Err((DdgeoStatus::BufferTooSmall, format!("need {} bytes", bytes.len() + 1)));
        }
        let dst = std::slice::from_raw_parts_mut(buf as *mut u8, bytes.len() + 1);
        dst[..bytes.len()].copy_from_slice(bytes);
        dst[bytes.len()] = 0;
        Ok(DdgeoStatus::Ok)
    })
}

/// Shortens a feasible path by local rewrites; the result is a new handle.
///
/// # Safety
/// Pointers must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ddgeo_shorten(
    path: *const DdgeoPath,
    params: *const DdgeoParams,
    budget: usize,
    out: *mut *mut DdgeoPath,
) -> DdgeoStatus {
    guard(|| {
        let p = deref(path, "path")?;
        let q = params_of(deref(params, "params")?)?;
        if out.is_null() {
            return Err(null("out"));
        }
        if !is_feasible(&p.inner, &q) {
            return Err((DdgeoStatus::Infeasible, "path is not feasible".into()));
        }
        let r = shorten(&p.inner, &q, budget).map_err(fail)?;
        store_path(out, r.path);
        Ok(DdgeoStatus::Ok)
    })
}

/// Shortest feasible path between two configurations.
///
/// # Safety
/// `params` must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ddgeo_plan(
    start: DdgeoConfig,
    end: DdgeoConfig,
    params: *const DdgeoParams,
    out: *mut *mut DdgeoPath,
) -> DdgeoStatus {
    guard(|| {
        let q = params_of(deref(params, "params")?)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let r = plan(&config_of(&start), &config_of(&end), &q, &PlanOptions::default()).map_err(fail)?;
        store_path(out, r.path);
        Ok(DdgeoStatus::Ok)
    })
}

/// Length of the shortest unit-radius smooth path.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ddgeo_dubins_length(start: DdgeoConfig, end: DdgeoConfig, out: *mut f64) -> DdgeoStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = dubins_solve(&config_of(&start), &config_of(&end)).map_err(fail)?.length();
        Ok(DdgeoStatus::Ok)
    })
}

/// The path as a JSON document; release with `ddgeo_string_free`.
///
/// # Safety
/// Pointers must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ddgeo_path_to_json(
    path: *const DdgeoPath,
    params: *const DdgeoParams,
    out: *mut *mut c_char,
) -> DdgeoStatus {
    guard(|| {
        let p = deref(path, "path")?;
        let q = params_of(deref(params, "params")?)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let text = PathDocument::from_path(&p.inner, &q).to_json();
        *out = CString::new(text).map_err(|e| (DdgeoStatus::Internal, e.to_string()))?.into_raw();
        Ok(DdgeoStatus::Ok)
    })
}

/// Parses a JSON path document into a new handle.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ddgeo_path_from_json(json: *const c_char, out: *mut *mut DdgeoPath) -> DdgeoStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| (DdgeoStatus::InvalidArgument, e.to_string()))?;
        let doc = PathDocument::from_json(text).map_err(fail)?;
        store_path(out, doc.path().map_err(fail)?);
        Ok(DdgeoStatus::Ok)
    })
}

/// # Safety
/// `s` must come from this library; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn ddgeo_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
