//! C ABI over `eikonal_lines`.
//!
//! Fields and costs are opaque handles created by the `el_field_*` and `el_cost_*`
//! constructors and released with the matching `el_*_free`. Every fallible call returns an
//! [`ElStatus`]; on failure a message is available from
//! [`el_last_error_message`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use eikonal_lines::analysis::critical_angle;
use eikonal_lines::costfn::JumpCost;
use eikonal_lines::energy::{energy_gap, line_energy};
use eikonal_lines::fields::{
    competitor_field, one_d_transition, tiling_field, viscosity_field, PiecewiseField,
};
use eikonal_lines::{Error, Vec2};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    OutsideDomain = 3,
    OnJumpCurve = 4,
    SingularPoint = 5,
    Numerical = 6,
    NoSignChange = 7,
    Io = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElFieldKind {
    Viscosity = 0,
    Competitor = 1,
    OneDTransition = 2,
    Tiling = 3,
}

/// Opaque field handle.
pub struct ElField {
    inner: PiecewiseField,
}

/// Opaque jump-cost handle.
pub struct ElCost {
    inner: JumpCost,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> ElStatus {
    match e {
        Error::Domain { .. } | Error::Parse(_) | Error::EdgeOnCurve { .. } => ElStatus::InvalidArgument,
        Error::OutsideDomain(_) => ElStatus::OutsideDomain,
        Error::OnJumpCurve { .. } => ElStatus::OnJumpCurve,
        Error::SingularPoint(_) => ElStatus::SingularPoint,
        Error::NonFinite { .. } | Error::Accuracy { .. } | Error::Indeterminate => ElStatus::Numerical,
        Error::NoSignChange { .. } => ElStatus::NoSignChange,
        Error::Io(_) => ElStatus::Io,
    }
}

/// Runs `body`, converting errors and panics into a status and a stored message.
fn guard(body: impl FnOnce() -> Result<(), (ElStatus, String)>) -> ElStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => ElStatus::Ok,
        Ok(Err((status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            ElStatus::Panic
        }
    }
}

fn lift<T>(r: eikonal_lines::Result<T>) -> Result<T, (ElStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (ElStatus, String) {
    (ElStatus::NullPointer, format!("{what} is null"))
}

/// Message of the last failed call on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn el_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Creates a field; `n` is the tile count and is ignored unless `kind` is `Tiling`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn el_field_new(kind: ElFieldKind, theta0: f64, n: usize, out: *mut *mut ElField) -> ElStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let field = lift(match kind {
            ElFieldKind::Viscosity => viscosity_field(theta0),
            ElFieldKind::Competitor => competitor_field(theta0),
            ElFieldKind::OneDTransition => one_d_transition(theta0),
            ElFieldKind::Tiling => tiling_field(theta0, n),
        })?;
        *out = Box::into_raw(Box::new(ElField { inner: field }));
        Ok(())
    })
}

/// # Safety
/// `field` must be null or a handle from [`el_field_new`] not freed before.
#[no_mangle]
pub unsafe extern "C" fn el_field_free(field: *mut ElField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Field value at `(x, y)`.
///
/// # Safety
/// `field` must be a live handle; `mx`, `my` must be writable.
#[no_mangle]
pub unsafe extern "C" fn el_field_eval(field: *const ElField, x: f64, y: f64, mx: *mut f64, my: *mut f64) -> ElStatus {
    guard(|| {
        let field = field.as_ref().ok_or_else(|| null("field"))?;
        if mx.is_null() || my.is_null() {
            return Err(null("output"));
        }
        let v = lift(field.inner.eval(Vec2::new(x, y)))?;
        *mx = v.x;
        *my = v.y;
        Ok(())
    })
}

/// Number of declared jump curves, or 0 for a null handle.
///
/// # Safety
/// `field` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn el_field_curve_count(field: *const ElField) -> usize {
    field.as_ref().map_or(0, |f| f.inner.jump_curves().len())
}

/// `f(t) = t^p`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn el_cost_power(p: f64, out: *mut *mut ElCost) -> ElStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let cost = lift(JumpCost::power(p))?;
        *out = Box::into_raw(Box::new(ElCost { inner: cost }));
        Ok(())
    })
}

/// Piecewise-linear cost through `len` knots `(ts[i], values[i])`.
///
/// # Safety
/// `ts` and `values` must point to `len` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn el_cost_table(ts: *const f64, values: *const f64, len: usize, out: *mut *mut ElCost) -> ElStatus {
    guard(|| {
        if ts.is_null() || values.is_null() {
            return Err(null("knots"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let ts = std::slice::from_raw_parts(ts, len);
        let values = std::slice::from_raw_parts(values, len);
        let cost = lift(JumpCost::table(ts.iter().copied().zip(values.iter().copied()).collect()))?;
        *out = Box::into_raw(Box::new(ElCost { inner: cost }));
        Ok(())
    })
}

/// Cost from a `power:<p>` or `table:<csv path>` string.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn el_cost_parse(text: *const c_char, out: *mut *mut ElCost) -> ElStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let s = CStr::from_ptr(text)
            .to_str()
            .map_err(|_| (ElStatus::InvalidArgument, "cost string is not UTF-8".to_string()))?;
        let cost = lift(JumpCost::from_spec(s))?;
        *out = Box::into_raw(Box::new(ElCost { inner: cost }));
        Ok(())
    })
}

/// # Safety
/// `cost` must be null or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn el_cost_free(cost: *mut ElCost) {
    if !cost.is_null() {
        drop(Box::from_raw(cost));
    }
}

/// Total line energy of `field` for `cost`; may be `+inf`.
///
/// # Safety
/// Handles must be live; `total` must be writable.
#[no_mangle]
pub unsafe extern "C" fn el_line_energy(field: *const ElField, cost: *const ElCost, tol: f64, total: *mut f64) -> ElStatus {
    guard(|| {
        let field = field.as_ref().ok_or_else(|| null("field"))?;
        let cost = cost.as_ref().ok_or_else(|| null("cost"))?;
        if total.is_null() {
            return Err(null("total"));
        }
        *total = lift(line_energy(&field.inner, &cost.inner, tol))?.total;
        Ok(())
    })
}

/// Competitor energy minus viscosity-solution energy.
///
/// # Safety
/// `cost` must be live; `gap` must be writable.
#[no_mangle]
pub unsafe extern "C" fn el_energy_gap(cost: *const ElCost, theta0: f64, tol: f64, gap: *mut f64) -> ElStatus {
    guard(|| {
        let cost = cost.as_ref().ok_or_else(|| null("cost"))?;
        if gap.is_null() {
            return Err(null("gap"));
        }
        *gap = lift(energy_gap(&cost.inner, theta0, tol))?;
        Ok(())
    })
}

/// Angle where the gap for `t^p` changes sign, with its bracket.
///
/// # Safety
/// Output pointers must be writable; `lo` and `hi` may be null.
#[no_mangle]
pub unsafe extern "C" fn el_critical_angle(p: f64, tol: f64, theta_star: *mut f64, lo: *mut f64, hi: *mut f64) -> ElStatus {
    guard(|| {
        if theta_star.is_null() {
            return Err(null("theta_star"));
        }
        let r = lift(critical_angle(p, tol))?;
        *theta_star = r.theta_star;
        if !lo.is_null() {
            *lo = r.bracket.0;
        }
        if !hi.is_null() {
            *hi = r.bracket.1;
        }
        Ok(())
    })
}
