//! C interface. Every call returns an [`MtStatus`]; on failure a message is
//! available from [`mt_last_error`] on the same thread until the next call.
//! Handles are opaque and freed with their matching `_free` function; strings
//! returned through out-parameters are freed with [`mt_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use modtors::bounds::{torsion_bound, criterion_threshold};
use modtors::hecke_symbols::{criterion_report_in, hecke_span_rank_in};
use modtors::linalg::FieldSpec;
use modtors::rel_homology::AnyPresentation;
use modtors::residue_p1::{P1Table, PrimePower};
use modtors::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MtStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NotPrime = 3,
    OutOfRange = 4,
    LimitExceeded = 5,
    Precondition = 6,
    Internal = 7,
}

/// Enumerated `P^1(Z/p^n)`.
pub struct MtP1Table {
    table: P1Table,
}

/// Presentation of relative homology over `Q` or `F_l`, with its table.
pub struct MtPresentation {
    table: P1Table,
    pres: AnyPresentation,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> MtStatus {
    match e {
        Error::NotPrime(_) => MtStatus::NotPrime,
        Error::IndexOutOfRange { .. } => MtStatus::OutOfRange,
        Error::TableTooLarge { .. } | Error::ModulusOverflow { .. } | Error::SmithCapExceeded { .. } => {
            MtStatus::LimitExceeded
        }
        Error::Precondition(_) | Error::NotCoprime { .. } => MtStatus::Precondition,
        Error::ZeroExponent | Error::DimensionMismatch { .. } | Error::InvalidArgument(_) => {
            MtStatus::InvalidArgument
        }
    }
}

/// Run `f`, recording any error or panic.
fn guard(f: impl FnOnce() -> Result<(), (MtStatus, String)>) -> MtStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MtStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            MtStatus::Internal
        }
    }
}

fn lib(e: Error) -> (MtStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (MtStatus, String) {
    (MtStatus::NullPointer, format!("{what} is null"))
}

unsafe fn write_out<T>(out: *mut T, v: T) -> Result<(), (MtStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(v);
    Ok(())
}

unsafe fn deref<'a, T>(h: *const T, what: &str) -> Result<&'a T, (MtStatus, String)> {
    h.as_ref().ok_or_else(|| null(what))
}

fn field_of(l: u64) -> Result<FieldSpec, Error> {
    if l == 0 {
        Ok(FieldSpec::Rationals)
    } else {
        FieldSpec::prime(l)
    }
}

/// Message for the last failed call on this thread, or null. Owned by the
/// library.
#[no_mangle]
pub extern "C" fn mt_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn mt_p1_table_new(p: u64, n: u32, out: *mut *mut MtP1Table) -> MtStatus {
    guard(|| {
        let pp = PrimePower::new(p, n).map_err(lib)?;
        let table = P1Table::build(pp).map_err(lib)?;
        write_out(out, Box::into_raw(Box::new(MtP1Table { table })))
    })
}

/// # Safety
/// `table` must come from [`mt_p1_table_new`] or be null.
#[no_mangle]
pub unsafe extern "C" fn mt_p1_table_free(table: *mut MtP1Table) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mt_p1_table_len(table: *const MtP1Table, out: *mut usize) -> MtStatus {
    guard(|| write_out(out, deref(table, "table")?.table.len()))
}

/// Index of the image of point `index` under `(w, t) -> (-t, w)`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mt_p1_table_sigma(table: *const MtP1Table, index: usize, out: *mut usize) -> MtStatus {
    guard(|| {
        let t = &deref(table, "table")?.table;
        write_out(out, t.try_act_sigma(index).map_err(lib)?)
    })
}

/// Index of the image of point `index` under `(w, t) -> (t, -w - t)`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mt_p1_table_tau(table: *const MtP1Table, index: usize, out: *mut usize) -> MtStatus {
    guard(|| {
        let t = &deref(table, "table")?.table;
        write_out(out, t.try_act_tau(index).map_err(lib)?)
    })
}

/// Index of the class of `(c, d)`; `MT_STATUS_INVALID_ARGUMENT` when the pair
/// is not a point.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mt_p1_table_normalize(
    table: *const MtP1Table,
    c: i64,
    d: i64,
    out: *mut usize,
) -> MtStatus {
    guard(|| {
        let t = &deref(table, "table")?.table;
        let idx = t
            .index_of_pair(c, d)
            .ok_or_else(|| (MtStatus::InvalidArgument, format!("({c}, {d}) is not a point")))?;
        write_out(out, idx)
    })
}

/// Presentation for `p^n` over `F_l`, or over `Q` when `l = 0`.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn mt_presentation_new(p: u64, n: u32, l: u64, out: *mut *mut MtPresentation) -> MtStatus {
    guard(|| {
        let pp = PrimePower::new(p, n).map_err(lib)?;
        let field = field_of(l).map_err(lib)?;
        let table = P1Table::build(pp).map_err(lib)?;
        let pres = AnyPresentation::build(&table, field).map_err(lib)?;
        write_out(out, Box::into_raw(Box::new(MtPresentation { table, pres })))
    })
}

/// # Safety
/// `pres` must come from [`mt_presentation_new`] or be null.
#[no_mangle]
pub unsafe extern "C" fn mt_presentation_free(pres: *mut MtPresentation) {
    if !pres.is_null() {
        drop(Box::from_raw(pres));
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mt_presentation_quotient_dim(pres: *const MtPresentation, out: *mut usize) -> MtStatus {
    guard(|| write_out(out, deref(pres, "presentation")?.pres.quotient_dim()))
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mt_presentation_relation_rank(pres: *const MtPresentation, out: *mut usize) -> MtStatus {
    guard(|| write_out(out, deref(pres, "presentation")?.pres.relation_rank()))
}

/// Rank of `T_1 {0, oo}, ..., T_imax {0, oo}` in the quotient.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mt_presentation_hecke_span_rank(
    pres: *const MtPresentation,
    imax: u64,
    out: *mut usize,
) -> MtStatus {
    guard(|| {
        let h = deref(pres, "presentation")?;
        write_out(out, hecke_span_rank_in(&h.pres, &h.table, imax).map_err(lib)?)
    })
}

fn json_string<T: serde::Serialize>(v: &T) -> Result<*mut c_char, (MtStatus, String)> {
    let s = serde_json::to_string(v).map_err(|e| (MtStatus::Internal, e.to_string()))?;
    Ok(CString::new(s).map_err(|e| (MtStatus::Internal, e.to_string()))?.into_raw())
}

/// Independence report for `sd` Hecke images, as JSON. The presentation must
/// be over a finite field.
///
/// # Safety
/// Pointers must be valid; free the string with [`mt_string_free`].
#[no_mangle]
pub unsafe extern "C" fn mt_criterion_json(pres: *const MtPresentation, d: u64, out: *mut *mut c_char) -> MtStatus {
    guard(|| {
        let h = deref(pres, "presentation")?;
        let rep = criterion_report_in(&h.pres, &h.table, d).map_err(lib)?;
        write_out(out, json_string(&rep)?)
    })
}

/// Final torsion bound and criterion threshold for `(p, d)`, as JSON.
///
/// # Safety
/// `out` must be valid; free the string with [`mt_string_free`].
#[no_mangle]
pub unsafe extern "C" fn mt_bounds_json(p: u64, d: u64, original_order: bool, out: *mut *mut c_char) -> MtStatus {
    guard(|| {
        let bound = torsion_bound(p, d, original_order).map_err(lib)?;
        let th = criterion_threshold(p, d).map_err(lib)?;
        let v = serde_json::json!({ "final_bound": bound, "criterion_threshold": th });
        write_out(out, json_string(&v)?)
    })
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn mt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version, static.
#[no_mangle]
pub extern "C" fn mt_version() -> *const c_char {
    const V: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    CStr::from_bytes_with_nul(V.as_bytes()).expect("nul-terminated").as_ptr()
}
