//! C interface. Objects are opaque handles created by `pl_*_parse` or
//! returned through out-parameters and released with the matching
//! `pl_*_free`. Strings returned to the caller are released with
//! `pl_string_free`. Every call returns a [`PlStatus`]; on failure the
//! message is available from `pl_last_error_message` on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use permlogic::logic::{eval_formula, parse_formula, to_snf, Assignment, Formula};
use permlogic::perm::{labeled_to_valued, parse_pm, valued_to_labeled, write_pm, ValuedPermutation};
use permlogic::rlp::{named, parse_rlp, solve_rlp, unnamed, verify_witness, RlpInstance, RlpOutcome, SolveOptions};
use permlogic::sat::{decide_sat, SatBounds, SatOutcome};
use permlogic::Error;

/// Result codes. The first four match the command-line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlStatus {
    /// Positive verdict or plain success.
    Ok = 0,
    /// Negative verdict within the given bounds.
    Negative = 1,
    /// Malformed input or violated precondition.
    InputError = 2,
    /// A time budget ran out.
    Budget = 3,
    /// A required pointer argument was null.
    NullPointer = 4,
    /// Unexpected failure inside the library.
    Internal = 5,
}

pub struct PlFormula(Formula);
pub struct PlModel(ValuedPermutation);
pub struct PlRlpInstance(RlpInstance);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn from_error(e: Error) -> PlStatus {
    set_error(&e.to_string());
    match e {
        Error::Timeout => PlStatus::Budget,
        Error::Solver(_) => PlStatus::Internal,
        _ => PlStatus::InputError,
    }
}

fn guard(f: impl FnOnce() -> Result<PlStatus, PlStatus>) -> PlStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) | Ok(Err(s)) => s,
        Err(_) => {
            set_error("panic inside permlogic");
            PlStatus::Internal
        }
    }
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, PlStatus> {
    if s.is_null() {
        set_error("null string argument");
        return Err(PlStatus::NullPointer);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("string argument is not UTF-8");
        PlStatus::InputError
    })
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, PlStatus> {
    p.as_ref().ok_or_else(|| {
        set_error("null handle");
        PlStatus::NullPointer
    })
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), PlStatus> {
    if out.is_null() {
        set_error("null out-parameter");
        return Err(PlStatus::NullPointer);
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), PlStatus> {
    if out.is_null() {
        set_error("null out-parameter");
        return Err(PlStatus::NullPointer);
    }
    *out = CString::new(s).map_err(|_| PlStatus::Internal)?.into_raw();
    Ok(())
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn pl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn pl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse a closed formula.
///
/// # Safety
/// `src` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pl_formula_parse(src: *const c_char, out: *mut *mut PlFormula) -> PlStatus {
    guard(|| {
        let f = parse_formula(text(src)?).map_err(from_error)?;
        if !f.is_closed() {
            return Err(from_error(Error::NotClosed(f.to_string())));
        }
        put(out, PlFormula(f))?;
        Ok(PlStatus::Ok)
    })
}

/// # Safety
/// `f` must come from `pl_formula_parse` or be null.
#[no_mangle]
pub unsafe extern "C" fn pl_formula_free(f: *mut PlFormula) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pl_formula_to_string(f: *const PlFormula, out: *mut *mut c_char) -> PlStatus {
    guard(|| {
        put_string(out, handle(f)?.0.to_string())?;
        Ok(PlStatus::Ok)
    })
}

/// Normal form of `f` as text, one matrix per line.
///
/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pl_formula_snf(f: *const PlFormula, out: *mut *mut c_char) -> PlStatus {
    guard(|| {
        let snf = to_snf(&handle(f)?.0).map_err(from_error)?;
        put_string(out, snf.to_string())?;
        Ok(PlStatus::Ok)
    })
}

/// Parse a model in the `.pm` format.
///
/// # Safety
/// `src` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pl_model_parse(src: *const c_char, out: *mut *mut PlModel) -> PlStatus {
    guard(|| {
        let m = parse_pm(text(src)?).map_err(from_error)?;
        put(out, PlModel(m))?;
        Ok(PlStatus::Ok)
    })
}

/// # Safety
/// `m` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn pl_model_free(m: *mut PlModel) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Number of elements, or 0 for a null handle.
///
/// # Safety
/// `m` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn pl_model_size(m: *const PlModel) -> usize {
    m.as_ref().map_or(0, |m| m.0.n())
}

/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pl_model_to_string(m: *const PlModel, out: *mut *mut c_char) -> PlStatus {
    guard(|| {
        put_string(out, write_pm(&handle(m)?.0, &[]))?;
        Ok(PlStatus::Ok)
    })
}

/// `PL_STATUS_OK` if the model satisfies the formula, `PL_STATUS_NEGATIVE` if not.
///
/// # Safety
/// Both handles must be live.
#[no_mangle]
pub unsafe extern "C" fn pl_check(m: *const PlModel, f: *const PlFormula) -> PlStatus {
    guard(|| {
        let holds = eval_formula(&handle(m)?.0, &handle(f)?.0, &Assignment::default()).map_err(from_error)?;
        Ok(if holds { PlStatus::Ok } else { PlStatus::Negative })
    })
}

/// Bounded satisfiability. On `PL_STATUS_OK` a verified model is stored in
/// `out`; on `PL_STATUS_NEGATIVE` there is no model within the bounds.
///
/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pl_sat(
    f: *const PlFormula,
    max_fingerprints: usize,
    block_len: usize,
    max_size: usize,
    out: *mut *mut PlModel,
) -> PlStatus {
    guard(|| {
        let bounds = SatBounds { max_fingerprints, max_block_len: block_len, max_size, ..SatBounds::default() };
        match decide_sat(&handle(f)?.0, &bounds).map_err(from_error)? {
            SatOutcome::Sat { model, .. } => {
                put(out, PlModel(model))?;
                Ok(PlStatus::Ok)
            }
            SatOutcome::UnsatWithinBounds(_) => Ok(PlStatus::Negative),
        }
    })
}

/// Parse an instance in the `.rlp` format.
///
/// # Safety
/// `src` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pl_rlp_parse(src: *const c_char, out: *mut *mut PlRlpInstance) -> PlStatus {
    guard(|| {
        let inst = parse_rlp(text(src)?).map_err(from_error)?;
        put(out, PlRlpInstance(inst))?;
        Ok(PlStatus::Ok)
    })
}

/// # Safety
/// `i` must come from `pl_rlp_parse` or be null.
#[no_mangle]
pub unsafe extern "C" fn pl_rlp_free(i: *mut PlRlpInstance) {
    if !i.is_null() {
        drop(Box::from_raw(i));
    }
}

/// Search for a witness; it is returned as a model whose elements each
/// carry exactly their label. `theta` 0 selects the default threshold.
///
/// # Safety
/// `i` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pl_rlp_solve(i: *const PlRlpInstance, theta: usize, out: *mut *mut PlModel) -> PlStatus {
    guard(|| {
        let inst = &handle(i)?.0;
        let mut opts = SolveOptions::default();
        if theta > 0 {
            opts.theta = theta;
        }
        match solve_rlp(inst, &opts).map_err(from_error)? {
            RlpOutcome::Witness(lp) => {
                put(out, PlModel(labeled_to_valued(&named(&lp, &inst.alphabet))))?;
                Ok(PlStatus::Ok)
            }
            RlpOutcome::NoWitness { .. } => Ok(PlStatus::Negative),
        }
    })
}

/// `PL_STATUS_OK` if the model is a witness for the instance.
///
/// # Safety
/// Both handles must be live.
#[no_mangle]
pub unsafe extern "C" fn pl_rlp_verify(i: *const PlRlpInstance, w: *const PlModel) -> PlStatus {
    guard(|| {
        let inst = &handle(i)?.0;
        let lp = valued_to_labeled(&handle(w)?.0).and_then(|l| unnamed(&l, &inst.alphabet)).map_err(from_error)?;
        Ok(if verify_witness(&lp, inst).map_err(from_error)? { PlStatus::Ok } else { PlStatus::Negative })
    })
}
