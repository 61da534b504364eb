//! C interface to `clonelab`.
//!
//! Objects are opaque heap handles released with the matching `*_free`.
//! Every fallible call returns a [`ClStatus`]; on failure the message is
//! available from [`cl_last_error`] on the same thread. Strings returned
//! through out-parameters are released with [`cl_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use clonelab::interpolation::{is_lambda_interpolable, Interpolation};
use clonelab::ultralocal::{search_dagger, SearchOutcome, Strategy};
use clonelab::{CloneFragment, Error, Limits, Operation, Relation, Universe};

/// Status codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClStatus {
    Ok = 0,
    /// Null pointer, bad UTF-8, or an unparsable option string.
    InvalidArgument = 1,
    /// Rejected by the library (bad table, arity mismatch, ...).
    InputError = 2,
    CapExceeded = 3,
    /// A panic was caught at the boundary.
    Internal = 4,
}

/// A finitary operation on a finite universe.
pub struct ClOperation(Operation);
/// A finitary relation on a finite universe.
pub struct ClRelation(Relation);
/// An arity-bounded clone fragment.
pub struct ClFragment(CloneFragment);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

enum Fail {
    Arg(&'static str),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> ClStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            ClStatus::Ok
        }
        Ok(Err(Fail::Arg(m))) => {
            set_error(m);
            ClStatus::InvalidArgument
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(&e.to_string());
            if e.is_cap() {
                ClStatus::CapExceeded
            } else {
                ClStatus::InputError
            }
        }
        Err(_) => {
            set_error("internal panic");
            ClStatus::Internal
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Arg(what))
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &'static str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Fail::Arg(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn out<T>(p: *mut T, v: T, what: &'static str) -> Result<(), Fail> {
    if p.is_null() {
        return Err(Fail::Arg(what));
    }
    p.write(v);
    Ok(())
}

unsafe fn string(p: *const c_char, what: &'static str) -> Result<String, Fail> {
    if p.is_null() {
        return Err(Fail::Arg(what));
    }
    CStr::from_ptr(p).to_str().map(str::to_owned).map_err(|_| Fail::Arg(what))
}

fn owned_cstring(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).unwrap_or_default().into_raw()
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn cl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds an operation of the given arity on `{0..size-1}` from its table
/// (`size^arity` entries, last argument fastest).
///
/// # Safety
/// `table` must point to `len` bytes; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cl_operation_new(
    size: usize,
    arity: usize,
    table: *const u8,
    len: usize,
    out_op: *mut *mut ClOperation,
) -> ClStatus {
    guard(|| {
        let t = slice(table, len, "table")?;
        let u = Universe::new(size)?;
        let op = Operation::new(&u, arity, t.to_vec())?;
        out(out_op, Box::into_raw(Box::new(ClOperation(op))), "out_op")
    })
}

/// # Safety
/// `op` must come from [`cl_operation_new`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cl_operation_free(op: *mut ClOperation) {
    if !op.is_null() {
        drop(Box::from_raw(op));
    }
}

/// # Safety
/// `args` must point to `n` bytes.
#[no_mangle]
pub unsafe extern "C" fn cl_operation_apply(
    op: *const ClOperation,
    args: *const u8,
    n: usize,
    out_value: *mut u8,
) -> ClStatus {
    guard(|| {
        let op = deref(op, "op")?;
        let a = slice(args, n, "args")?;
        let v = op.0.apply(a)?;
        out(out_value, v, "out_value")
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn cl_is_near_unanimity(op: *const ClOperation, out_bool: *mut bool) -> ClStatus {
    guard(|| {
        let v = deref(op, "op")?.0.is_near_unanimity()?;
        out(out_bool, v, "out_bool")
    })
}

/// Builds a relation from `count` tuples stored back to back in `tuples`
/// (`count * arity` bytes).
///
/// # Safety
/// `tuples` must point to `count * arity` bytes.
#[no_mangle]
pub unsafe extern "C" fn cl_relation_new(
    size: usize,
    arity: usize,
    tuples: *const u8,
    count: usize,
    out_rel: *mut *mut ClRelation,
) -> ClStatus {
    guard(|| {
        let total = count.checked_mul(arity).ok_or(Fail::Arg("count * arity overflows"))?;
        let flat = slice(tuples, total, "tuples")?;
        let u = Universe::new(size)?;
        let rows: Vec<Vec<u8>> = if arity == 0 { Vec::new() } else { flat.chunks(arity).map(<[u8]>::to_vec).collect() };
        let rel = Relation::new(&u, arity, rows)?;
        out(out_rel, Box::into_raw(Box::new(ClRelation(rel))), "out_rel")
    })
}

/// # Safety
/// `rel` must come from [`cl_relation_new`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cl_relation_free(rel: *mut ClRelation) {
    if !rel.is_null() {
        drop(Box::from_raw(rel));
    }
}

/// Whether `op` preserves `rel`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn cl_preserves(
    op: *const ClOperation,
    rel: *const ClRelation,
    out_bool: *mut bool,
) -> ClStatus {
    guard(|| {
        let w = clonelab::finite::preserves(&deref(op, "op")?.0, &deref(rel, "rel")?.0)?;
        out(out_bool, w.is_none(), "out_bool")
    })
}

/// Generates the arity-`<= arity_bound` part of the clone generated by
/// `n >= 1` operations. `member_cap` of 0 keeps the default cap.
///
/// # Safety
/// `gens` must point to `n` valid operation handles.
#[no_mangle]
pub unsafe extern "C" fn cl_fragment_generate(
    gens: *const *const ClOperation,
    n: usize,
    arity_bound: usize,
    member_cap: usize,
    out_frag: *mut *mut ClFragment,
) -> ClStatus {
    guard(|| {
        let ptrs = slice(gens, n, "gens")?;
        let ops = ptrs.iter().map(|&p| deref(p, "gens[i]").map(|o| o.0.clone())).collect::<Result<Vec<_>, _>>()?;
        let u = ops.first().ok_or(Fail::Arg("at least one generator is required"))?.universe().clone();
        let mut limits = Limits::default();
        if member_cap > 0 {
            limits.members = member_cap;
        }
        let frag = CloneFragment::generate(&u, &ops, arity_bound, &limits)?;
        out(out_frag, Box::into_raw(Box::new(ClFragment(frag))), "out_frag")
    })
}

/// # Safety
/// `frag` must come from [`cl_fragment_generate`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cl_fragment_free(frag: *mut ClFragment) {
    if !frag.is_null() {
        drop(Box::from_raw(frag));
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn cl_fragment_contains(
    frag: *const ClFragment,
    op: *const ClOperation,
    out_bool: *mut bool,
) -> ClStatus {
    guard(|| {
        let v = deref(frag, "frag")?.0.contains(&deref(op, "op")?.0)?;
        out(out_bool, v, "out_bool")
    })
}

/// Number of members of the given arity (0 above the bound).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn cl_fragment_member_count(
    frag: *const ClFragment,
    arity: usize,
    out_count: *mut usize,
) -> ClStatus {
    guard(|| {
        let v = deref(frag, "frag")?.0.members(arity).len();
        out(out_count, v, "out_count")
    })
}

/// Whether every `lambda`-subset of the domain of `f` is interpolated by a
/// member of `frag`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn cl_is_lambda_interpolable(
    f: *const ClOperation,
    frag: *const ClFragment,
    lambda: usize,
    out_bool: *mut bool,
) -> ClStatus {
    guard(|| {
        let r = is_lambda_interpolable(&deref(f, "f")?.0, &deref(frag, "frag")?.0, lambda)?;
        out(out_bool, matches!(r, Interpolation::Interpolable), "out_bool")
    })
}

/// Searches a cover certificate. `strategy` is a strategy name such as
/// `"exhaustive"` or `"equalizer-atoms"`. On success `*out_found` is set and,
/// when found, `*out_cover_json` receives the cover as a JSON array of blocks
/// (otherwise null).
///
/// # Safety
/// Pointers must be valid; `strategy` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn cl_search_dagger(
    f: *const ClOperation,
    frag: *const ClFragment,
    lambda: usize,
    strategy: *const c_char,
    out_found: *mut bool,
    out_cover_json: *mut *mut c_char,
) -> ClStatus {
    guard(|| {
        let s: Strategy = string(strategy, "strategy")?.parse().map_err(|_| Fail::Arg("unknown strategy"))?;
        if out_found.is_null() || out_cover_json.is_null() {
            return Err(Fail::Arg("null out-parameter"));
        }
        let r = search_dagger(&deref(f, "f")?.0, &deref(frag, "frag")?.0, lambda, s, &Limits::default())?;
        match r {
            SearchOutcome::Found(cert) => {
                let json = clonelab::io::cover_to(&cert.cover).to_string();
                out(out_found, true, "out_found")?;
                out(out_cover_json, owned_cstring(json), "out_cover_json")
            }
            SearchOutcome::NotFound { .. } => {
                out(out_found, false, "out_found")?;
                out(out_cover_json, ptr::null_mut(), "out_cover_json")
            }
        }
    })
}

/// Runs the command line with `argc` arguments (the program name is
/// supplied). Stores the exit code and the stdout document.
///
/// # Safety
/// `argv` must point to `argc` NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn cl_run_cli(
    argv: *const *const c_char,
    argc: usize,
    out_code: *mut i32,
    out_stdout: *mut *mut c_char,
) -> ClStatus {
    guard(|| {
        let ptrs = slice(argv, argc, "argv")?;
        let mut args = vec!["clonelab".to_owned()];
        for &p in ptrs {
            args.push(string(p, "argv[i]")?);
        }
        if out_code.is_null() || out_stdout.is_null() {
            return Err(Fail::Arg("null out-parameter"));
        }
        let o = clonelab::cli::run(args);
        let text = if o.stdout.is_empty() { o.stderr } else { o.stdout };
        out(out_code, o.code, "out_code")?;
        out(out_stdout, owned_cstring(text), "out_stdout")
    })
}
