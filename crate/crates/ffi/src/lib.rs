//! C interface to `neq-core`.
//!
//! Objects cross the boundary as opaque handles created by the `neq_*_from_*`
//! functions and released with the matching `neq_*_free`. Every fallible call
//! returns a [`NeqStatus`]; on failure, [`neq_last_error`] describes the
//! problem for the calling thread. Panics never unwind into C.

use neq_core::cost;
use neq_core::qmat::{self, BipartiteDims, CMatrix};
use neq_core::quantum::ChoiChannel;
use neq_core::tasks::{self, Task};
use neq_core::Error;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

/// Result codes shared by all functions.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NeqStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    Infeasible = 3,
    NumericalFailure = 4,
    OutOfRange = 5,
    Panic = 6,
}

/// A task: performance operators, thermal context and input projector.
pub struct NeqTask(Task);

/// A channel given by its Choi operator.
pub struct NeqChannel(ChoiChannel);

/// Accuracy range and reverse entropy of a task.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct NeqExtremes {
    pub f_min: f64,
    pub f_max: f64,
    pub kappa: f64,
    pub c_min: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> NeqStatus {
    match e {
        Error::Infeasible(_) => NeqStatus::Infeasible,
        Error::NumericalFailure(_) | Error::ConstructionFailed(_) => NeqStatus::NumericalFailure,
        Error::OutOfRange(_) => NeqStatus::OutOfRange,
        _ => NeqStatus::InvalidInput,
    }
}

fn guard<F: FnOnce() -> Result<(), (NeqStatus, String)>>(f: F) -> NeqStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            NeqStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            NeqStatus::Panic
        }
    }
}

fn lift(e: Error) -> (NeqStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (NeqStatus, String) {
    (NeqStatus::NullPointer, format!("{what} is null"))
}

unsafe fn cstr<'a>(p: *const c_char, what: &str) -> Result<&'a str, (NeqStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (NeqStatus::InvalidInput, format!("{what} is not UTF-8")))
}

unsafe fn write<T>(out: *mut T, v: T, what: &str) -> Result<(), (NeqStatus, String)> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(v);
    Ok(())
}

unsafe fn task_ref<'a>(t: *const NeqTask) -> Result<&'a Task, (NeqStatus, String)> {
    t.as_ref().map(|t| &t.0).ok_or_else(|| null("task"))
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn neq_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn neq_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a task from a `builtin:` URI. `energies` may be null for
/// degenerate levels; otherwise it holds `n_energies` single-system levels.
///
/// # Safety
/// `uri` must be a NUL-terminated string, `energies` must point to
/// `n_energies` doubles when non-null, and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn neq_task_from_uri(
    uri: *const c_char,
    beta: f64,
    energies: *const f64,
    n_energies: usize,
    out: *mut *mut NeqTask,
) -> NeqStatus {
    guard(|| {
        let uri = cstr(uri, "uri")?;
        let levels = if energies.is_null() { None } else { Some(std::slice::from_raw_parts(energies, n_energies)) };
        let t = tasks::builtin_task(uri, beta, levels).map_err(lift)?;
        write(out, Box::into_raw(Box::new(NeqTask(t))), "out")
    })
}

/// Builds a task from its JSON description.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn neq_task_from_json(json: *const c_char, out: *mut *mut NeqTask) -> NeqStatus {
    guard(|| {
        let text = cstr(json, "json")?;
        let t: Task = serde_json::from_str(text).map_err(|e| (NeqStatus::InvalidInput, format!("task json: {e}")))?;
        t.validate().map_err(lift)?;
        write(out, Box::into_raw(Box::new(NeqTask(t))), "out")
    })
}

/// Releases a task. Null is ignored.
///
/// # Safety
/// `task` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn neq_task_free(task: *mut NeqTask) {
    if !task.is_null() {
        drop(Box::from_raw(task));
    }
}

/// Input and output dimensions of a task.
///
/// # Safety
/// `task` must be a live handle; `d_a` and `d_b` must be writable.
#[no_mangle]
pub unsafe extern "C" fn neq_task_dims(task: *const NeqTask, d_a: *mut usize, d_b: *mut usize) -> NeqStatus {
    guard(|| {
        let t = task_ref(task)?;
        write(d_a, t.dims.d_a, "d_a")?;
        write(d_b, t.dims.d_b, "d_b")
    })
}

/// Reverse entropy of the task in bits.
///
/// # Safety
/// `task` must be a live handle and `kappa` writable.
#[no_mangle]
pub unsafe extern "C" fn neq_reverse_entropy(task: *const NeqTask, kappa: *mut f64) -> NeqStatus {
    guard(|| {
        let r = cost::reverse_entropy(task_ref(task)?).map_err(lift)?;
        write(kappa, r.value_bits, "kappa")
    })
}

/// `F_min`, `F_max`, `κ` and `c_min` of the task.
///
/// # Safety
/// `task` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn neq_f_extremes(task: *const NeqTask, out: *mut NeqExtremes) -> NeqStatus {
    guard(|| {
        let e = cost::f_extremes(task_ref(task)?).map_err(lift)?;
        write(out, NeqExtremes { f_min: e.f_min, f_max: e.f_max, kappa: e.kappa, c_min: e.c_min }, "out")
    })
}

/// Minimum cost in bits of reaching accuracy `fidelity`. When `witness` is
/// non-null it receives a new handle to an optimal channel (or null when none
/// was produced).
///
/// # Safety
/// `task` must be a live handle, `cost_bits` writable, `witness` null or writable.
#[no_mangle]
pub unsafe extern "C" fn neq_cost_of_accuracy(
    task: *const NeqTask,
    fidelity: f64,
    cost_bits: *mut f64,
    witness: *mut *mut NeqChannel,
) -> NeqStatus {
    guard(|| {
        let r = cost::cost_of_accuracy(task_ref(task)?, fidelity).map_err(lift)?;
        write(cost_bits, r.value_bits, "cost_bits")?;
        if !witness.is_null() {
            let h = r.witness.map_or(ptr::null_mut(), |w| Box::into_raw(Box::new(NeqChannel(w))));
            witness.write(h);
        }
        Ok(())
    })
}

/// Maximum accuracy with at most `cost_bits` clean qubits; pass `+INFINITY`
/// for no budget.
///
/// # Safety
/// `task` must be a live handle and `fidelity` writable.
#[no_mangle]
pub unsafe extern "C" fn neq_accuracy_of_cost(task: *const NeqTask, cost_bits: f64, fidelity: *mut f64) -> NeqStatus {
    guard(|| {
        let budget = (cost_bits != f64::INFINITY).then_some(cost_bits);
        let r = cost::accuracy_of_cost(task_ref(task)?, budget).map_err(lift)?;
        write(fidelity, r.fidelity, "fidelity")
    })
}

/// Builds a channel from a row-major Choi operator on `A ⊗ B` given as real
/// and imaginary parts, each `(d_a d_b)^2` doubles. `im` may be null for a
/// real operator. The operator must be positive and trace preserving.
///
/// # Safety
/// `re` (and `im` when non-null) must point to `(d_a d_b)^2` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn neq_channel_from_choi(
    re: *const f64,
    im: *const f64,
    d_a: usize,
    d_b: usize,
    out: *mut *mut NeqChannel,
) -> NeqStatus {
    guard(|| {
        if re.is_null() {
            return Err(null("re"));
        }
        let n = d_a.checked_mul(d_b).filter(|&n| n > 0 && n <= 4096).ok_or((NeqStatus::InvalidInput, "bad dimensions".into()))?;
        let re = std::slice::from_raw_parts(re, n * n);
        let im = if im.is_null() { None } else { Some(std::slice::from_raw_parts(im, n * n)) };
        let m = CMatrix::from_fn(n, n, |i, j| qmat::c(re[i * n + j], im.map_or(0.0, |v| v[i * n + j])));
        let ch = ChoiChannel::new(m, BipartiteDims::new(d_a, d_b)).map_err(lift)?;
        write(out, Box::into_raw(Box::new(NeqChannel(ch))), "out")
    })
}

/// Releases a channel. Null is ignored.
///
/// # Safety
/// `channel` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn neq_channel_free(channel: *mut NeqChannel) {
    if !channel.is_null() {
        drop(Box::from_raw(channel));
    }
}

/// Copies the Choi operator into caller buffers of `len` doubles each
/// (`len` must be at least `(d_a d_b)^2`). `im` may be null.
///
/// # Safety
/// `channel` must be a live handle; `d_a`, `d_b` writable; `re`/`im` null or `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn neq_channel_choi(
    channel: *const NeqChannel,
    d_a: *mut usize,
    d_b: *mut usize,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> NeqStatus {
    guard(|| {
        let ch = &channel.as_ref().ok_or_else(|| null("channel"))?.0;
        write(d_a, ch.dims.d_a, "d_a")?;
        write(d_b, ch.dims.d_b, "d_b")?;
        let n = ch.dims.total();
        if re.is_null() && im.is_null() {
            return Ok(());
        }
        if len < n * n {
            return Err((NeqStatus::InvalidInput, format!("buffer holds {len} values, need {}", n * n)));
        }
        for i in 0..n {
            for j in 0..n {
                let z = ch.choi[(i, j)];
                if !re.is_null() {
                    re.add(i * n + j).write(z.re);
                }
                if !im.is_null() {
                    im.add(i * n + j).write(z.im);
                }
            }
        }
        Ok(())
    })
}

/// Cost in bits of implementing `channel` on the task's inputs, using the
/// task's thermal context and input projector.
///
/// # Safety
/// `channel` and `task` must be live handles and `cost_bits` writable.
#[no_mangle]
pub unsafe extern "C" fn neq_channel_cost(channel: *const NeqChannel, task: *const NeqTask, cost_bits: *mut f64) -> NeqStatus {
    guard(|| {
        let ch = &channel.as_ref().ok_or_else(|| null("channel"))?.0;
        let t = task_ref(task)?;
        let r = cost::channel_cost(ch, &t.input_projector, &t.ctx).map_err(lift)?;
        write(cost_bits, r.value_bits, "cost_bits")
    })
}

/// Worst-case accuracy of `channel` on the task.
///
/// # Safety
/// `channel` and `task` must be live handles and `fidelity` writable.
#[no_mangle]
pub unsafe extern "C" fn neq_channel_accuracy(channel: *const NeqChannel, task: *const NeqTask, fidelity: *mut f64) -> NeqStatus {
    guard(|| {
        let ch = &channel.as_ref().ok_or_else(|| null("channel"))?.0;
        let t = task_ref(task)?;
        if ch.dims != t.dims {
            return Err((NeqStatus::InvalidInput, "channel and task dimensions differ".into()));
        }
        write(fidelity, t.accuracy(&ch.choi), "fidelity")
    })
}
