//! C interface to `schatten-core`.
//!
//! Handles are opaque and owned by the caller, who releases them with the
//! matching `*_free` function. Every entry point returns a [`SchattenStatus`];
//! on failure, [`schatten_last_error`] describes the error on the calling
//! thread. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use schatten_core::config::Config;
use schatten_core::dqc1::{estimate_schatten_trace, PowerKind, TraceFMode, TraceFOptions};
use schatten_core::error::Error;
use schatten_core::hamiltonian::{assemble_dense, LogLocalHamiltonian, SparseHermitian};
use schatten_core::oracle::{sparse_spectrum, spectrum};
use schatten_core::report::EstimateReport;
use schatten_core::walk::{estimate_trace_power, WalkMode};

/// Result code of every call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SchattenStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    Io = 3,
    Parse = 4,
    NotHermitian = 5,
    OutOfRange = 6,
    WorkBudgetExceeded = 7,
    Numerical = 8,
    Panic = 9,
}

impl From<&Error> for SchattenStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Io { .. } => Self::Io,
            Error::Parse { .. } | Error::Json(_) | Error::Config(_) => Self::Parse,
            Error::NotHermitian { .. } | Error::NotRealSymmetric => Self::NotHermitian,
            Error::DimensionTooLarge { .. }
            | Error::SpectrumOutsideInterval { .. }
            | Error::SpectrumOutOfRange { .. }
            | Error::FunctionOutOfRange { .. } => Self::OutOfRange,
            Error::WorkBudgetExceeded { .. } => Self::WorkBudgetExceeded,
            Error::EigensolverFailure(_) | Error::ConditionInfinite => Self::Numerical,
            Error::InvalidInput(_)
            | Error::BudgetInfeasible(_)
            | Error::InvalidModel(_)
            | Error::InfeasibleParameters(_) => Self::InvalidInput,
        }
    }
}

/// Readout of the one-clean-qubit estimator.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SchattenReadout {
    ExactSubmatrix = 0,
    Sampled = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SchattenWalkMode {
    Literal = 0,
    Corrected = 1,
    Exhaustive = 2,
}

impl From<SchattenWalkMode> for WalkMode {
    fn from(m: SchattenWalkMode) -> Self {
        match m {
            SchattenWalkMode::Literal => WalkMode::Literal,
            SchattenWalkMode::Corrected => WalkMode::Corrected,
            SchattenWalkMode::Exhaustive => WalkMode::Exhaustive,
        }
    }
}

/// An estimate and the additive error it claims.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SchattenEstimate {
    pub value: f64,
    pub claimed_bound: f64,
    pub wallclock_ms: f64,
}

impl From<&EstimateReport> for SchattenEstimate {
    fn from(r: &EstimateReport) -> Self {
        Self {
            value: r.value,
            claimed_bound: r.claimed_bound,
            wallclock_ms: r.wallclock_ms,
        }
    }
}

/// Log-local Hamiltonian on at most a few qubits.
pub struct SchattenHamiltonian(LogLocalHamiltonian);

/// Sparse Hermitian matrix, typically a graph adjacency matrix.
pub struct SchattenSparse(SparseHermitian);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

enum Failure {
    Null(&'static str),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

/// Runs `body`, recording any error or panic for [`schatten_last_error`].
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> SchattenStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => SchattenStatus::Ok,
        Ok(Err(Failure::Null(what))) => {
            set_last_error(format!("null pointer passed as {what}"));
            SchattenStatus::NullPointer
        }
        Ok(Err(Failure::Core(e))) => {
            set_last_error(e.to_string());
            SchattenStatus::from(&e)
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {msg}"));
            SchattenStatus::Panic
        }
    }
}

unsafe fn path_arg(path: *const c_char) -> Result<PathBuf, Failure> {
    if path.is_null() {
        return Err(Failure::Null("path"));
    }
    let s = unsafe { CStr::from_ptr(path) }
        .to_str()
        .map_err(|_| Error::InvalidInput("path is not valid UTF-8".into()))?;
    Ok(PathBuf::from(s))
}

unsafe fn borrow<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    unsafe { p.as_ref() }.ok_or(Failure::Null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &'static str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null(what));
    }
    unsafe { out.write(value) };
    Ok(())
}

/// Message for the last failed call on this thread, or NULL after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn schatten_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Loads a Hamiltonian from its JSON description.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn schatten_hamiltonian_load(
    path: *const c_char,
    out: *mut *mut SchattenHamiltonian,
) -> SchattenStatus {
    guard(|| {
        let path = unsafe { path_arg(path) }?;
        let h = LogLocalHamiltonian::load(path, &Config::default())?;
        unsafe { write_out(out, Box::into_raw(Box::new(SchattenHamiltonian(h))), "out") }
    })
}

/// # Safety
/// `h` must come from [`schatten_hamiltonian_load`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn schatten_hamiltonian_free(h: *mut SchattenHamiltonian) {
    if !h.is_null() {
        drop(unsafe { Box::from_raw(h) });
    }
}

/// # Safety
/// `h` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn schatten_hamiltonian_qubits(h: *const SchattenHamiltonian) -> usize {
    unsafe { h.as_ref() }.map_or(0, |h| h.0.n())
}

/// Loads a sparse matrix in the text edge-list format.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn schatten_sparse_load(path: *const c_char, out: *mut *mut SchattenSparse) -> SchattenStatus {
    guard(|| {
        let path = unsafe { path_arg(path) }?;
        let a = SparseHermitian::load(path)?;
        unsafe { write_out(out, Box::into_raw(Box::new(SchattenSparse(a))), "out") }
    })
}

/// # Safety
/// `a` must come from [`schatten_sparse_load`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn schatten_sparse_free(a: *mut SchattenSparse) {
    if !a.is_null() {
        drop(unsafe { Box::from_raw(a) });
    }
}

/// # Safety
/// `a` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn schatten_sparse_dim(a: *const SchattenSparse) -> usize {
    unsafe { a.as_ref() }.map_or(0, |a| a.0.dim())
}

/// One-clean-qubit estimate of `Tr|A|^p / 2^n` (or `Tr A^p / 2^n` when
/// `signed` is nonzero).
///
/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn schatten_dqc1_schatten(
    h: *const SchattenHamiltonian,
    p: u32,
    eps: f64,
    signed: bool,
    readout: SchattenReadout,
    fail_prob: f64,
    seed: u64,
    out: *mut SchattenEstimate,
) -> SchattenStatus {
    guard(|| {
        let h = unsafe { borrow(h, "hamiltonian") }?;
        let options = TraceFOptions {
            mode: match readout {
                SchattenReadout::ExactSubmatrix => TraceFMode::ExactSubmatrix,
                SchattenReadout::Sampled => TraceFMode::Sampled { fail_prob },
            },
            seed,
            ..TraceFOptions::default()
        };
        let kind = if signed { PowerKind::Signed } else { PowerKind::Abs };
        let report = estimate_schatten_trace(&h.0, p, eps, kind, &options)?;
        unsafe { write_out(out, SchattenEstimate::from(&report), "out") }
    })
}

/// Random-walk estimate of `Tr(A^p) / N`.
///
/// # Safety
/// `a` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn schatten_walk_trace(
    a: *const SchattenSparse,
    p: u32,
    eps: f64,
    eps_prime: f64,
    fail_prob: f64,
    mode: SchattenWalkMode,
    seed: u64,
    out: *mut SchattenEstimate,
) -> SchattenStatus {
    guard(|| {
        let a = unsafe { borrow(a, "matrix") }?;
        let report = estimate_trace_power(&a.0, p, eps, eps_prime, fail_prob, mode.into(), seed)?;
        unsafe { write_out(out, SchattenEstimate::from(&report), "out") }
    })
}

/// Exact `Tr|A|^p / 2^n` by diagonalisation.
///
/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn schatten_hamiltonian_abs_power_mean(
    h: *const SchattenHamiltonian,
    p: f64,
    out: *mut f64,
) -> SchattenStatus {
    guard(|| {
        let h = unsafe { borrow(h, "hamiltonian") }?;
        let value = spectrum(&assemble_dense(&h.0)?)?.abs_power_mean(p);
        unsafe { write_out(out, value, "out") }
    })
}

/// Exact `Tr|A|^p / N` by diagonalisation; `p = 1` gives the energy per vertex.
///
/// # Safety
/// `a` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn schatten_sparse_abs_power_mean(
    a: *const SchattenSparse,
    p: f64,
    out: *mut f64,
) -> SchattenStatus {
    guard(|| {
        let a = unsafe { borrow(a, "matrix") }?;
        let value = sparse_spectrum(&a.0, &Config::default())?.abs_power_mean(p);
        unsafe { write_out(out, value, "out") }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_mapping() {
        assert_eq!(SchattenStatus::from(&Error::InvalidInput("x".into())), SchattenStatus::InvalidInput);
        assert_eq!(
            SchattenStatus::from(&Error::WorkBudgetExceeded { work: 2, budget: 1 }),
            SchattenStatus::WorkBudgetExceeded
        );
    }

    #[test]
    fn panics_are_caught() {
        let status = guard(|| panic!("boom"));
        assert_eq!(status, SchattenStatus::Panic);
        let msg = unsafe { CStr::from_ptr(schatten_last_error()) }.to_str().unwrap();
        assert!(msg.contains("boom"));
    }

    #[test]
    fn success_clears_error() {
        guard(|| Err(Failure::Null("x")));
        assert!(!schatten_last_error().is_null());
        guard(|| Ok(()));
        assert!(schatten_last_error().is_null());
    }
}
