//! C ABI for `pite-lab`.
//!
//! Objects cross the boundary as opaque handles created by `pite_*_new`-style
//! functions and released with the matching `*_free`. Every fallible entry point
//! returns a [`PiteStatus`]; on failure a description is available from
//! [`pite_last_error_message`] on the same thread. Panics never unwind into C:
//! they are reported as [`PiteStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use pite_lab::analysis;
use pite_lab::engine::{run_pite, GammaParams, InitialWeights, RunResult, ShiftPolicy};
use pite_lab::error::PiteError;
use pite_lab::hamiltonians::{build_heisenberg_chain, diagonalize_values, Spectrum};
use pite_lab::schedules::{constant_schedule, exponential_schedule, linear_schedule, Schedule};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PiteStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ResourceLimit = 3,
    Singularity = 4,
    Domain = 5,
    Numeric = 6,
    DegenerateTarget = 7,
    Underflow = 8,
    Embedding = 9,
    PostselectionImpossible = 10,
    Config = 11,
    Io = 12,
    Internal = 13,
    BufferTooSmall = 14,
    Panic = 15,
}

impl From<&PiteError> for PiteStatus {
    fn from(e: &PiteError) -> Self {
        match e {
            PiteError::InvalidArgument(_) => PiteStatus::InvalidArgument,
            PiteError::ResourceLimit { .. } => PiteStatus::ResourceLimit,
            PiteError::Singularity { .. } => PiteStatus::Singularity,
            PiteError::Domain(_) => PiteStatus::Domain,
            PiteError::Numeric(_) => PiteStatus::Numeric,
            PiteError::DegenerateTarget => PiteStatus::DegenerateTarget,
            PiteError::Underflow { .. } => PiteStatus::Underflow,
            PiteError::Embedding { .. } => PiteStatus::Embedding,
            PiteError::PostselectionImpossible { .. } => PiteStatus::PostselectionImpossible,
            PiteError::Config { .. } => PiteStatus::Config,
            PiteError::Io { .. } => PiteStatus::Io,
            _ => PiteStatus::Internal,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PiteScheduleKind {
    Constant = 0,
    Linear = 1,
    Exponential = 2,
}

/// Ascending eigenvalues.
pub struct PiteSpectrum(Spectrum);

/// Imaginary-time step sequence.
pub struct PiteSchedule(Schedule);

/// Outcome of one evolution run.
pub struct PiteRunResult(RunResult);

/// Scalar part of a run result.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct PiteRunSummary {
    pub ln_error_tilde: f64,
    pub error_tilde: f64,
    pub error: f64,
    pub error_direct: f64,
    pub total_success: f64,
    pub ln_total_success: f64,
    pub fidelity: f64,
    pub cumulative_tau: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(PiteStatus, String);

impl From<PiteError> for Failure {
    fn from(e: PiteError) -> Self {
        Failure(PiteStatus::from(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(PiteStatus::NullPointer, format!("`{what}` is null"))
}

/// Runs `f`, converting errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> PiteStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            PiteStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            PiteStatus::Panic
        }
    }
}

unsafe fn slice<'a>(data: *const f64, len: usize, what: &str) -> Result<&'a [f64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if data.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(data, len))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn copy_into(src: &[f64], buf: *mut f64, len: usize) -> Result<(), Failure> {
    if len < src.len() {
        return Err(Failure(
            PiteStatus::BufferTooSmall,
            format!("buffer holds {len} values, {} needed", src.len()),
        ));
    }
    if src.is_empty() {
        return Ok(());
    }
    if buf.is_null() {
        return Err(null("buf"));
    }
    ptr::copy_nonoverlapping(src.as_ptr(), buf, src.len());
    Ok(())
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

/// Message of the last failed call on this thread, or NULL after a success.
/// The pointer stays valid until the next call into this library on the same
/// thread.
#[no_mangle]
pub extern "C" fn pite_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pite_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Spectrum from `len` nondecreasing eigenvalues.
///
/// # Safety
/// `values` must point to `len` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pite_spectrum_from_eigenvalues(
    values: *const f64,
    len: usize,
    out: *mut *mut PiteSpectrum,
) -> PiteStatus {
    guard(|| {
        let v = slice(values, len, "values")?.to_vec();
        let spec = Spectrum::from_eigenvalues(v)?;
        write_out(out, Box::into_raw(Box::new(PiteSpectrum(spec))), "out")
    })
}

/// Eigenvalues of the periodic Heisenberg chain with `sites` spins.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pite_spectrum_heisenberg(
    sites: usize,
    coupling: f64,
    field: f64,
    out: *mut *mut PiteSpectrum,
) -> PiteStatus {
    guard(|| {
        let h = build_heisenberg_chain(sites, coupling, field)?;
        let spec = diagonalize_values(&h)?;
        write_out(out, Box::into_raw(Box::new(PiteSpectrum(spec))), "out")
    })
}

/// Number of eigenvalues; 0 for a null handle.
///
/// # Safety
/// `spec` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pite_spectrum_len(spec: *const PiteSpectrum) -> usize {
    spec.as_ref().map_or(0, |s| s.0.len())
}

/// Copies the eigenvalues into `buf` (capacity `len`).
///
/// # Safety
/// `spec` must be a live handle and `buf` must hold `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn pite_spectrum_eigenvalues(
    spec: *const PiteSpectrum,
    buf: *mut f64,
    len: usize,
) -> PiteStatus {
    guard(|| copy_into(handle(spec, "spec")?.0.eigenvalues(), buf, len))
}

/// Smallest nonzero excitation energy.
///
/// # Safety
/// `spec` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pite_spectrum_min_gap(
    spec: *const PiteSpectrum,
    out: *mut f64,
) -> PiteStatus {
    guard(|| {
        let gap = handle(spec, "spec")?
            .0
            .min_gap()
            .ok_or_else(|| Failure(PiteStatus::Domain, "spectrum is fully degenerate".into()))?;
        write_out(out, gap, "out")
    })
}

/// # Safety
/// `spec` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pite_spectrum_free(spec: *mut PiteSpectrum) {
    if !spec.is_null() {
        drop(Box::from_raw(spec));
    }
}

/// Builds a schedule of `steps` imaginary-time steps. `kappa_bar` is only read
/// for exponential schedules.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pite_schedule_new(
    kind: PiteScheduleKind,
    dtau_min: f64,
    dtau_max: f64,
    steps: usize,
    kappa_bar: f64,
    out: *mut *mut PiteSchedule,
) -> PiteStatus {
    guard(|| {
        let s = match kind {
            PiteScheduleKind::Constant => constant_schedule(dtau_max, steps)?,
            PiteScheduleKind::Linear => linear_schedule(dtau_min, dtau_max, steps)?,
            PiteScheduleKind::Exponential => {
                exponential_schedule(dtau_min, dtau_max, steps, kappa_bar)?
            }
        };
        write_out(out, Box::into_raw(Box::new(PiteSchedule(s))), "out")
    })
}

/// Number of steps; 0 for a null handle.
///
/// # Safety
/// `sched` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pite_schedule_len(sched: *const PiteSchedule) -> usize {
    sched.as_ref().map_or(0, |s| s.0.len())
}

/// Copies the step sizes into `buf` (capacity `len`).
///
/// # Safety
/// `sched` must be a live handle and `buf` must hold `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn pite_schedule_steps(
    sched: *const PiteSchedule,
    buf: *mut f64,
    len: usize,
) -> PiteStatus {
    guard(|| copy_into(handle(sched, "sched")?.0.steps(), buf, len))
}

/// Closed-form total imaginary time.
///
/// # Safety
/// `sched` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pite_schedule_cumulative(
    sched: *const PiteSchedule,
    out: *mut f64,
) -> PiteStatus {
    guard(|| write_out(out, handle(sched, "sched")?.0.cumulative(), "out"))
}

/// # Safety
/// `sched` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pite_schedule_free(sched: *mut PiteSchedule) {
    if !sched.is_null() {
        drop(Box::from_raw(sched));
    }
}

/// Runs the first-order evolution with the energy shift anchored at the
/// spectrum's ground energy. `weights` may be NULL for a uniform start;
/// otherwise it holds one nonnegative weight per eigenvalue summing to 1.
///
/// # Safety
/// Handles must be live; `weights` must be NULL or hold `weights_len` doubles;
/// `out` must be writable.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn pite_run(
    spec: *const PiteSpectrum,
    weights: *const f64,
    weights_len: usize,
    sched: *const PiteSchedule,
    gamma: f64,
    alpha: f64,
    branch_n: i64,
    out: *mut *mut PiteRunResult,
) -> PiteStatus {
    guard(|| {
        let spec = &handle(spec, "spec")?.0;
        let sched = &handle(sched, "sched")?.0;
        let w = if weights.is_null() {
            InitialWeights::uniform(spec.len())?
        } else {
            InitialWeights::new(slice(weights, weights_len, "weights")?.to_vec())?
        };
        let gp = GammaParams::new(gamma)?;
        let policy = ShiftPolicy::new(alpha, branch_n, spec.ground_energy())?;
        let r = run_pite(spec, &w, sched, &gp, &policy)?;
        write_out(out, Box::into_raw(Box::new(PiteRunResult(r))), "out")
    })
}

/// # Safety
/// `result` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pite_run_result_summary(
    result: *const PiteRunResult,
    out: *mut PiteRunSummary,
) -> PiteStatus {
    guard(|| {
        let r = &handle(result, "result")?.0;
        let s = PiteRunSummary {
            ln_error_tilde: r.ln_error_tilde,
            error_tilde: r.error_tilde,
            error: r.error,
            error_direct: r.error_direct,
            total_success: r.total_success,
            ln_total_success: r.ln_total_success,
            fidelity: r.fidelity,
            cumulative_tau: r.cumulative_tau,
        };
        write_out(out, s, "out")
    })
}

/// Number of eigen-weights (equal to the spectrum length); 0 for null.
///
/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pite_run_result_weights_len(result: *const PiteRunResult) -> usize {
    result.as_ref().map_or(0, |r| r.0.final_weights.len())
}

/// Number of steps (entries of the per-step success array); 0 for null.
///
/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pite_run_result_steps_len(result: *const PiteRunResult) -> usize {
    result.as_ref().map_or(0, |r| r.0.step_success.len())
}

/// Copies the normalized final eigen-weights.
///
/// # Safety
/// `result` must be a live handle and `buf` must hold `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn pite_run_result_final_weights(
    result: *const PiteRunResult,
    buf: *mut f64,
    len: usize,
) -> PiteStatus {
    guard(|| copy_into(&handle(result, "result")?.0.final_weights, buf, len))
}

/// Copies the per-step success probabilities `p_k`.
///
/// # Safety
/// `result` must be a live handle and `buf` must hold `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn pite_run_result_step_success(
    result: *const PiteRunResult,
    buf: *mut f64,
    len: usize,
) -> PiteStatus {
    guard(|| copy_into(&handle(result, "result")?.0.step_success, buf, len))
}

/// # Safety
/// `result` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pite_run_result_free(result: *mut PiteRunResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// Sine integral `Si(x)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pite_si(x: f64, out: *mut f64) -> PiteStatus {
    guard(|| {
        if x.is_nan() {
            return Err(Failure(PiteStatus::Domain, "x is NaN".into()));
        }
        write_out(out, analysis::si(x), "out")
    })
}

/// Cosine integral `Ci(x)`, `x > 0`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pite_ci(x: f64, out: *mut f64) -> PiteStatus {
    guard(|| write_out(out, analysis::ci(x)?, "out"))
}

/// Entire cosine integral `Cin(x) = ∫₀ˣ (1 - cos t)/t dt`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pite_cin(x: f64, out: *mut f64) -> PiteStatus {
    guard(|| {
        if x.is_nan() {
            return Err(Failure(PiteStatus::Domain, "x is NaN".into()));
        }
        write_out(out, analysis::cin(x), "out")
    })
}
