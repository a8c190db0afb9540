//! C interface to the `slipfilm` solvers.
//!
//! Simulations live behind an opaque `SfSimulation` handle. Every fallible
//! function returns an `SfStatus`; on failure `sf_last_error_message` holds
//! the detail for the calling thread. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use slipfilm::constitutive::{pressure_pi, pressure_pi1, pressure_pi_prime, u_pot};
use slipfilm::diagnostics::{energy, NullSink};
use slipfilm::dynamics::{advance, step};
use slipfilm::experiments::CosineProfile;
use slipfilm::interface::{default_run_control, initial_state, parse_config, read_snapshot, write_snapshot, Snapshot};
use slipfilm::{Error, Grid, ModelKind, PhysParams, State, StepControl};

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SfStatus {
    Ok = 0,
    NullPointer = 1,
    Usage = 2,
    InvalidParameter = 3,
    Domain = 4,
    Positivity = 5,
    Singular = 6,
    Divergence = 7,
    NonConvergence = 8,
    Config = 9,
    Snapshot = 10,
    Io = 11,
    BufferTooSmall = 12,
    Panic = 13,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SfModel {
    StrongSlip = 0,
    ScaledStrongSlip = 1,
    FreeFilm = 2,
    Stokes = 3,
    NoCapillarity = 4,
    Regularized = 5,
    IntermediateSlip = 6,
    WeakSlip = 7,
}

impl From<SfModel> for ModelKind {
    fn from(m: SfModel) -> Self {
        match m {
            SfModel::StrongSlip => ModelKind::StrongSlip,
            SfModel::ScaledStrongSlip => ModelKind::ScaledStrongSlip,
            SfModel::FreeFilm => ModelKind::FreeFilm,
            SfModel::Stokes => ModelKind::Stokes,
            SfModel::NoCapillarity => ModelKind::NoCapillarity,
            SfModel::Regularized => ModelKind::Regularized,
            SfModel::IntermediateSlip => ModelKind::IntermediateSlip,
            SfModel::WeakSlip => ModelKind::WeakSlip,
        }
    }
}

impl From<ModelKind> for SfModel {
    fn from(m: ModelKind) -> Self {
        match m {
            ModelKind::StrongSlip => SfModel::StrongSlip,
            ModelKind::ScaledStrongSlip => SfModel::ScaledStrongSlip,
            ModelKind::FreeFilm => SfModel::FreeFilm,
            ModelKind::Stokes => SfModel::Stokes,
            ModelKind::NoCapillarity => SfModel::NoCapillarity,
            ModelKind::Regularized => SfModel::Regularized,
            ModelKind::IntermediateSlip => SfModel::IntermediateSlip,
            ModelKind::WeakSlip => SfModel::WeakSlip,
        }
    }
}

/// Physical parameters. `beta` may be `INFINITY`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SfParams {
    pub re: f64,
    pub beta: f64,
    pub sigma: f64,
    pub nu: f64,
    pub alpha: f64,
    pub b: f64,
    pub eps: f64,
}

impl From<SfParams> for PhysParams {
    fn from(p: SfParams) -> Self {
        PhysParams {
            re: p.re,
            beta: p.beta,
            sigma: p.sigma,
            nu: p.nu,
            alpha: p.alpha,
            b: p.b,
            eps: p.eps,
        }
    }
}

impl From<PhysParams> for SfParams {
    fn from(p: PhysParams) -> Self {
        SfParams {
            re: p.re,
            beta: p.beta,
            sigma: p.sigma,
            nu: p.nu,
            alpha: p.alpha,
            b: p.b,
            eps: p.eps,
        }
    }
}

/// Adaptive step control; `dt_min == dt == dt_max` gives fixed steps.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SfControl {
    pub dt: f64,
    pub dt_min: f64,
    pub dt_max: f64,
    pub cfl_factor: f64,
    pub energy_guard_tol: f64,
    pub h_floor: f64,
}

impl From<SfControl> for StepControl {
    fn from(c: SfControl) -> Self {
        StepControl {
            dt: c.dt,
            dt_min: c.dt_min,
            dt_max: c.dt_max,
            cfl_factor: c.cfl_factor,
            energy_guard_tol: c.energy_guard_tol,
            h_floor: c.h_floor,
        }
    }
}

impl From<StepControl> for SfControl {
    fn from(c: StepControl) -> Self {
        SfControl {
            dt: c.dt,
            dt_min: c.dt_min,
            dt_max: c.dt_max,
            cfl_factor: c.cfl_factor,
            energy_guard_tol: c.energy_guard_tol,
            h_floor: c.h_floor,
        }
    }
}

/// Opaque simulation handle.
pub struct SfSimulation {
    model: ModelKind,
    params: PhysParams,
    control: StepControl,
    state: State,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> SfStatus {
    match e {
        Error::Domain { .. } => SfStatus::Domain,
        Error::Usage(_) => SfStatus::Usage,
        Error::InvalidParameter { .. } => SfStatus::InvalidParameter,
        Error::Positivity { .. } => SfStatus::Positivity,
        Error::Singular { .. } => SfStatus::Singular,
        Error::Divergence { .. } => SfStatus::Divergence,
        Error::NonConvergence { .. } => SfStatus::NonConvergence,
        Error::Config { .. } => SfStatus::Config,
        Error::Snapshot { .. } => SfStatus::Snapshot,
        Error::Io { .. } => SfStatus::Io,
    }
}

enum Failure {
    Status(SfStatus, String),
    Solver(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Solver(e)
    }
}

fn null() -> Failure {
    Failure::Status(SfStatus::NullPointer, "null pointer argument".into())
}

/// Runs `f`, translating errors and panics into a status and the
/// thread's last-error message.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SfStatus::Ok,
        Ok(Err(Failure::Status(s, msg))) => {
            set_last_error(&msg);
            s
        }
        Ok(Err(Failure::Solver(e))) => {
            set_last_error(&format!("{}: {e}", e.code()));
            status_of(&e)
        }
        Err(_) => {
            set_last_error("internal panic");
            SfStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(null)
}

unsafe fn borrow_mut<'a, T>(p: *mut T) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(null)
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::Status(SfStatus::Usage, "string is not valid UTF-8".into()))
}

unsafe fn emit(out: *mut *mut SfSimulation, sim: SfSimulation) -> Result<(), Failure> {
    let out = borrow_mut(out)?;
    *out = Box::into_raw(Box::new(sim));
    Ok(())
}

/// Message of the last failed call on this thread; empty if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Documented default parameters.
///
/// # Safety
/// `out` must be null or point to writable memory for one `SfParams`.
#[no_mangle]
pub unsafe extern "C" fn sf_params_default(out: *mut SfParams) -> SfStatus {
    guard(|| {
        *borrow_mut(out)? = PhysParams::default().into();
        Ok(())
    })
}

/// Default step control of a run.
///
/// # Safety
/// `out` must be null or point to writable memory for one `SfControl`.
#[no_mangle]
pub unsafe extern "C" fn sf_control_default(out: *mut SfControl) -> SfStatus {
    guard(|| {
        *borrow_mut(out)? = default_run_control().into();
        Ok(())
    })
}

unsafe fn scalar(f: fn(f64, f64) -> slipfilm::Result<f64>, h: f64, alpha: f64, out: *mut f64) -> SfStatus {
    guard(|| {
        let out = borrow_mut(out)?;
        *out = f(h, alpha)?;
        Ok(())
    })
}

/// Disjoining pressure `1/h^3 - alpha/h^4`.
///
/// # Safety
/// `out` must be null or point to a writable `double`.
#[no_mangle]
pub unsafe extern "C" fn sf_pi(h: f64, alpha: f64, out: *mut f64) -> SfStatus {
    scalar(pressure_pi, h, alpha, out)
}

/// `d Pi / dh`.
///
/// # Safety
/// `out` must be null or point to a writable `double`.
#[no_mangle]
pub unsafe extern "C" fn sf_pi_prime(h: f64, alpha: f64, out: *mut f64) -> SfStatus {
    scalar(pressure_pi_prime, h, alpha, out)
}

/// Integrated pressure with `Pi_1' = h Pi'`.
///
/// # Safety
/// `out` must be null or point to a writable `double`.
#[no_mangle]
pub unsafe extern "C" fn sf_pi1(h: f64, alpha: f64, out: *mut f64) -> SfStatus {
    scalar(pressure_pi1, h, alpha, out)
}

/// Potential `U` with `U' = Pi`.
///
/// # Safety
/// `out` must be null or point to a writable `double`.
#[no_mangle]
pub unsafe extern "C" fn sf_potential(h: f64, alpha: f64, out: *mut f64) -> SfStatus {
    scalar(u_pot, h, alpha, out)
}

/// New simulation on `n` cells from `h = mean + amp cos(k pi x)` and
/// `u = u_amp sin(pi x)`, using the default step control.
///
/// # Safety
/// `params` must be null or point to a valid `SfParams`; `out` must be null
/// or point to writable storage for one handle pointer.
#[no_mangle]
pub unsafe extern "C" fn sf_simulation_new_cosine(
    model: SfModel,
    params: *const SfParams,
    n: usize,
    mean: f64,
    amp: f64,
    k: u32,
    u_amp: f64,
    out: *mut *mut SfSimulation,
) -> SfStatus {
    guard(|| {
        let params: PhysParams = (*borrow(params)?).into();
        let model = ModelKind::from(model);
        model.effective_params(&params)?;
        let state = CosineProfile { mean, amp, k, u_amp }.sample(Grid::new(n)?)?;
        emit(
            out,
            SfSimulation {
                model,
                params,
                control: default_run_control(),
                state,
            },
        )
    })
}

/// New simulation from configuration text (the format read by the CLI).
/// A `[study]` block is rejected.
///
/// # Safety
/// `config` must be null or a NUL-terminated string; `out` as for
/// [`sf_simulation_new_cosine`].
#[no_mangle]
pub unsafe extern "C" fn sf_simulation_from_config(config: *const c_char, out: *mut *mut SfSimulation) -> SfStatus {
    guard(|| {
        let config = parse_config(text(config)?)?;
        if config.study.is_some() {
            return Err(Error::Usage("a [study] block cannot drive a single simulation".into()).into());
        }
        let state = initial_state(&config)?;
        emit(
            out,
            SfSimulation {
                model: config.model,
                params: config.params,
                control: config.control,
                state,
            },
        )
    })
}

/// New simulation resuming a snapshot file.
///
/// # Safety
/// `path` must be null or a NUL-terminated string; `out` as for
/// [`sf_simulation_new_cosine`].
#[no_mangle]
pub unsafe extern "C" fn sf_simulation_load(path: *const c_char, out: *mut *mut SfSimulation) -> SfStatus {
    guard(|| {
        let snap = read_snapshot(&PathBuf::from(text(path)?))?;
        emit(
            out,
            SfSimulation {
                model: snap.model,
                params: snap.params,
                control: default_run_control(),
                state: snap.state,
            },
        )
    })
}

/// Writes the current state as a snapshot file.
///
/// # Safety
/// `sim` must be null or a live handle; `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn sf_simulation_save(sim: *const SfSimulation, path: *const c_char) -> SfStatus {
    guard(|| {
        let sim = borrow(sim)?;
        let snap = Snapshot {
            model: sim.model,
            params: sim.params,
            state: sim.state.clone(),
        };
        write_snapshot(&PathBuf::from(text(path)?), &snap)?;
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `sim` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sf_simulation_free(sim: *mut SfSimulation) {
    if !sim.is_null() {
        drop(Box::from_raw(sim));
    }
}

/// Replaces the step control used by [`sf_simulation_advance`].
///
/// # Safety
/// `sim` must be null or a live handle; `control` null or valid.
#[no_mangle]
pub unsafe extern "C" fn sf_simulation_set_control(sim: *mut SfSimulation, control: *const SfControl) -> SfStatus {
    guard(|| {
        let sim = borrow_mut(sim)?;
        let control: StepControl = (*borrow(control)?).into();
        control.validate()?;
        sim.control = control;
        Ok(())
    })
}

/// Advances adaptively to `t_end`. On a step-size collapse the handle keeps
/// the last accepted state; on any other failure it is left unchanged.
///
/// # Safety
/// `sim` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sf_simulation_advance(sim: *mut SfSimulation, t_end: f64) -> SfStatus {
    guard(|| {
        let sim = borrow_mut(sim)?;
        match advance(&sim.state, &sim.params, sim.model, t_end, &sim.control, &mut NullSink) {
            Ok(s) => {
                sim.state = s;
                Ok(())
            }
            Err(Error::NonConvergence {
                t,
                dt,
                dt_min,
                last_state,
            }) => {
                sim.state = (*last_state).clone();
                Err(Error::NonConvergence {
                    t,
                    dt,
                    dt_min,
                    last_state,
                }
                .into())
            }
            Err(e) => Err(e.into()),
        }
    })
}

/// One step of size `dt`, no adaptivity or energy guard.
///
/// # Safety
/// `sim` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sf_simulation_step(sim: *mut SfSimulation, dt: f64) -> SfStatus {
    guard(|| {
        let sim = borrow_mut(sim)?;
        sim.state = step(&sim.state, &sim.params, sim.model, dt, sim.control.h_floor)?;
        Ok(())
    })
}

/// Number of cells `n`; heights have `n` entries, velocities `n + 1`.
///
/// # Safety
/// `sim` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sf_simulation_cells(sim: *const SfSimulation) -> usize {
    sim.as_ref().map_or(0, |s| s.state.grid().n())
}

/// Current time, NaN for a null handle.
///
/// # Safety
/// `sim` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sf_simulation_time(sim: *const SfSimulation) -> f64 {
    sim.as_ref().map_or(f64::NAN, |s| s.state.t())
}

/// Mass `int h dx`, NaN for a null handle.
///
/// # Safety
/// `sim` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sf_simulation_mass(sim: *const SfSimulation) -> f64 {
    sim.as_ref().map_or(f64::NAN, |s| s.state.mass())
}

/// Total energy of the current state.
///
/// # Safety
/// `sim` must be null or a live handle; `out` null or a writable `double`.
#[no_mangle]
pub unsafe extern "C" fn sf_simulation_energy(sim: *const SfSimulation, out: *mut f64) -> SfStatus {
    guard(|| {
        let sim = borrow(sim)?;
        let p = sim.model.effective_params(&sim.params)?;
        *borrow_mut(out)? = energy(&sim.state, &p);
        Ok(())
    })
}

/// Model kind of the handle.
///
/// # Safety
/// `sim` must be null or a live handle; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn sf_simulation_model(sim: *const SfSimulation, out: *mut SfModel) -> SfStatus {
    guard(|| {
        *borrow_mut(out)? = borrow(sim)?.model.into();
        Ok(())
    })
}

unsafe fn copy_out(values: &[f64], buf: *mut f64, len: usize) -> Result<(), Failure> {
    if buf.is_null() {
        return Err(null());
    }
    if len < values.len() {
        return Err(Failure::Status(
            SfStatus::BufferTooSmall,
            format!("buffer holds {len} values, {} needed", values.len()),
        ));
    }
    ptr::copy_nonoverlapping(values.as_ptr(), buf, values.len());
    Ok(())
}

/// Copies the `n` cell heights into `buf`.
///
/// # Safety
/// `sim` must be null or a live handle; `buf` null or writable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn sf_simulation_height(sim: *const SfSimulation, buf: *mut f64, len: usize) -> SfStatus {
    guard(|| copy_out(borrow(sim)?.state.h().values(), buf, len))
}

/// Copies the `n + 1` node velocities into `buf`.
///
/// # Safety
/// `sim` must be null or a live handle; `buf` null or writable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn sf_simulation_velocity(sim: *const SfSimulation, buf: *mut f64, len: usize) -> SfStatus {
    guard(|| copy_out(borrow(sim)?.state.u().values(), buf, len))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_tags_round_trip() {
        for kind in ModelKind::ALL {
            assert_eq!(ModelKind::from(SfModel::from(kind)), kind);
        }
    }

    #[test]
    fn errors_set_the_thread_message() {
        let mut v = 0.0;
        let s = unsafe { sf_pi(-1.0, 0.1, &mut v) };
        assert_eq!(s, SfStatus::Domain);
        let msg = unsafe { CStr::from_ptr(sf_last_error_message()) }.to_str().unwrap();
        assert!(msg.starts_with("DOMAIN"), "{msg}");
    }
}
