//! C ABI for `qcorr`.
//!
//! States and trajectories are opaque heap handles owned by the caller and
//! released with the matching `*_free` function. Every entry point returns a
//! [`QcorrStatus`]; on failure a description is available from
//! [`qcorr_last_error_message`] on the same thread. Panics never cross the
//! boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;

use num_complex::Complex64;
use qcorr::dissipative::{
    evolve_sampled, suggest_dt, BathSpec, Coupling, DissipativeParams, Trajectory,
};
use qcorr::qnd::{apply_qnd_channel, default_kernel, Regime};
use qcorr::state::{bell, product, read_state_file, werner};
use qcorr::{
    ComplexMatrix, CorrelationReport, DensityMatrix, DiscordMode, Label, MeasureOptions,
    QcorrError, Subsystem,
};

/// Result code of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QcorrStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidState = 3,
    IntegratorFailure = 4,
    Parse = 5,
    Io = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QcorrLabel {
    Entangled = 0,
    NonclassicalSeparable = 1,
    Classical = 2,
}

impl From<Label> for QcorrLabel {
    fn from(l: Label) -> Self {
        match l {
            Label::Entangled => QcorrLabel::Entangled,
            Label::NonclassicalSeparable => QcorrLabel::NonclassicalSeparable,
            Label::Classical => QcorrLabel::Classical,
        }
    }
}

/// Opaque two-qubit density matrix.
pub struct QcorrState(DensityMatrix);

/// Opaque sampled trajectory.
pub struct QcorrTrajectory(Trajectory);

/// Every correlation measure of one state.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QcorrReport {
    pub concurrence: f64,
    pub eof: f64,
    pub bell_m: f64,
    pub n: f64,
    pub f_max: f64,
    pub discord_fixed: f64,
    pub discord_opt: f64,
    pub classical_corr: f64,
    pub mutual_info: f64,
    pub label: QcorrLabel,
}

impl From<CorrelationReport> for QcorrReport {
    fn from(r: CorrelationReport) -> Self {
        Self {
            concurrence: r.concurrence,
            eof: r.eof,
            bell_m: r.bell_m,
            n: r.n,
            f_max: r.f_max,
            discord_fixed: r.discord_fixed,
            discord_opt: r.discord_opt,
            classical_corr: r.classical_corr,
            mutual_info: r.mutual_info,
            label: r.label.into(),
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QcorrMeasureOptions {
    /// Qubit measured for discord, 1 or 2.
    pub measured: u32,
    pub eps_c: f64,
    pub eps_d: f64,
    /// Fixed-basis discord for `classical_corr` when false.
    pub optimized_discord: bool,
}

impl Default for QcorrMeasureOptions {
    fn default() -> Self {
        let o = MeasureOptions::default();
        Self {
            measured: o.measured.index() as u32,
            eps_c: o.eps_c,
            eps_d: o.eps_d,
            optimized_discord: o.mode == DiscordMode::Optimized,
        }
    }
}

/// Dissipative model parameters. `independent` ignores `separation` and
/// `alignment` and switches off the collective terms.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QcorrDissipativeParams {
    pub gamma: f64,
    pub detuning: f64,
    /// Dimensionless separation `k0·r12`.
    pub separation: f64,
    pub alignment: f64,
    pub independent: bool,
    pub temperature: f64,
    pub squeezing: f64,
    pub squeezing_phase: f64,
    pub omega0: f64,
}

impl Default for QcorrDissipativeParams {
    fn default() -> Self {
        let p = DissipativeParams::default();
        let (separation, alignment) = match p.coupling {
            Coupling::Geometric { x, alignment } => (x, alignment),
            Coupling::Explicit { .. } => (1.0, 0.0),
        };
        Self {
            gamma: p.gamma,
            detuning: p.detuning,
            separation,
            alignment,
            independent: false,
            temperature: p.bath.temperature,
            squeezing: p.bath.squeezing,
            squeezing_phase: p.bath.squeezing_phase,
            omega0: p.bath.omega0,
        }
    }
}

impl QcorrDissipativeParams {
    fn bath(&self) -> BathSpec {
        BathSpec {
            temperature: self.temperature,
            squeezing: self.squeezing,
            squeezing_phase: self.squeezing_phase,
            omega0: self.omega0,
        }
    }

    fn to_params(self) -> DissipativeParams {
        DissipativeParams {
            gamma: self.gamma,
            detuning: self.detuning,
            coupling: if self.independent {
                Coupling::INDEPENDENT
            } else {
                Coupling::Geometric {
                    x: self.separation,
                    alignment: self.alignment,
                }
            },
            bath: self.bath(),
        }
    }
}

/// QND dephasing channel parameters.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QcorrQndParams {
    pub gamma0: f64,
    pub collective: bool,
    pub temperature: f64,
    pub squeezing: f64,
    pub squeezing_phase: f64,
    pub omega0: f64,
}

impl Default for QcorrQndParams {
    fn default() -> Self {
        let b = BathSpec::default();
        Self {
            gamma0: 1.0,
            collective: false,
            temperature: b.temperature,
            squeezing: b.squeezing,
            squeezing_phase: b.squeezing_phase,
            omega0: b.omega0,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &QcorrError) -> QcorrStatus {
    match e {
        QcorrError::NotHermitian { .. }
        | QcorrError::NotPsd { .. }
        | QcorrError::InvalidState(_)
        | QcorrError::DimensionMismatch { .. } => QcorrStatus::InvalidState,
        QcorrError::StepSizeTooLarge { .. } => QcorrStatus::IntegratorFailure,
        QcorrError::Parse { .. } => QcorrStatus::Parse,
        QcorrError::Io(_) => QcorrStatus::Io,
        QcorrError::AtGridPoint { source, .. } => status_of(source),
        _ => QcorrStatus::InvalidArgument,
    }
}

fn fail(e: QcorrError) -> QcorrStatus {
    set_last_error(&e.to_string());
    status_of(&e)
}

fn invalid(msg: &str) -> QcorrStatus {
    set_last_error(msg);
    QcorrStatus::InvalidArgument
}

fn null(name: &str) -> QcorrStatus {
    set_last_error(&format!("`{name}` is null"));
    QcorrStatus::NullPointer
}

fn guard(f: impl FnOnce() -> Result<(), QcorrStatus>) -> QcorrStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QcorrStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_last_error("internal panic");
            QcorrStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, name: &str) -> Result<&'a T, QcorrStatus> {
    p.as_ref().ok_or_else(|| null(name))
}

unsafe fn write_out<T>(out: *mut T, value: T) {
    out.write(value);
}

unsafe fn put_state(out: *mut *mut QcorrState, rho: DensityMatrix) {
    out.write(Box::into_raw(Box::new(QcorrState(rho))));
}

fn check_out<T>(out: *mut T) -> Result<(), QcorrStatus> {
    if out.is_null() {
        Err(null("out"))
    } else {
        Ok(())
    }
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn qcorr_status_message(status: QcorrStatus) -> *const c_char {
    let s: &'static CStr = match status {
        QcorrStatus::Ok => c"ok",
        QcorrStatus::NullPointer => c"null pointer argument",
        QcorrStatus::InvalidArgument => c"invalid argument",
        QcorrStatus::InvalidState => c"not a valid two-qubit density matrix",
        QcorrStatus::IntegratorFailure => c"integrator step size failed the halving test",
        QcorrStatus::Parse => c"could not parse input",
        QcorrStatus::Io => c"input/output error",
        QcorrStatus::Panic => c"internal panic",
    };
    s.as_ptr()
}

/// Message of the most recent failure on this thread. Valid until the next
/// failing call on the same thread; empty if there was none.
#[no_mangle]
pub extern "C" fn qcorr_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds a state from 16 row-major entries given as real and imaginary parts.
///
/// # Safety
/// `re` and `im` must point to 16 readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qcorr_state_from_entries(
    re: *const f64,
    im: *const f64,
    out: *mut *mut QcorrState,
) -> QcorrStatus {
    guard(|| {
        check_out(out)?;
        if re.is_null() || im.is_null() {
            return Err(null("re/im"));
        }
        let (re, im) = (
            std::slice::from_raw_parts(re, 16),
            std::slice::from_raw_parts(im, 16),
        );
        let data = re
            .iter()
            .zip(im)
            .map(|(&a, &b)| Complex64::new(a, b))
            .collect();
        let rho = ComplexMatrix::from_row_major(4, data)
            .and_then(DensityMatrix::new)
            .map_err(fail)?;
        put_state(out, rho);
        Ok(())
    })
}

/// Bell state `k` in 1..=4 (Φ⁺, Φ⁻, Ψ⁺, Ψ⁻).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qcorr_state_bell(k: u32, out: *mut *mut QcorrState) -> QcorrStatus {
    guard(|| {
        check_out(out)?;
        put_state(out, bell(k as usize).map_err(fail)?);
        Ok(())
    })
}

/// Werner state `p|Ψ⁻⟩⟨Ψ⁻| + (1−p)I/4`, `p` in `[0, 1]`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qcorr_state_werner(p: f64, out: *mut *mut QcorrState) -> QcorrStatus {
    guard(|| {
        check_out(out)?;
        put_state(out, werner(p).map_err(fail)?);
        Ok(())
    })
}

/// Product of two single-qubit states given by Bloch vectors.
///
/// # Safety
/// `a` and `b` must point to 3 readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qcorr_state_product(
    a: *const f64,
    b: *const f64,
    out: *mut *mut QcorrState,
) -> QcorrStatus {
    guard(|| {
        check_out(out)?;
        if a.is_null() || b.is_null() {
            return Err(null("a/b"));
        }
        let a: [f64; 3] = std::slice::from_raw_parts(a, 3).try_into().unwrap();
        let b: [f64; 3] = std::slice::from_raw_parts(b, 3).try_into().unwrap();
        put_state(out, product(a, b).map_err(fail)?);
        Ok(())
    })
}

/// Reads a state file: the dimension, then one `re im` pair per line in
/// row-major order.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qcorr_state_read_file(
    path: *const c_char,
    out: *mut *mut QcorrState,
) -> QcorrStatus {
    guard(|| {
        check_out(out)?;
        if path.is_null() {
            return Err(null("path"));
        }
        let path = CStr::from_ptr(path)
            .to_str()
            .map_err(|_| invalid("path is not UTF-8"))?;
        put_state(out, read_state_file(PathBuf::from(path)).map_err(fail)?);
        Ok(())
    })
}

/// Copies the 16 row-major entries into `re` and `im`.
///
/// # Safety
/// `state` must be a live handle; `re` and `im` must have room for 16 doubles.
#[no_mangle]
pub unsafe extern "C" fn qcorr_state_entries(
    state: *const QcorrState,
    re: *mut f64,
    im: *mut f64,
) -> QcorrStatus {
    guard(|| {
        let s = deref(state, "state")?;
        if re.is_null() || im.is_null() {
            return Err(null("re/im"));
        }
        for (k, z) in s.0.matrix().as_slice().iter().enumerate() {
            re.add(k).write(z.re);
            im.add(k).write(z.im);
        }
        Ok(())
    })
}

/// Releases a state. Null is ignored.
///
/// # Safety
/// `state` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qcorr_state_free(state: *mut QcorrState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qcorr_measure_options_default(
    out: *mut QcorrMeasureOptions,
) -> QcorrStatus {
    guard(|| {
        check_out(out)?;
        write_out(out, QcorrMeasureOptions::default());
        Ok(())
    })
}

/// Computes every correlation measure. `opts` may be null for the defaults.
///
/// # Safety
/// `state` must be a live handle, `opts` null or readable, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qcorr_measure(
    state: *const QcorrState,
    opts: *const QcorrMeasureOptions,
    out: *mut QcorrReport,
) -> QcorrStatus {
    guard(|| {
        let s = deref(state, "state")?;
        check_out(out)?;
        let o = opts.as_ref().copied().unwrap_or_default();
        let measured = Subsystem::from_index(o.measured as usize)
            .ok_or_else(|| invalid("measured must be 1 or 2"))?;
        let opts = MeasureOptions {
            measured,
            eps_c: o.eps_c,
            eps_d: o.eps_d,
            mode: if o.optimized_discord {
                DiscordMode::Optimized
            } else {
                DiscordMode::FixedBasis
            },
        };
        write_out(out, CorrelationReport::compute(&s.0, &opts).into());
        Ok(())
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qcorr_dissipative_params_default(
    out: *mut QcorrDissipativeParams,
) -> QcorrStatus {
    guard(|| {
        check_out(out)?;
        write_out(out, QcorrDissipativeParams::default());
        Ok(())
    })
}

/// Evolves `state` under the dissipative master equation and samples
/// `samples` equally spaced times in `[0, t_end]`. A non-positive `dt`
/// picks the step automatically.
///
/// # Safety
/// `state` must be a live handle, `params` readable, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qcorr_evolve(
    state: *const QcorrState,
    params: *const QcorrDissipativeParams,
    t_end: f64,
    samples: usize,
    dt: f64,
    out: *mut *mut QcorrTrajectory,
) -> QcorrStatus {
    guard(|| {
        let s = deref(state, "state")?;
        let p = deref(params, "params")?.to_params();
        check_out(out)?;
        if samples < 2 {
            return Err(invalid("samples must be at least 2"));
        }
        if !(t_end > 0.0 && t_end.is_finite()) {
            return Err(invalid("t_end must be positive and finite"));
        }
        let dt = if dt > 0.0 {
            dt
        } else {
            suggest_dt(&p, t_end).map_err(fail)?
        };
        let times: Vec<f64> = (0..samples)
            .map(|k| t_end * k as f64 / (samples - 1) as f64)
            .collect();
        let traj = evolve_sampled(&s.0, &p, &times, dt).map_err(fail)?;
        out.write(Box::into_raw(Box::new(QcorrTrajectory(traj))));
        Ok(())
    })
}

/// Number of stored samples; 0 for a null handle.
///
/// # Safety
/// `traj` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qcorr_trajectory_len(traj: *const QcorrTrajectory) -> usize {
    traj.as_ref().map_or(0, |t| t.0.states.len())
}

/// Time of sample `index`.
///
/// # Safety
/// `traj` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qcorr_trajectory_time(
    traj: *const QcorrTrajectory,
    index: usize,
    out: *mut f64,
) -> QcorrStatus {
    guard(|| {
        let t = deref(traj, "traj")?;
        check_out(out)?;
        let &time =
            t.0.times
                .get(index)
                .ok_or_else(|| invalid("index out of range"))?;
        write_out(out, time);
        Ok(())
    })
}

/// Copy of the state at sample `index`, as a new handle.
///
/// # Safety
/// `traj` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qcorr_trajectory_state(
    traj: *const QcorrTrajectory,
    index: usize,
    out: *mut *mut QcorrState,
) -> QcorrStatus {
    guard(|| {
        let t = deref(traj, "traj")?;
        check_out(out)?;
        let rho =
            t.0.states
                .get(index)
                .ok_or_else(|| invalid("index out of range"))?;
        put_state(out, rho.clone());
        Ok(())
    })
}

/// Releases a trajectory. Null is ignored.
///
/// # Safety
/// `traj` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qcorr_trajectory_free(traj: *mut QcorrTrajectory) {
    if !traj.is_null() {
        drop(Box::from_raw(traj));
    }
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qcorr_qnd_params_default(out: *mut QcorrQndParams) -> QcorrStatus {
    guard(|| {
        check_out(out)?;
        write_out(out, QcorrQndParams::default());
        Ok(())
    })
}

/// Applies the QND dephasing channel at time `t` with the default kernel.
///
/// # Safety
/// `state` must be a live handle, `params` readable, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qcorr_qnd_apply(
    state: *const QcorrState,
    params: *const QcorrQndParams,
    t: f64,
    out: *mut *mut QcorrState,
) -> QcorrStatus {
    guard(|| {
        let s = deref(state, "state")?;
        let p = deref(params, "params")?;
        check_out(out)?;
        let regime = if p.collective {
            Regime::Collective
        } else {
            Regime::Independent
        };
        let bath = BathSpec {
            temperature: p.temperature,
            squeezing: p.squeezing,
            squeezing_phase: p.squeezing_phase,
            omega0: p.omega0,
        };
        let rho = default_kernel(&bath, p.gamma0, regime)
            .and_then(|k| apply_qnd_channel(&s.0, &k, t))
            .map_err(fail)?;
        put_state(out, rho);
        Ok(())
    })
}
