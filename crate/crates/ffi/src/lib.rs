//! C ABI for `discord-lab`.
//!
//! Every fallible entry point returns a [`DlStatus`] and writes its result
//! through an out-pointer. On failure the out-pointer is left untouched and a
//! message is available from [`dl_last_error_message`] on the same thread.
//! States and sample sets cross the boundary as opaque handles that must be
//! released with the matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use discord_lab::channels::{add_classical_noise_mode_b, attenuate_mode_b};
use discord_lab::oracle::{minimize_oracle, OracleOptions};
use discord_lab::states::{split_thermal, tmsv, two_mode_from_squeezers, ModulationSpec, SqueezerSpec};
use discord_lab::{
    covariance_from_json, invariants, measures_with_errors, validate_physicality, Branch, Error, MeasureReport,
    QuadratureSamples, TwoModeCovariance, Units,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Unphysical = 3,
    NotStandardForm = 4,
    InsufficientData = 5,
    DegenerateBootstrap = 6,
    Numerical = 7,
    Io = 8,
    Panic = 99,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DlUnits {
    Bits = 0,
    Nats = 1,
}

impl From<DlUnits> for Units {
    fn from(u: DlUnits) -> Self {
        match u {
            DlUnits::Bits => Units::Bits,
            DlUnits::Nats => Units::Nats,
        }
    }
}

/// 0 = branch a, 1 = branch b, 2 = degenerate.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DlBranch {
    A = 0,
    B = 1,
    Degenerate = 2,
}

impl From<Branch> for DlBranch {
    fn from(b: Branch) -> Self {
        match b {
            Branch::A => DlBranch::A,
            Branch::B => DlBranch::B,
            Branch::Degenerate => DlBranch::Degenerate,
        }
    }
}

/// Opaque two-mode covariance in standard form.
pub struct DlCovariance(TwoModeCovariance);

/// Opaque set of quadrature samples.
pub struct DlSamples(QuadratureSamples);

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct DlInvariants {
    pub i1: f64,
    pub i2: f64,
    pub i3: f64,
    pub i4: f64,
    pub delta: f64,
    pub nu_minus: f64,
    pub nu_plus: f64,
    pub nu_tilde_minus: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct DlMeasureReport {
    pub mutual_info: f64,
    pub classical_info: f64,
    pub discord: f64,
    pub log_negativity: f64,
    pub e_min: f64,
    pub separable: bool,
    pub branch: DlBranch,
}

impl From<MeasureReport> for DlMeasureReport {
    fn from(r: MeasureReport) -> Self {
        DlMeasureReport {
            mutual_info: r.mutual_info,
            classical_info: r.classical_info,
            discord: r.discord,
            log_negativity: r.log_negativity,
            e_min: r.e_min,
            separable: r.separable,
            branch: r.branch.into(),
        }
    }
}

/// Point estimates with bootstrap standard errors.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct DlEstimate {
    pub point: DlMeasureReport,
    pub mutual_info_err: f64,
    pub classical_info_err: f64,
    pub discord_err: f64,
    pub log_negativity_err: f64,
    pub projected: usize,
    pub violations: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> DlStatus {
    match err {
        Error::NonPositiveMatrix { .. }
        | Error::ComplexEigenvalue { .. }
        | Error::Unphysical { .. }
        | Error::UnphysicalSqueezer { .. } => DlStatus::Unphysical,
        Error::NotStandardForm { .. } | Error::NotSymmetric { .. } => DlStatus::NotStandardForm,
        Error::Domain(_) | Error::Config { .. } | Error::Json(_) => DlStatus::InvalidArgument,
        Error::SingularMatrix(_) | Error::FactorizationFailure => DlStatus::Numerical,
        Error::InsufficientData(_) => DlStatus::InsufficientData,
        Error::DegenerateBootstrap { .. } => DlStatus::DegenerateBootstrap,
        Error::Io(_) | Error::Csv(_) => DlStatus::Io,
    }
}

fn guard<F>(f: F) -> DlStatus
where
    F: FnOnce() -> Result<(), DlStatus>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DlStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => {
            set_last_error("panic inside discord-lab".to_string());
            DlStatus::Panic
        }
    }
}

fn fail(err: Error) -> DlStatus {
    let status = status_of(&err);
    set_last_error(err.to_string());
    status
}

fn null_arg(name: &str) -> DlStatus {
    set_last_error(format!("null pointer passed as `{name}`"));
    DlStatus::NullPointer
}

unsafe fn cov_ref<'a>(h: *const DlCovariance, name: &str) -> Result<&'a TwoModeCovariance, DlStatus> {
    h.as_ref().map(|c| &c.0).ok_or_else(|| null_arg(name))
}

unsafe fn put_cov(out: *mut *mut DlCovariance, sigma: discord_lab::Result<TwoModeCovariance>) -> Result<(), DlStatus> {
    if out.is_null() {
        return Err(null_arg("out"));
    }
    let sigma = sigma.map_err(fail)?;
    *out = Box::into_raw(Box::new(DlCovariance(sigma)));
    Ok(())
}

/// Message for the last failed call on this thread, or NULL if none.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn dl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn dl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a standard-form covariance and checks physicality.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn dl_covariance_new(
    a_xx: f64,
    a_pp: f64,
    b_xx: f64,
    b_pp: f64,
    c_x: f64,
    c_p: f64,
    out: *mut *mut DlCovariance,
) -> DlStatus {
    guard(|| {
        let sigma = TwoModeCovariance::new(a_xx, a_pp, b_xx, b_pp, c_x, c_p);
        let checked = validate_physicality(&sigma).into_result().map(|_| sigma);
        put_cov(out, checked)
    })
}

/// Parses a covariance from JSON (named fields, 4x4 or flat 16-element array).
///
/// # Safety
/// `json` must be a valid NUL-terminated string; `out` as in [`dl_covariance_new`].
#[no_mangle]
pub unsafe extern "C" fn dl_covariance_from_json(json: *const c_char, tol: f64, out: *mut *mut DlCovariance) -> DlStatus {
    guard(|| {
        if json.is_null() {
            return Err(null_arg("json"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| fail(Error::Domain(format!("input is not UTF-8: {e}"))))?;
        let parsed = covariance_from_json(text, tol)
            .and_then(|s| validate_physicality(&s).into_result().map(|_| s));
        put_cov(out, parsed)
    })
}

/// Copies the six entries (a_xx, a_pp, b_xx, b_pp, c_x, c_p) into `values`.
///
/// # Safety
/// `cov` must be a live handle and `values` must point to six writable doubles.
#[no_mangle]
pub unsafe extern "C" fn dl_covariance_entries(cov: *const DlCovariance, values: *mut f64) -> DlStatus {
    guard(|| {
        let sigma = cov_ref(cov, "cov")?;
        if values.is_null() {
            return Err(null_arg("values"));
        }
        ptr::copy_nonoverlapping(sigma.as_array().as_ptr(), values, 6);
        Ok(())
    })
}

/// # Safety
/// `cov` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dl_covariance_free(cov: *mut DlCovariance) {
    if !cov.is_null() {
        drop(Box::from_raw(cov));
    }
}

/// Two-mode squeezed vacuum with squeezing parameter `r`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn dl_tmsv(r: f64, out: *mut *mut DlCovariance) -> DlStatus {
    guard(|| put_cov(out, tmsv(r)))
}

/// Thermal state of variance 1 + `modulation` split on a balanced beamsplitter.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn dl_split_thermal(modulation: f64, out: *mut *mut DlCovariance) -> DlStatus {
    guard(|| put_cov(out, split_thermal(&ModulationSpec::new(modulation))))
}

/// Two identical squeezers interfered on a balanced beamsplitter.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn dl_two_mode_from_squeezers(
    squeezing_db: f64,
    antisqueezing_db: f64,
    out: *mut *mut DlCovariance,
) -> DlStatus {
    guard(|| put_cov(out, two_mode_from_squeezers(&SqueezerSpec::new(squeezing_db, antisqueezing_db))))
}

/// Pure-loss channel of transmittance `t` on mode B. Writes a new handle.
///
/// # Safety
/// `cov` must be a live handle; `out` as in [`dl_covariance_new`].
#[no_mangle]
pub unsafe extern "C" fn dl_attenuate_mode_b(cov: *const DlCovariance, t: f64, out: *mut *mut DlCovariance) -> DlStatus {
    guard(|| {
        let sigma = cov_ref(cov, "cov")?;
        put_cov(out, attenuate_mode_b(sigma, t))
    })
}

/// Classical Gaussian noise of variance `kappa` on both quadratures of mode B.
///
/// # Safety
/// `cov` must be a live handle; `out` as in [`dl_covariance_new`].
#[no_mangle]
pub unsafe extern "C" fn dl_add_noise_mode_b(
    cov: *const DlCovariance,
    kappa: f64,
    out: *mut *mut DlCovariance,
) -> DlStatus {
    guard(|| {
        let sigma = cov_ref(cov, "cov")?;
        put_cov(out, add_classical_noise_mode_b(sigma, kappa))
    })
}

/// # Safety
/// `cov` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dl_invariants(cov: *const DlCovariance, out: *mut DlInvariants) -> DlStatus {
    guard(|| {
        let sigma = cov_ref(cov, "cov")?;
        if out.is_null() {
            return Err(null_arg("out"));
        }
        let inv = invariants(sigma).map_err(fail)?;
        *out = DlInvariants {
            i1: inv.i1,
            i2: inv.i2,
            i3: inv.i3,
            i4: inv.i4,
            delta: inv.delta,
            nu_minus: inv.nu_minus,
            nu_plus: inv.nu_plus,
            nu_tilde_minus: inv.nu_tilde_minus,
        };
        Ok(())
    })
}

/// Mutual information, classical correlation, discord and log-negativity.
///
/// # Safety
/// `cov` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dl_measure(cov: *const DlCovariance, units: DlUnits, out: *mut DlMeasureReport) -> DlStatus {
    guard(|| {
        let sigma = cov_ref(cov, "cov")?;
        if out.is_null() {
            return Err(null_arg("out"));
        }
        let report = MeasureReport::compute(sigma, units.into()).map_err(fail)?;
        *out = report.into();
        Ok(())
    })
}

/// Numerical minimum of the conditional determinant over general-dyne
/// measurements on mode B. `grid_size` of 0 uses the default grid.
///
/// # Safety
/// `cov` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dl_oracle_e_min(cov: *const DlCovariance, grid_size: usize, out: *mut f64) -> DlStatus {
    guard(|| {
        let sigma = cov_ref(cov, "cov")?;
        if out.is_null() {
            return Err(null_arg("out"));
        }
        let mut opts = OracleOptions::default();
        if grid_size > 0 {
            opts.grid_size = grid_size;
        }
        *out = minimize_oracle(sigma, &opts).e_min;
        Ok(())
    })
}

/// Draws `n` seeded samples (x_a, p_a, x_b, p_b).
///
/// # Safety
/// `cov` must be a live handle; `out` must point to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn dl_sample(cov: *const DlCovariance, n: usize, seed: u64, out: *mut *mut DlSamples) -> DlStatus {
    guard(|| {
        let sigma = cov_ref(cov, "cov")?;
        if out.is_null() {
            return Err(null_arg("out"));
        }
        let samples = discord_lab::sample(sigma, n, seed).map_err(fail)?;
        *out = Box::into_raw(Box::new(DlSamples(samples)));
        Ok(())
    })
}

/// Wraps `n` rows of four doubles, row-major, as a sample handle.
///
/// # Safety
/// `rows` must point to `4 * n` readable doubles; `out` to storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn dl_samples_from_rows(rows: *const f64, n: usize, out: *mut *mut DlSamples) -> DlStatus {
    guard(|| {
        if rows.is_null() {
            return Err(null_arg("rows"));
        }
        if out.is_null() {
            return Err(null_arg("out"));
        }
        let flat = std::slice::from_raw_parts(rows, 4 * n);
        let data = flat.chunks_exact(4).map(|c| [c[0], c[1], c[2], c[3]]).collect();
        let samples = QuadratureSamples::new(data, None).map_err(fail)?;
        *out = Box::into_raw(Box::new(DlSamples(samples)));
        Ok(())
    })
}

/// Number of rows in the sample set, 0 for NULL.
///
/// # Safety
/// `samples` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dl_samples_len(samples: *const DlSamples) -> usize {
    samples.as_ref().map_or(0, |s| s.0.len())
}

/// Copies up to `capacity` rows into `rows` (row-major, four doubles each)
/// and reports how many were written in `written`.
///
/// # Safety
/// `samples` must be a live handle, `rows` must hold `4 * capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn dl_samples_copy(
    samples: *const DlSamples,
    rows: *mut f64,
    capacity: usize,
    written: *mut usize,
) -> DlStatus {
    guard(|| {
        let s = samples.as_ref().ok_or_else(|| null_arg("samples"))?;
        if rows.is_null() {
            return Err(null_arg("rows"));
        }
        let count = capacity.min(s.0.len());
        for (i, row) in s.0.rows.iter().take(count).enumerate() {
            ptr::copy_nonoverlapping(row.as_ptr(), rows.add(4 * i), 4);
        }
        if !written.is_null() {
            *written = count;
        }
        Ok(())
    })
}

/// # Safety
/// `samples` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dl_samples_free(samples: *mut DlSamples) {
    if !samples.is_null() {
        drop(Box::from_raw(samples));
    }
}

/// Bootstrap estimate of all measures from a sample set.
///
/// # Safety
/// `samples` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dl_estimate(
    samples: *const DlSamples,
    resamples: usize,
    seed: u64,
    units: DlUnits,
    out: *mut DlEstimate,
) -> DlStatus {
    guard(|| {
        let s = samples.as_ref().ok_or_else(|| null_arg("samples"))?;
        if out.is_null() {
            return Err(null_arg("out"));
        }
        let est = measures_with_errors(&s.0, resamples, seed, units.into()).map_err(fail)?;
        *out = DlEstimate {
            point: est.point().into(),
            mutual_info_err: est.mutual_info.sigma,
            classical_info_err: est.classical_info.sigma,
            discord_err: est.discord.sigma,
            log_negativity_err: est.log_negativity.sigma,
            projected: est.projected,
            violations: est.violations,
        };
        Ok(())
    })
}
