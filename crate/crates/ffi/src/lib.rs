//! C ABI over `crackspec`.
//!
//! Every fallible call returns a [`CsStatus`]; on failure the message is
//! available from [`crackspec_last_error`] on the same thread. Objects are
//! opaque handles owned by the caller and released with the matching `_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use crackspec::capacity::additivity;
use crackspec::discretize::assemble;
use crackspec::domain::{CrackedDiskSpec, QuarterCase, SectorKind, SectorProblem};
use crackspec::eigensolve::lowest_eigenpairs;
use crackspec::spectra::{detect_crossings, solve_full_spectrum, sweep, CrossingEvent, MergedSpectrum, SweepConfig};
use crackspec::specfun::{bessel_j, bessel_zero, choose_r1};
use crackspec::Error;

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CsStatus {
    Ok = 0,
    Range = 1,
    Domain = 2,
    Validation = 3,
    Geometry = 4,
    Unsupported = 5,
    Dimension = 6,
    Numeric = 7,
    NoConvergence = 8,
    InsufficientData = 9,
    DegenerateVector = 10,
    Parse = 11,
    Io = 12,
    NullPointer = 13,
    Panic = 14,
}

impl From<&Error> for CsStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Range(_) => CsStatus::Range,
            Error::Domain(_) => CsStatus::Domain,
            Error::Validation(_) => CsStatus::Validation,
            Error::Geometry(_) => CsStatus::Geometry,
            Error::Unsupported(_) => CsStatus::Unsupported,
            Error::Dimension { .. } => CsStatus::Dimension,
            Error::Numeric(_) => CsStatus::Numeric,
            Error::NoConvergence { .. } => CsStatus::NoConvergence,
            Error::InsufficientData(_) => CsStatus::InsufficientData,
            Error::DegenerateVector(_) => CsStatus::DegenerateVector,
            Error::Parse(_) => CsStatus::Parse,
            Error::Io(_) => CsStatus::Io,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), CsStatusError>) -> CsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            CsStatus::Ok
        }
        Ok(Err(e)) => {
            set_error(&e.1);
            e.0
        }
        Err(_) => {
            set_error("panic inside crackspec");
            CsStatus::Panic
        }
    }
}

struct CsStatusError(CsStatus, String);

impl From<Error> for CsStatusError {
    fn from(e: Error) -> Self {
        CsStatusError(CsStatus::from(&e), e.to_string())
    }
}

fn null(what: &str) -> CsStatusError {
    CsStatusError(CsStatus::NullPointer, format!("{what} is null"))
}

fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, CsStatusError> {
    // SAFETY: the caller passes either null or a valid, writable pointer.
    unsafe { p.as_mut() }.ok_or_else(|| null(what))
}

fn input<'a, T>(p: *const T, what: &str) -> Result<&'a T, CsStatusError> {
    // SAFETY: the caller passes either null or a handle from this library.
    unsafe { p.as_ref() }.ok_or_else(|| null(what))
}

/// Message of the last failed call on this thread (empty after a success).
/// Valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn crackspec_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version with file-format schema versions.
#[no_mangle]
pub extern "C" fn crackspec_version() -> *const c_char {
    static VERSION: std::sync::OnceLock<CString> = std::sync::OnceLock::new();
    VERSION
        .get_or_init(|| CString::new(crackspec::cli::VERSION).unwrap_or_default())
        .as_ptr()
}

/// # Safety
/// `out_value` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn crackspec_bessel_j(ell: u32, x: f64, out_value: *mut f64) -> CsStatus {
    guard(|| {
        *out(out_value, "out_value")? = bessel_j(ell, x)?;
        Ok(())
    })
}

/// `k`-th positive zero of `J_ell` (`k >= 1`).
///
/// # Safety
/// `out_value` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn crackspec_bessel_zero(ell: u32, k: u32, out_value: *mut f64) -> CsStatus {
    guard(|| {
        *out(out_value, "out_value")? = bessel_zero(ell, k)?.value;
        Ok(())
    })
}

/// # Safety
/// `out_value` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn crackspec_choose_r1(r2: f64, out_value: *mut f64) -> CsStatus {
    guard(|| {
        *out(out_value, "out_value")? = choose_r1(r2)?;
        Ok(())
    })
}

/// Opaque cracked-disk geometry.
pub struct CsSpec(CrackedDiskSpec);

/// # Safety
/// `out_spec` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn crackspec_spec_new(n: u32, epsilon: f64, r1: f64, r2: f64, out_spec: *mut *mut CsSpec) -> CsStatus {
    guard(|| {
        let slot = out(out_spec, "out_spec")?;
        *slot = ptr::null_mut();
        let spec = CrackedDiskSpec::new(n, epsilon, r1, r2)?;
        *slot = Box::into_raw(Box::new(CsSpec(spec)));
        Ok(())
    })
}

/// Releases a geometry; null is ignored.
///
/// # Safety
/// `spec` must be null or a geometry from `crackspec_spec_new` that was not freed yet.
#[no_mangle]
pub unsafe extern "C" fn crackspec_spec_free(spec: *mut CsSpec) {
    if !spec.is_null() {
        // SAFETY: non-null handles come from `crackspec_spec_new`.
        drop(unsafe { Box::from_raw(spec) });
    }
}

/// Opaque merged spectrum.
pub struct CsSpectrum(MergedSpectrum);

/// Solves every Floquet sector for `k` eigenvalues at resolution `m`.
///
/// # Safety
/// Handles must be null or live handles from this library, and output pointers null or writable.
#[no_mangle]
pub unsafe extern "C" fn crackspec_solve(
    spec: *const CsSpec,
    m: usize,
    k: usize,
    tol: f64,
    out_spectrum: *mut *mut CsSpectrum,
) -> CsStatus {
    guard(|| {
        let slot = out(out_spectrum, "out_spectrum")?;
        *slot = ptr::null_mut();
        let spec = input(spec, "spec")?;
        let merged = solve_full_spectrum(&spec.0, m, k, tol)?;
        *slot = Box::into_raw(Box::new(CsSpectrum(merged)));
        Ok(())
    })
}

/// # Safety
/// `spectrum` must be null or a handle from `crackspec_solve` that was not freed yet.
#[no_mangle]
pub unsafe extern "C" fn crackspec_spectrum_free(spectrum: *mut CsSpectrum) {
    if !spectrum.is_null() {
        // SAFETY: non-null handles come from `crackspec_solve`.
        drop(unsafe { Box::from_raw(spectrum) });
    }
}

/// Number of sector eigenvalues stored (each counted once).
///
/// # Safety
/// Handles must be null or live handles from this library, and output pointers null or writable.
#[no_mangle]
pub unsafe extern "C" fn crackspec_spectrum_len(spectrum: *const CsSpectrum) -> usize {
    // SAFETY: null or a handle from `crackspec_solve`.
    unsafe { spectrum.as_ref() }.map_or(0, |s| s.0.entries.len())
}

/// One stored eigenvalue in ascending order.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct CsEigenvalue {
    pub lambda: f64,
    pub residual: f64,
    /// Multiplicity in the whole domain (1 or 2).
    pub weight: u32,
    /// Floquet index of the sector.
    pub ell: u32,
    /// Position inside the sector, 0-based.
    pub index: u32,
}

/// # Safety
/// Handles must be null or live handles from this library, and output pointers null or writable.
#[no_mangle]
pub unsafe extern "C" fn crackspec_spectrum_get(
    spectrum: *const CsSpectrum,
    i: usize,
    out_value: *mut CsEigenvalue,
) -> CsStatus {
    guard(|| {
        let s = input(spectrum, "spectrum")?;
        let slot = out(out_value, "out_value")?;
        let e = s.0.entries.get(i).ok_or_else(|| {
            CsStatusError(CsStatus::Range, format!("index {i} out of {} entries", s.0.entries.len()))
        })?;
        let ell = match e.sector.kind {
            SectorKind::Floquet { ell, .. } => ell,
            SectorKind::Quarter(_) => 0,
        };
        *slot = CsEigenvalue {
            lambda: e.eigenvalue,
            residual: e.residual,
            weight: e.sector.weight,
            ell,
            index: e.index as u32,
        };
        Ok(())
    })
}

/// Writes up to `capacity` eigenvalues counted with multiplicity and stores
/// how many were written.
///
/// # Safety
/// Handles must be null or live handles from this library, `out_written` null or writable, and `buffer` null or writable for `capacity` values.
#[no_mangle]
pub unsafe extern "C" fn crackspec_spectrum_lowest(
    spectrum: *const CsSpectrum,
    buffer: *mut f64,
    capacity: usize,
    out_written: *mut usize,
) -> CsStatus {
    guard(|| {
        let s = input(spectrum, "spectrum")?;
        let written = out(out_written, "out_written")?;
        let values = s.0.lowest(capacity);
        if !values.is_empty() && buffer.is_null() {
            return Err(null("buffer"));
        }
        // SAFETY: `buffer` holds `capacity >= values.len()` doubles.
        unsafe { ptr::copy_nonoverlapping(values.as_ptr(), buffer, values.len()) };
        *written = values.len();
        Ok(())
    })
}

/// Quarter-disk boundary combination on the rays `theta = 0` and `theta = pi/2`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CsQuarterCase {
    Nnd = 0,
    Ddd = 1,
    Ndd = 2,
    Dnd = 3,
}

impl From<CsQuarterCase> for QuarterCase {
    fn from(c: CsQuarterCase) -> Self {
        match c {
            CsQuarterCase::Nnd => QuarterCase::Nnd,
            CsQuarterCase::Ddd => QuarterCase::Ddd,
            CsQuarterCase::Ndd => QuarterCase::Ndd,
            CsQuarterCase::Dnd => QuarterCase::Dnd,
        }
    }
}

/// Lowest `count` eigenvalues of one quarter-disk problem of the `N = 2` disk.
///
/// # Safety
/// Handles must be null or live handles from this library, output pointers null or writable, and `buffer` null or writable for `count` values.
#[no_mangle]
pub unsafe extern "C" fn crackspec_quarter(
    case: CsQuarterCase,
    epsilon: f64,
    r1: f64,
    r2: f64,
    m: usize,
    tol: f64,
    buffer: *mut f64,
    count: usize,
) -> CsStatus {
    guard(|| {
        if buffer.is_null() {
            return Err(null("buffer"));
        }
        let spec = CrackedDiskSpec::new(2, epsilon, r1, r2)?;
        let op = assemble(&SectorProblem::quarter(spec, case.into())?, m)?;
        let sp = lowest_eigenpairs(&op, count, tol)?;
        // SAFETY: `buffer` holds `count` doubles.
        unsafe { ptr::copy_nonoverlapping(sp.eigenvalues.as_ptr(), buffer, count) };
        Ok(())
    })
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct CsAdditivity {
    pub delta: f64,
    pub cap_total: f64,
    pub cap_plus: f64,
    pub cap_minus: f64,
    pub ratio: f64,
}

/// Capacities of two antipodal arcs of half-width `delta`, and of each alone.
///
/// # Safety
/// Handles must be null or live handles from this library, and output pointers null or writable.
#[no_mangle]
pub unsafe extern "C" fn crackspec_capacity_additivity(
    r1: f64,
    r2: f64,
    delta: f64,
    m: usize,
    out_value: *mut CsAdditivity,
) -> CsStatus {
    guard(|| {
        let slot = out(out_value, "out_value")?;
        let p = additivity(r1, r2, delta, m)?;
        *slot = CsAdditivity {
            delta: p.delta,
            cap_total: p.cap_total,
            cap_plus: p.cap_plus,
            cap_minus: p.cap_minus,
            ratio: p.ratio,
        };
        Ok(())
    })
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct CsCrossing {
    pub epsilon_star: f64,
    pub lambda_star: f64,
    pub rank: u32,
    pub multiplicity: u32,
    pub ell_a: u32,
    pub ell_b: u32,
}

/// Opaque list of crossings.
pub struct CsCrossingList(Vec<CrossingEvent>);

/// Sweeps the Floquet sectors of `spec` over `n_eps` ascending openings and
/// reports crossings with rank up to `max_rank`.
///
/// # Safety
/// Handles must be null or live handles from this library, output pointers null or writable, and `epsilons` null or readable for `n_eps` values.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn crackspec_crossings(
    spec: *const CsSpec,
    epsilons: *const f64,
    n_eps: usize,
    m: usize,
    k: usize,
    tol: f64,
    max_rank: usize,
    out_list: *mut *mut CsCrossingList,
) -> CsStatus {
    guard(|| {
        let slot = out(out_list, "out_list")?;
        *slot = ptr::null_mut();
        let spec = input(spec, "spec")?;
        if epsilons.is_null() {
            return Err(null("epsilons"));
        }
        // SAFETY: `epsilons` holds `n_eps` doubles.
        let eps = unsafe { std::slice::from_raw_parts(epsilons, n_eps) };
        let curve = sweep(&spec.0, eps, &SweepConfig::floquet(m, k, tol))?;
        let events = detect_crossings(&curve, max_rank)?;
        *slot = Box::into_raw(Box::new(CsCrossingList(events)));
        Ok(())
    })
}

/// # Safety
/// Handles must be null or live handles from this library, and output pointers null or writable.
#[no_mangle]
pub unsafe extern "C" fn crackspec_crossings_len(list: *const CsCrossingList) -> usize {
    // SAFETY: null or a handle from `crackspec_crossings`.
    unsafe { list.as_ref() }.map_or(0, |l| l.0.len())
}

/// # Safety
/// Handles must be null or live handles from this library, and output pointers null or writable.
#[no_mangle]
pub unsafe extern "C" fn crackspec_crossings_get(list: *const CsCrossingList, i: usize, out_value: *mut CsCrossing) -> CsStatus {
    guard(|| {
        let l = input(list, "list")?;
        let slot = out(out_value, "out_value")?;
        let e = l
            .0
            .get(i)
            .ok_or_else(|| CsStatusError(CsStatus::Range, format!("index {i} out of {} crossings", l.0.len())))?;
        let ell = |k: SectorKind| match k {
            SectorKind::Floquet { ell, .. } => ell,
            SectorKind::Quarter(_) => 0,
        };
        *slot = CsCrossing {
            epsilon_star: e.epsilon_star,
            lambda_star: e.lambda_star,
            rank: e.rank as u32,
            multiplicity: e.multiplicity,
            ell_a: ell(e.sectors.0.kind),
            ell_b: ell(e.sectors.1.kind),
        };
        Ok(())
    })
}

/// # Safety
/// `list` must be null or a handle from `crackspec_crossings` that was not freed yet.
#[no_mangle]
pub unsafe extern "C" fn crackspec_crossings_free(list: *mut CsCrossingList) {
    if !list.is_null() {
        // SAFETY: non-null handles come from `crackspec_crossings`.
        drop(unsafe { Box::from_raw(list) });
    }
}

/// Parses a quarter-case name (`NND`, `DDD`, `NDD`, `DND`, any case).
///
/// # Safety
/// `name` must be null or a NUL-terminated string, and `out_case` null or writable.
#[no_mangle]
pub unsafe extern "C" fn crackspec_quarter_case_parse(name: *const c_char, out_case: *mut CsQuarterCase) -> CsStatus {
    guard(|| {
        if name.is_null() {
            return Err(null("name"));
        }
        let slot = out(out_case, "out_case")?;
        // SAFETY: `name` is a NUL-terminated string.
        let s = unsafe { CStr::from_ptr(name) }
            .to_str()
            .map_err(|e| CsStatusError(CsStatus::Parse, e.to_string()))?;
        *slot = match s.parse::<QuarterCase>()? {
            QuarterCase::Nnd => CsQuarterCase::Nnd,
            QuarterCase::Ddd => CsQuarterCase::Ddd,
            QuarterCase::Ndd => CsQuarterCase::Ndd,
            QuarterCase::Dnd => CsQuarterCase::Dnd,
        };
        Ok(())
    })
}
