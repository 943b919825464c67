//! C ABI for the driven-PXP Floquet simulator.
//!
//! Conventions:
//! - Every fallible call returns a [`PxpStatus`]; `Ok` is 0.
//! - Handles ([`PxpBasis`], [`PxpPropagator`]) are opaque, created by the
//!   `_new` constructors and released by the matching `_free`; freeing a
//!   null pointer is a no-op.
//! - Output buffers are caller-allocated; their required lengths are stated
//!   per function and are exact, never padded.
//! - On any non-OK status the thread-local error message is updated and can
//!   be read back with [`pxp_last_error_message`].
//! - Initial states are named with the same syntax as the CLI:
//!   `"polarized"`, `"neel"`, or `"theta:<radians>"`.

use pxp_floquet::basis::{fibonacci, BlockadedBasis};
use pxp_floquet::error::Error;
use pxp_floquet::fit::{fit_nrev, FitModel};
use pxp_floquet::floquet::{decompose, dominant_spacing, overlaps, FloquetDecomposition};
use pxp_floquet::propagation::{
    stroboscopic_orbit, DriveParams, PropagatorMatrix, SplitStepPropagator,
};
use pxp_floquet::states::fidelity;
use pxp_floquet::sweep::StateSpec;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::sync::Mutex;

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PxpStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Malformed argument (bad state name, bad numeric input).
    Usage = 2,
    /// Size outside the supported range.
    Size = 3,
    /// Bit pattern outside the blockaded subspace.
    InvalidState = 4,
    /// Numeric argument outside its domain.
    Domain = 5,
    /// Buffer or object dimensions disagree.
    DimensionMismatch = 6,
    /// Time evolution lost unitarity.
    Integration = 7,
    /// Floquet eigendecomposition failed.
    Decomposition = 8,
    /// Fewer than two dominant Floquet states.
    NoArc = 9,
    /// Least-squares fit failed.
    Fit = 10,
    /// Filesystem error.
    Io = 11,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_from(err: &Error) -> PxpStatus {
    set_error(&err.to_string());
    match err {
        Error::Size(_) => PxpStatus::Size,
        Error::InvalidState(_) => PxpStatus::InvalidState,
        Error::SiteRange { .. } | Error::Domain(_) => PxpStatus::Domain,
        Error::DimensionMismatch { .. } => PxpStatus::DimensionMismatch,
        Error::Integration(_) => PxpStatus::Integration,
        Error::Decomposition(_) => PxpStatus::Decomposition,
        Error::NoArc(_) => PxpStatus::NoArc,
        Error::Fit(_) => PxpStatus::Fit,
        Error::Usage(_) => PxpStatus::Usage,
        Error::Io(_) => PxpStatus::Io,
    }
}

/// Opaque handle to a blockaded basis.
pub struct PxpBasis {
    inner: BlockadedBasis,
}

/// Opaque handle to a one-period propagator together with its basis; the
/// eigendecomposition is computed on first use and cached.
pub struct PxpPropagator {
    basis: BlockadedBasis,
    propagator: PropagatorMatrix,
    decomposition: Mutex<Option<FloquetDecomposition>>,
}

impl PxpPropagator {
    fn with_decomposition<T>(
        &self,
        f: impl FnOnce(&FloquetDecomposition) -> Result<T, Error>,
    ) -> Result<T, Error> {
        let mut guard = self.decomposition.lock().expect("unpoisoned");
        if guard.is_none() {
            *guard = Some(decompose(&self.propagator)?);
        }
        f(guard.as_ref().expect("just filled"))
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pxp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Copy the last error message for this thread into `buffer` (up to
/// `capacity` bytes including the terminator) and return the full message
/// length in bytes, excluding the terminator. A null buffer just queries
/// the length.
///
/// # Safety
/// `buffer`, when non-null, must point to `capacity` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn pxp_last_error_message(buffer: *mut c_char, capacity: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let message = slot.borrow();
        let bytes = message.as_bytes_with_nul();
        if !buffer.is_null() && capacity > 0 {
            let n = bytes.len().min(capacity);
            unsafe {
                std::ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buffer, n);
                *buffer.add(n - 1) = 0;
            }
        }
        bytes.len() - 1
    })
}

/// n-th Fibonacci number (F(1) = F(2) = 1).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pxp_fibonacci(n: u64, out: *mut u64) -> PxpStatus {
    if out.is_null() {
        set_error("null output pointer");
        return PxpStatus::NullPointer;
    }
    match fibonacci(n) {
        Ok(value) => {
            unsafe { *out = value };
            PxpStatus::Ok
        }
        Err(err) => status_from(&err),
    }
}

/// Bessel function of the first kind, order zero.
#[no_mangle]
pub extern "C" fn pxp_bessel_j0(x: f64) -> f64 {
    pxp_floquet::bessel::bessel_j0(x)
}

/// Exact ergodic ⟨Z⟩ at `site` (1-based) of an `l`-site chain.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pxp_ergodic_z(site: u32, l: u32, out: *mut f64) -> PxpStatus {
    if out.is_null() {
        set_error("null output pointer");
        return PxpStatus::NullPointer;
    }
    match pxp_floquet::thermal::ergodic_z(site as usize, l as usize) {
        Ok(value) => {
            unsafe { *out = value };
            PxpStatus::Ok
        }
        Err(err) => status_from(&err),
    }
}

/// Predicted revival index ω_d/Δε; +inf at zero spacing (the narrowed-
/// spectrum signal), never an error.
#[no_mangle]
pub extern "C" fn pxp_revival_index(delta_eps: f64, omega_d: f64) -> f64 {
    pxp_floquet::floquet::revival_index(delta_eps, omega_d)
}

/// Enumerate the blockaded basis of an `l`-site chain.
///
/// # Safety
/// `out` must be a valid pointer; the result must be released with
/// [`pxp_basis_free`].
#[no_mangle]
pub unsafe extern "C" fn pxp_basis_new(l: u32, out: *mut *mut PxpBasis) -> PxpStatus {
    if out.is_null() {
        set_error("null output pointer");
        return PxpStatus::NullPointer;
    }
    match BlockadedBasis::enumerate(l as usize) {
        Ok(inner) => {
            unsafe { *out = Box::into_raw(Box::new(PxpBasis { inner })) };
            PxpStatus::Ok
        }
        Err(err) => status_from(&err),
    }
}

/// Release a basis handle; null is a no-op.
///
/// # Safety
/// `basis` must be null or a pointer from [`pxp_basis_new`], freed once.
#[no_mangle]
pub unsafe extern "C" fn pxp_basis_free(basis: *mut PxpBasis) {
    if !basis.is_null() {
        drop(unsafe { Box::from_raw(basis) });
    }
}

/// Subspace dimension F(L+2).
///
/// # Safety
/// `basis` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn pxp_basis_dim(basis: *const PxpBasis, out: *mut u64) -> PxpStatus {
    if basis.is_null() || out.is_null() {
        set_error("null pointer");
        return PxpStatus::NullPointer;
    }
    unsafe { *out = (*basis).inner.dim() as u64 };
    PxpStatus::Ok
}

/// Bit pattern at `ordinal` (site j occupies bit j−1).
///
/// # Safety
/// `basis` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn pxp_basis_pattern(
    basis: *const PxpBasis,
    ordinal: u64,
    out: *mut u64,
) -> PxpStatus {
    if basis.is_null() || out.is_null() {
        set_error("null pointer");
        return PxpStatus::NullPointer;
    }
    let inner = unsafe { &(*basis).inner };
    if ordinal as usize >= inner.dim() {
        set_error("ordinal out of range");
        return PxpStatus::DimensionMismatch;
    }
    unsafe { *out = inner.pattern(ordinal as usize) };
    PxpStatus::Ok
}

/// Ordinal of a blockaded bit pattern.
///
/// # Safety
/// `basis` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn pxp_basis_index_of(
    basis: *const PxpBasis,
    pattern: u64,
    out: *mut u64,
) -> PxpStatus {
    if basis.is_null() || out.is_null() {
        set_error("null pointer");
        return PxpStatus::NullPointer;
    }
    match unsafe { &(*basis).inner }.index_of(pattern) {
        Ok(ordinal) => {
            unsafe { *out = ordinal as u64 };
            PxpStatus::Ok
        }
        Err(err) => status_from(&err),
    }
}

/// Build the one-period propagator Û(T, 0) for an `l`-site chain driven at
/// amplitude `h` and frequency `omega_d`, with `steps` Strang substeps per
/// period (minimum 16; 512 is the standard choice).
///
/// # Safety
/// `out` must be a valid pointer; the result must be released with
/// [`pxp_propagator_free`].
#[no_mangle]
pub unsafe extern "C" fn pxp_propagator_new(
    l: u32,
    h: f64,
    omega_d: f64,
    steps: u32,
    out: *mut *mut PxpPropagator,
) -> PxpStatus {
    if out.is_null() {
        set_error("null output pointer");
        return PxpStatus::NullPointer;
    }
    let built = (|| {
        let basis = BlockadedBasis::enumerate(l as usize)?;
        let engine = SplitStepPropagator::new(&basis)?;
        let params = DriveParams::new(h, omega_d)?;
        let propagator = engine.one_period(&params, steps as usize)?;
        Ok::<_, Error>(PxpPropagator { basis, propagator, decomposition: Mutex::new(None) })
    })();
    match built {
        Ok(handle) => {
            unsafe { *out = Box::into_raw(Box::new(handle)) };
            PxpStatus::Ok
        }
        Err(err) => status_from(&err),
    }
}

/// Release a propagator handle; null is a no-op.
///
/// # Safety
/// `propagator` must be null or a pointer from [`pxp_propagator_new`],
/// freed once.
#[no_mangle]
pub unsafe extern "C" fn pxp_propagator_free(propagator: *mut PxpPropagator) {
    if !propagator.is_null() {
        drop(unsafe { Box::from_raw(propagator) });
    }
}

/// Matrix dimension of the propagator (= basis size).
///
/// # Safety
/// `propagator` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn pxp_propagator_dim(
    propagator: *const PxpPropagator,
    out: *mut u64,
) -> PxpStatus {
    if propagator.is_null() || out.is_null() {
        set_error("null pointer");
        return PxpStatus::NullPointer;
    }
    unsafe { *out = (*propagator).propagator.dim() as u64 };
    PxpStatus::Ok
}

/// ‖U†U − 1‖_max of the stored propagator.
///
/// # Safety
/// `propagator` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn pxp_propagator_unitarity_defect(
    propagator: *const PxpPropagator,
    out: *mut f64,
) -> PxpStatus {
    if propagator.is_null() || out.is_null() {
        set_error("null pointer");
        return PxpStatus::NullPointer;
    }
    unsafe { *out = (*propagator).propagator.unitarity_defect() };
    PxpStatus::Ok
}

fn parse_state(handle: &PxpPropagator, state: *const c_char) -> Result<StateSpec, PxpStatus> {
    if state.is_null() {
        set_error("null state string");
        return Err(PxpStatus::NullPointer);
    }
    let text = unsafe { CStr::from_ptr(state) }.to_str().map_err(|_| {
        set_error("state string is not valid UTF-8");
        PxpStatus::Usage
    })?;
    let spec = StateSpec::parse(text).map_err(|err| status_from(&err))?;
    // validate now so later buffer fills cannot fail halfway
    spec.build(&handle.basis).map_err(|err| status_from(&err))?;
    Ok(spec)
}

/// Stroboscopic fidelities ℱ(nT) for n = 0..=n_max of the named initial
/// state. `out` must hold n_max + 1 doubles.
///
/// # Safety
/// `propagator`, `state` and `out` must be valid; `out` must have space for
/// `n_max + 1` doubles.
#[no_mangle]
pub unsafe extern "C" fn pxp_fidelity_orbit(
    propagator: *const PxpPropagator,
    state: *const c_char,
    n_max: u64,
    out: *mut f64,
) -> PxpStatus {
    if propagator.is_null() || out.is_null() {
        set_error("null pointer");
        return PxpStatus::NullPointer;
    }
    let handle = unsafe { &*propagator };
    let spec = match parse_state(handle, state) {
        Ok(spec) => spec,
        Err(status) => return status,
    };
    let psi0 = spec.build(&handle.basis).expect("validated");
    match stroboscopic_orbit(&handle.propagator, &psi0, n_max as usize) {
        Ok(orbit) => {
            for (n, current) in orbit.iter().enumerate() {
                let value = fidelity(current, &psi0).expect("same basis");
                unsafe { *out.add(n) = value };
            }
            PxpStatus::Ok
        }
        Err(err) => status_from(&err),
    }
}

/// Quasi-energies (ascending, inside (−ω_d/2, ω_d/2]) and squared overlaps
/// of the named initial state with each Floquet state. Both buffers must
/// hold `dim` doubles (see [`pxp_propagator_dim`]).
///
/// # Safety
/// All pointers must be valid; both buffers must have space for `dim`
/// doubles.
#[no_mangle]
pub unsafe extern "C" fn pxp_floquet_spectrum(
    propagator: *const PxpPropagator,
    state: *const c_char,
    quasi_energies: *mut f64,
    overlaps_sq: *mut f64,
) -> PxpStatus {
    if propagator.is_null() || quasi_energies.is_null() || overlaps_sq.is_null() {
        set_error("null pointer");
        return PxpStatus::NullPointer;
    }
    let handle = unsafe { &*propagator };
    let spec = match parse_state(handle, state) {
        Ok(spec) => spec,
        Err(status) => return status,
    };
    let psi0 = spec.build(&handle.basis).expect("validated");
    let result = handle.with_decomposition(|decomposition| {
        let profile = overlaps(decomposition, &psi0, spec.label())?;
        for (m, &(eps, weight)) in profile.pairs().iter().enumerate() {
            unsafe {
                *quasi_energies.add(m) = eps;
                *overlaps_sq.add(m) = weight;
            }
        }
        Ok(())
    });
    match result {
        Ok(()) => PxpStatus::Ok,
        Err(err) => status_from(&err),
    }
}

/// Dominant quasi-energy spacing Δε of the named initial state at overlap
/// threshold `eta` (fraction of the maximum overlap, in (0, 1)).
///
/// # Safety
/// `propagator`, `state` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn pxp_dominant_spacing(
    propagator: *const PxpPropagator,
    state: *const c_char,
    eta: f64,
    out: *mut f64,
) -> PxpStatus {
    if propagator.is_null() || out.is_null() {
        set_error("null pointer");
        return PxpStatus::NullPointer;
    }
    let handle = unsafe { &*propagator };
    let spec = match parse_state(handle, state) {
        Ok(spec) => spec,
        Err(status) => return status,
    };
    let psi0 = spec.build(&handle.basis).expect("validated");
    let result = handle.with_decomposition(|decomposition| {
        let profile = overlaps(decomposition, &psi0, spec.label())?;
        dominant_spacing(decomposition, &profile, eta)
    });
    match result {
        Ok(spacing) => {
            unsafe { *out = spacing };
            PxpStatus::Ok
        }
        Err(err) => status_from(&err),
    }
}

/// Chain-averaged ⟨Z⟩(nT) for n = 0..=n_max of the named initial state.
/// `out` must hold n_max + 1 doubles.
///
/// # Safety
/// All pointers must be valid; `out` must have space for `n_max + 1`
/// doubles.
#[no_mangle]
pub unsafe extern "C" fn pxp_chain_z_series(
    propagator: *const PxpPropagator,
    state: *const c_char,
    n_max: u64,
    out: *mut f64,
) -> PxpStatus {
    if propagator.is_null() || out.is_null() {
        set_error("null pointer");
        return PxpStatus::NullPointer;
    }
    let handle = unsafe { &*propagator };
    let spec = match parse_state(handle, state) {
        Ok(spec) => spec,
        Err(status) => return status,
    };
    let psi0 = spec.build(&handle.basis).expect("validated");
    let trace = match pxp_floquet::thermal::ThermalizationTrace::record(
        &handle.basis,
        &handle.propagator,
        &psi0,
        n_max as usize,
    ) {
        Ok(trace) => trace,
        Err(err) => return status_from(&err),
    };
    for record in trace.records() {
        unsafe { *out.add(record.n) = record.chain.z };
    }
    PxpStatus::Ok
}

/// Result block for [`pxp_fit_nrev`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct PxpFitResult {
    pub gamma: f64,
    pub gamma_err: f64,
    pub alpha: f64,
    pub alpha_err: f64,
    pub residual_norm: f64,
    pub points_used: u64,
}

/// Fit (h, n_rev) samples against the Bessel revival model inside the
/// window [window_lo, window_hi]. `model` is 0 for the offset model
/// n_rev = ω_d/(γJ₀) + α, 1 for the proportional model.
///
/// # Safety
/// `h` and `n_rev` must point to `len` doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pxp_fit_nrev(
    h: *const f64,
    n_rev: *const f64,
    len: usize,
    omega_d: f64,
    model: u32,
    window_lo: f64,
    window_hi: f64,
    out: *mut PxpFitResult,
) -> PxpStatus {
    if h.is_null() || n_rev.is_null() || out.is_null() {
        set_error("null pointer");
        return PxpStatus::NullPointer;
    }
    let model = match model {
        0 => FitModel::WithOffset,
        1 => FitModel::Proportional,
        _ => {
            set_error("model must be 0 (with offset) or 1 (proportional)");
            return PxpStatus::Usage;
        }
    };
    let points: Vec<(f64, f64)> =
        (0..len).map(|k| unsafe { (*h.add(k), *n_rev.add(k)) }).collect();
    match fit_nrev(&points, omega_d, model, (window_lo, window_hi)) {
        Ok(fit) => {
            unsafe {
                *out = PxpFitResult {
                    gamma: fit.gamma,
                    gamma_err: fit.gamma_err,
                    alpha: fit.alpha,
                    alpha_err: fit.alpha_err,
                    residual_norm: fit.residual_norm,
                    points_used: fit.points_used as u64,
                };
            }
            PxpStatus::Ok
        }
        Err(err) => status_from(&err),
    }
}
