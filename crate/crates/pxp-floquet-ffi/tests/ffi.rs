//! Exercises the C entry points exactly as a foreign caller would: through
//! raw pointers and status codes.

use pxp_floquet_ffi::*;
use std::ffi::{c_char, CStr, CString};

#[test]
fn version_is_a_c_string() {
    let version = unsafe { CStr::from_ptr(pxp_version()) };
    assert_eq!(version.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn basis_lifecycle_and_lookup() {
    let mut basis: *mut PxpBasis = std::ptr::null_mut();
    assert_eq!(unsafe { pxp_basis_new(4, &mut basis) }, PxpStatus::Ok);
    assert!(!basis.is_null());

    let mut dim = 0u64;
    assert_eq!(unsafe { pxp_basis_dim(basis, &mut dim) }, PxpStatus::Ok);
    assert_eq!(dim, 8);

    let mut pattern = 0u64;
    assert_eq!(unsafe { pxp_basis_pattern(basis, 4, &mut pattern) }, PxpStatus::Ok);
    assert_eq!(pattern, 0b0101);

    let mut ordinal = 0u64;
    assert_eq!(unsafe { pxp_basis_index_of(basis, 0b0101, &mut ordinal) }, PxpStatus::Ok);
    assert_eq!(ordinal, 4);
    assert_eq!(
        unsafe { pxp_basis_index_of(basis, 0b0011, &mut ordinal) },
        PxpStatus::InvalidState
    );
    assert_eq!(
        unsafe { pxp_basis_pattern(basis, 99, &mut pattern) },
        PxpStatus::DimensionMismatch
    );

    unsafe { pxp_basis_free(basis) };
    unsafe { pxp_basis_free(std::ptr::null_mut()) }; // no-op
}

#[test]
fn scalar_helpers() {
    let mut fib = 0u64;
    assert_eq!(unsafe { pxp_fibonacci(14, &mut fib) }, PxpStatus::Ok);
    assert_eq!(fib, 377);
    assert_eq!(unsafe { pxp_fibonacci(0, &mut fib) }, PxpStatus::Size);

    assert!((pxp_bessel_j0(0.0) - 1.0).abs() < 1e-15);
    assert!(pxp_bessel_j0(2.4048).abs() < 5e-4);

    let mut z = 0.0f64;
    assert_eq!(unsafe { pxp_ergodic_z(1, 4, &mut z) }, PxpStatus::Ok);
    assert!((z + 0.25).abs() < 1e-15);
    assert_eq!(unsafe { pxp_ergodic_z(9, 4, &mut z) }, PxpStatus::Domain);

    assert!((pxp_revival_index(0.625, 5.0) - 8.0).abs() < 1e-12);
    assert!(pxp_revival_index(0.0, 5.0).is_infinite());
}

#[test]
fn error_codes_and_messages() {
    let mut basis: *mut PxpBasis = std::ptr::null_mut();
    assert_eq!(unsafe { pxp_basis_new(0, &mut basis) }, PxpStatus::Size);
    let needed = unsafe { pxp_last_error_message(std::ptr::null_mut(), 0) };
    assert!(needed > 0);
    let mut buffer = vec![0 as c_char; needed + 1];
    let written = unsafe { pxp_last_error_message(buffer.as_mut_ptr(), buffer.len()) };
    assert_eq!(written, needed);
    let message = unsafe { CStr::from_ptr(buffer.as_ptr()) }.to_str().unwrap();
    assert!(message.contains("size"), "{message}");

    assert_eq!(unsafe { pxp_basis_new(4, std::ptr::null_mut()) }, PxpStatus::NullPointer);
}

#[test]
fn propagator_pipeline() {
    let mut propagator: *mut PxpPropagator = std::ptr::null_mut();
    assert_eq!(
        unsafe { pxp_propagator_new(8, 2.4, 5.0, 128, &mut propagator) },
        PxpStatus::Ok
    );
    let mut dim = 0u64;
    assert_eq!(unsafe { pxp_propagator_dim(propagator, &mut dim) }, PxpStatus::Ok);
    assert_eq!(dim, 55);

    let mut defect = 1.0f64;
    assert_eq!(
        unsafe { pxp_propagator_unitarity_defect(propagator, &mut defect) },
        PxpStatus::Ok
    );
    assert!(defect < 1e-8);

    let neel = CString::new("neel").unwrap();
    let mut fidelities = vec![0.0f64; 11];
    assert_eq!(
        unsafe { pxp_fidelity_orbit(propagator, neel.as_ptr(), 10, fidelities.as_mut_ptr()) },
        PxpStatus::Ok
    );
    assert!((fidelities[0] - 1.0).abs() < 1e-12);
    assert!(fidelities.iter().all(|&f| (0.0..=1.0 + 1e-9).contains(&f)));

    let mut quasi = vec![0.0f64; dim as usize];
    let mut weights = vec![0.0f64; dim as usize];
    assert_eq!(
        unsafe {
            pxp_floquet_spectrum(propagator, neel.as_ptr(), quasi.as_mut_ptr(), weights.as_mut_ptr())
        },
        PxpStatus::Ok
    );
    assert!(quasi.windows(2).all(|w| w[0] <= w[1]), "sorted quasi-energies");
    assert!(quasi.iter().all(|&e| e > -2.5 - 1e-9 && e <= 2.5 + 1e-9));
    let total: f64 = weights.iter().sum();
    assert!((total - 1.0).abs() < 1e-10, "overlap completeness {total}");

    let mut spacing = 0.0f64;
    assert_eq!(
        unsafe { pxp_dominant_spacing(propagator, neel.as_ptr(), 0.3, &mut spacing) },
        PxpStatus::Ok
    );
    assert!(spacing > 0.0 && spacing.is_finite());
    let n_rev = pxp_revival_index(spacing, 5.0);
    assert!(n_rev > 1.0 && n_rev < 1e3);

    // stroboscopic chain magnetization
    let mut z_series = vec![0.0f64; 6];
    assert_eq!(
        unsafe { pxp_chain_z_series(propagator, neel.as_ptr(), 5, z_series.as_mut_ptr()) },
        PxpStatus::Ok
    );
    assert!((z_series[0] - 0.0).abs() < 1e-12, "Néel chain Z starts at 0");
    assert!(z_series.iter().all(|z| (-1.0..=1.0).contains(z)));

    // a bad state name surfaces as a usage error
    let bogus = CString::new("wibble").unwrap();
    assert_eq!(
        unsafe { pxp_fidelity_orbit(propagator, bogus.as_ptr(), 2, fidelities.as_mut_ptr()) },
        PxpStatus::Usage
    );

    unsafe { pxp_propagator_free(propagator) };
}

#[test]
fn fit_recovers_synthetic_parameters() {
    let omega_d = 5.0;
    let gamma = 0.5;
    let alpha = -2.0;
    let hs: Vec<f64> = (0..20).map(|k| 1.0 + 0.4 * k as f64).collect();
    let nrev: Vec<f64> = hs
        .iter()
        .map(|&h| omega_d / (gamma * pxp_bessel_j0(h / omega_d)) + alpha)
        .collect();
    let mut result = PxpFitResult {
        gamma: 0.0,
        gamma_err: 0.0,
        alpha: 0.0,
        alpha_err: 0.0,
        residual_norm: 0.0,
        points_used: 0,
    };
    assert_eq!(
        unsafe {
            pxp_fit_nrev(
                hs.as_ptr(),
                nrev.as_ptr(),
                hs.len(),
                omega_d,
                0,
                1.0,
                2.2048 * omega_d,
                &mut result,
            )
        },
        PxpStatus::Ok
    );
    assert!((result.gamma - gamma).abs() < 1e-9);
    assert!((result.alpha - alpha).abs() < 1e-9);
    assert!(result.points_used >= 3);

    // model code out of range
    assert_eq!(
        unsafe {
            pxp_fit_nrev(hs.as_ptr(), nrev.as_ptr(), hs.len(), omega_d, 7, 1.0, 11.0, &mut result)
        },
        PxpStatus::Usage
    );
}

#[test]
fn generated_header_covers_the_surface() {
    let header_path = concat!(env!("CARGO_MANIFEST_DIR"), "/include/pxp_floquet.h");
    let header = std::fs::read_to_string(header_path).expect("header generated at build time");
    for symbol in [
        "pxp_version",
        "pxp_last_error_message",
        "pxp_fibonacci",
        "pxp_bessel_j0",
        "pxp_ergodic_z",
        "pxp_revival_index",
        "pxp_basis_new",
        "pxp_basis_free",
        "pxp_basis_dim",
        "pxp_basis_pattern",
        "pxp_basis_index_of",
        "pxp_propagator_new",
        "pxp_propagator_free",
        "pxp_propagator_dim",
        "pxp_propagator_unitarity_defect",
        "pxp_fidelity_orbit",
        "pxp_floquet_spectrum",
        "pxp_dominant_spacing",
        "pxp_chain_z_series",
        "pxp_fit_nrev",
        "PxpStatus",
        "PxpFitResult",
    ] {
        assert!(header.contains(symbol), "header is missing {symbol}");
    }
    assert!(header.contains("typedef struct PxpBasis PxpBasis;"), "opaque basis handle");
    assert!(
        header.contains("typedef struct PxpPropagator PxpPropagator;"),
        "opaque propagator handle"
    );
}
