//! Floquet dynamics of the periodically driven PXP chain.
//!
//! The chain lives in the Rydberg-blockaded subspace (no two adjacent
//! excitations, dimension F(L+2)), driven by a sinusoidal detuning term.
//! The crate covers the full pipeline: basis enumeration, restricted
//! operators, split-step propagation, Floquet spectra and overlap profiles,
//! revival-index extraction with Bessel-model fits, thermalization
//! diagnostics, and parallel parameter sweeps with CSV/JSON reporting.
//!
//! Quick start:
//!
//! ```
//! use pxp_floquet::basis::BlockadedBasis;
//! use pxp_floquet::propagation::{DriveParams, SplitStepPropagator};
//! use pxp_floquet::{floquet, states};
//!
//! let basis = BlockadedBasis::enumerate(8).unwrap();
//! let engine = SplitStepPropagator::new(&basis).unwrap();
//! let params = DriveParams::new(2.4, 5.0).unwrap();
//! let propagator = engine.one_period(&params, 128).unwrap();
//! let decomposition = floquet::decompose(&propagator).unwrap();
//! let profile = floquet::overlaps(&decomposition, &states::neel(&basis), "neel").unwrap();
//! let spacing = floquet::dominant_spacing(&decomposition, &profile, 0.3).unwrap();
//! let n_rev = floquet::revival_index(spacing, params.omega_d);
//! assert!(n_rev > 1.0);
//! ```

pub mod basis;
pub mod bessel;
pub mod cli;
pub mod config;
pub mod error;
pub mod fit;
pub mod floquet;
pub mod manifest;
pub mod operators;
pub mod peaks;
pub mod propagation;
pub mod report;
pub mod states;
pub mod sweep;
pub mod thermal;

pub use error::{Error, Result};
