//! Least-squares fits of the revival index against the Bessel model.
//!
//! The offset model n_rev(h) = ω_d/(γ·J₀(h/ω_d)) + α is linear in (1/γ, α)
//! under the regressor x = ω_d/J₀(h/ω_d), so both models reduce to ordinary
//! linear least squares with closed-form solutions. Parameter uncertainties
//! are the standard regression errors; γ's error follows from the slope
//! error by the delta method.

use crate::bessel::bessel_j0;
use crate::error::{Error, Result};
use serde::Serialize;

/// Which revival-index model to fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FitModel {
    /// n_rev = ω_d/(γ·J₀(h/ω_d)) + α.
    WithOffset,
    /// n_rev = ω_d/(δ·J₀(h/ω_d)); the proportionality factor is reported in
    /// the `gamma` slot.
    Proportional,
}

/// Fitted parameters with standard errors.
#[derive(Debug, Clone, Serialize)]
pub struct FitResult {
    pub model: FitModel,
    pub gamma: f64,
    pub gamma_err: f64,
    pub alpha: f64,
    pub alpha_err: f64,
    /// √RSS over the accepted points.
    pub residual_norm: f64,
    /// Points that survived the window and regressor guards.
    pub points_used: usize,
}

/// Rejection threshold for near-singular regressors ω_d/J₀.
const MIN_BESSEL: f64 = 1e-3;

/// Fit window in h, inclusive, as multiples of ω_d on the upper edge.
pub fn default_fit_window(omega_d: f64) -> (f64, f64) {
    (1.0, 2.2048 * omega_d)
}

/// Fit (h, n_rev) samples inside `window` against the chosen model.
pub fn fit_nrev(
    points: &[(f64, f64)],
    omega_d: f64,
    model: FitModel,
    window: (f64, f64),
) -> Result<FitResult> {
    if !(omega_d > 0.0) {
        return Err(Error::Domain(format!("omega_d {omega_d} must be positive")));
    }
    let accepted: Vec<(f64, f64)> = points
        .iter()
        .copied()
        .filter(|&(h, n_rev)| {
            h >= window.0
                && h <= window.1
                && n_rev.is_finite()
                && bessel_j0(h / omega_d).abs() >= MIN_BESSEL
        })
        .collect();
    if accepted.len() < 3 {
        return Err(Error::Fit(format!(
            "{} usable points inside window [{}, {}]; need at least 3",
            accepted.len(),
            window.0,
            window.1
        )));
    }
    let xy: Vec<(f64, f64)> = accepted
        .iter()
        .map(|&(h, y)| (omega_d / bessel_j0(h / omega_d), y))
        .collect();
    let n = xy.len() as f64;
    match model {
        FitModel::WithOffset => {
            let sx: f64 = xy.iter().map(|p| p.0).sum();
            let sy: f64 = xy.iter().map(|p| p.1).sum();
            let sxx: f64 = xy.iter().map(|p| p.0 * p.0).sum();
            let sxy: f64 = xy.iter().map(|p| p.0 * p.1).sum();
            let det = n * sxx - sx * sx;
            if det.abs() < 1e-12 * (n * sxx).abs().max(1.0) {
                return Err(Error::Fit("singular design matrix".into()));
            }
            let slope = (n * sxy - sx * sy) / det;
            let alpha = (sxx * sy - sx * sxy) / det;
            if !(slope > 0.0) {
                return Err(Error::Fit(format!("non-positive slope {slope}; gamma undefined")));
            }
            let rss: f64 = xy
                .iter()
                .map(|&(x, y)| {
                    let r = y - (slope * x + alpha);
                    r * r
                })
                .sum();
            let dof = (xy.len() as f64 - 2.0).max(1.0);
            let s2 = rss / dof;
            let slope_err = (s2 * n / det).sqrt();
            let alpha_err = (s2 * sxx / det).sqrt();
            Ok(FitResult {
                model,
                gamma: 1.0 / slope,
                gamma_err: slope_err / (slope * slope),
                alpha,
                alpha_err,
                residual_norm: rss.sqrt(),
                points_used: xy.len(),
            })
        }
        FitModel::Proportional => {
            let sxx: f64 = xy.iter().map(|p| p.0 * p.0).sum();
            let sxy: f64 = xy.iter().map(|p| p.0 * p.1).sum();
            if sxx < 1e-300 {
                return Err(Error::Fit("singular design matrix".into()));
            }
            let slope = sxy / sxx;
            if !(slope > 0.0) {
                return Err(Error::Fit(format!("non-positive slope {slope}; delta undefined")));
            }
            let rss: f64 = xy
                .iter()
                .map(|&(x, y)| {
                    let r = y - slope * x;
                    r * r
                })
                .sum();
            let dof = (xy.len() as f64 - 1.0).max(1.0);
            let slope_err = (rss / dof / sxx).sqrt();
            Ok(FitResult {
                model,
                gamma: 1.0 / slope,
                gamma_err: slope_err / (slope * slope),
                alpha: 0.0,
                alpha_err: 0.0,
                residual_norm: rss.sqrt(),
                points_used: xy.len(),
            })
        }
    }
}

/// Minimal revival index implied by an offset-model fit: ω_d/γ + α.
pub fn min_revival_index(fit: &FitResult, omega_d: f64) -> f64 {
    omega_d / fit.gamma + fit.alpha
}
