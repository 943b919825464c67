//! Time evolution under Ĥ(t) = Ĥ_PXP − h·sin(ω_d t)·N̂ and assembly of the
//! one-period Floquet propagator.
//!
//! The integrator is second-order Strang splitting: per substep, a half-step
//! diagonal drive phase, the full-step static kernel exp(−i Ĥ_PXP δt), and a
//! second half-step drive phase. The drive phase is the exact analytic
//! integral of h·sin(ω_d t) over each half-interval, so the only splitting
//! error is the non-commutativity of the two generators. The static kernel
//! comes from one dense eigendecomposition of Ĥ_PXP per basis and is reused
//! across columns, periods, and every drive amplitude at fixed (L, δt).

use crate::basis::BlockadedBasis;
use crate::error::{Error, Result};
use crate::operators::{build_pxp, number_diagonal, OMEGA_RABI};
use crate::states::StateVector;
use faer::{Col, Mat};
use num_complex::Complex64;
use std::f64::consts::TAU;

/// Drive parameters (Ω, h, ω_d) with the period T = 2π/ω_d derived.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveParams {
    /// Rabi frequency Ω; fixed to 1 by the unit convention.
    pub omega_rabi: f64,
    /// Drive amplitude h, in units of Ω.
    pub h: f64,
    /// Drive frequency ω_d, in units of Ω.
    pub omega_d: f64,
}

impl DriveParams {
    /// Parameters at the standard Ω = 1.
    pub fn new(h: f64, omega_d: f64) -> Result<Self> {
        if !(omega_d > 0.0) {
            return Err(Error::Domain(format!("omega_d {omega_d} must be positive")));
        }
        Ok(Self { omega_rabi: OMEGA_RABI, h, omega_d })
    }

    /// Driving period T = 2π/ω_d.
    pub fn period(&self) -> f64 {
        TAU / self.omega_d
    }

    /// ∫ h·sin(ω_d t) dt over [t1, t2], evaluated analytically.
    fn drive_integral(&self, t1: f64, t2: f64) -> f64 {
        -(self.h / self.omega_d) * ((self.omega_d * t2).cos() - (self.omega_d * t1).cos())
    }
}

/// Default number of Strang substeps per driving period.
pub const DEFAULT_STEPS_PER_PERIOD: usize = 512;

/// Norm / unitarity drift beyond which evolution is rejected.
const DRIFT_LIMIT: f64 = 1e-6;

/// One-period Floquet propagator Û(T, 0) as a dense unitary.
#[derive(Debug, Clone)]
pub struct PropagatorMatrix {
    matrix: Mat<Complex64>,
    params: DriveParams,
    steps_per_period: usize,
    l: usize,
}

impl PropagatorMatrix {
    /// Matrix dimension.
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Chain length.
    pub fn sites(&self) -> usize {
        self.l
    }

    /// Dense matrix.
    pub fn matrix(&self) -> &Mat<Complex64> {
        &self.matrix
    }

    /// Drive parameters the propagator was built for.
    pub fn params(&self) -> DriveParams {
        self.params
    }

    /// Substeps per period used in assembly.
    pub fn steps_per_period(&self) -> usize {
        self.steps_per_period
    }

    /// ‖U†U − 1‖_max.
    pub fn unitarity_defect(&self) -> f64 {
        let gram = self.matrix.adjoint() * &self.matrix;
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { Complex64::ONE } else { Complex64::ZERO };
                worst = worst.max((gram[(i, j)] - want).norm());
            }
        }
        worst
    }

    /// U·ψ.
    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        if state.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), actual: state.dim() });
        }
        let col = Col::<Complex64>::from_fn(state.dim(), |i| state.amplitudes()[i]);
        let out = &self.matrix * &col;
        Ok(StateVector::from_raw(self.l, (0..state.dim()).map(|i| out[i]).collect()))
    }

    #[cfg(test)]
    pub(crate) fn from_matrix_for_tests(
        matrix: Mat<Complex64>,
        params: DriveParams,
        steps_per_period: usize,
        l: usize,
    ) -> Self {
        Self { matrix, params, steps_per_period, l }
    }
}

/// Split-step evolution engine for one blockaded basis.
///
/// Holds the dense eigendecomposition of Ĥ_PXP (real symmetric) and the
/// excitation-number diagonal. Immutable and shareable across threads.
pub struct SplitStepPropagator {
    l: usize,
    dim: usize,
    energies: Vec<f64>,
    modes: Mat<f64>,
    number: Vec<f64>,
}

impl SplitStepPropagator {
    /// Diagonalize Ĥ_PXP on `basis`.
    pub fn new(basis: &BlockadedBasis) -> Result<Self> {
        let dense = build_pxp(basis).to_dense();
        let dim = basis.dim();
        let real = Mat::<f64>::from_fn(dim, dim, |i, j| dense[(i, j)].re);
        let evd = real
            .self_adjoint_eigen(faer::Side::Lower)
            .map_err(|e| Error::Decomposition(format!("PXP eigendecomposition failed: {e:?}")))?;
        let energies = (0..dim).map(|i| evd.S()[i]).collect();
        Ok(Self {
            l: basis.sites(),
            dim,
            energies,
            modes: evd.U().to_owned(),
            number: number_diagonal(basis),
        })
    }

    /// Basis dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Chain length.
    pub fn sites(&self) -> usize {
        self.l
    }

    /// Eigenvalues of Ĥ_PXP, ascending.
    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// exp(−i Ĥ_PXP t) through the spectral decomposition.
    pub fn spectral_exponential(&self, t: f64) -> Mat<Complex64> {
        let d = self.dim;
        let mut phased = Mat::<Complex64>::zeros(d, d);
        for j in 0..d {
            let ph = Complex64::from_polar(1.0, -self.energies[j] * t);
            for i in 0..d {
                phased[(i, j)] = ph * self.modes[(i, j)];
            }
        }
        let modes_c = Mat::<Complex64>::from_fn(d, d, |i, j| Complex64::new(self.modes[(i, j)], 0.0));
        &phased * modes_c.transpose()
    }

    /// Evolve `state` from `t0` to `t1` with `steps` Strang substeps.
    pub fn propagate(
        &self,
        state: &StateVector,
        t0: f64,
        t1: f64,
        params: &DriveParams,
        steps: usize,
    ) -> Result<StateVector> {
        if t1 < t0 {
            return Err(Error::Domain(format!("t1 {t1} earlier than t0 {t0}")));
        }
        if steps < 1 {
            return Err(Error::Domain("steps must be >= 1".into()));
        }
        if state.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, actual: state.dim() });
        }
        let dt = (t1 - t0) / steps as f64;
        let kernel = self.spectral_exponential(dt);
        let mut psi = Col::<Complex64>::from_fn(self.dim, |i| state.amplitudes()[i]);
        for k in 0..steps {
            let a = t0 + k as f64 * dt;
            let mid = a + 0.5 * dt;
            let b = a + dt;
            self.phase_in_place(&mut psi, params.drive_integral(a, mid));
            psi = &kernel * &psi;
            self.phase_in_place(&mut psi, params.drive_integral(mid, b));
        }
        let out = StateVector::from_raw(self.l, (0..self.dim).map(|i| psi[i]).collect());
        let drift = (out.norm() - 1.0).abs();
        if drift > DRIFT_LIMIT {
            return Err(Error::Integration(format!(
                "norm drifted by {drift:.3e} over [{t0}, {t1}] with {steps} steps"
            )));
        }
        Ok(out)
    }

    /// Assemble Û(T, 0) column-by-column (one dense kernel product per
    /// substep).
    pub fn one_period(&self, params: &DriveParams, steps: usize) -> Result<PropagatorMatrix> {
        if steps < 16 {
            return Err(Error::Domain(format!("steps {steps} below the minimum of 16")));
        }
        let period = params.period();
        let dt = period / steps as f64;
        let kernel = self.spectral_exponential(dt);
        let mut u = Mat::<Complex64>::identity(self.dim, self.dim);
        for k in 0..steps {
            let a = k as f64 * dt;
            let mid = a + 0.5 * dt;
            let b = a + dt;
            self.scale_rows(&mut u, params.drive_integral(a, mid));
            u = &kernel * &u;
            self.scale_rows(&mut u, params.drive_integral(mid, b));
        }
        let result = PropagatorMatrix { matrix: u, params: *params, steps_per_period: steps, l: self.l };
        let defect = result.unitarity_defect();
        if defect > DRIFT_LIMIT {
            return Err(Error::Integration(format!(
                "one-period propagator unitarity defect {defect:.3e}"
            )));
        }
        Ok(result)
    }

    /// Multiply amplitudes by exp(+i·phase·n_k); the drive enters the
    /// Hamiltonian as −V(t)N̂, so its phase integral carries a plus sign.
    fn phase_in_place(&self, psi: &mut Col<Complex64>, phase: f64) {
        for i in 0..self.dim {
            psi[i] *= Complex64::from_polar(1.0, phase * self.number[i]);
        }
    }

    fn scale_rows(&self, m: &mut Mat<Complex64>, phase: f64) {
        for i in 0..self.dim {
            let f = Complex64::from_polar(1.0, phase * self.number[i]);
            for j in 0..self.dim {
                m[(i, j)] *= f;
            }
        }
    }
}

/// Iterated stroboscopic orbit ψ(nT) = Ûⁿ ψ₀ for n = 0..=n_max, computed by
/// repeated application rather than matrix powers.
pub fn stroboscopic_orbit(
    propagator: &PropagatorMatrix,
    psi0: &StateVector,
    n_max: usize,
) -> Result<Vec<StateVector>> {
    if psi0.dim() != propagator.dim() {
        return Err(Error::DimensionMismatch { expected: propagator.dim(), actual: psi0.dim() });
    }
    let mut orbit = Vec::with_capacity(n_max + 1);
    orbit.push(psi0.clone());
    let mut current = psi0.clone();
    for n in 1..=n_max {
        current = propagator.apply(&current)?;
        let drift = (current.norm() - 1.0).abs();
        if drift > DRIFT_LIMIT {
            return Err(Error::Integration(format!(
                "orbit norm drifted by {drift:.3e} at step {n}"
            )));
        }
        orbit.push(current.clone());
    }
    Ok(orbit)
}
