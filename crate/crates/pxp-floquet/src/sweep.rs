//! Parameter sweeps over the driving plane (h, ω_d).
//!
//! Grid cells are independent tasks over shared read-only kernels; results
//! are merged in grid order (never completion order), so identical grids
//! produce identical tables. Fidelity sweeps propagate the initial state
//! vector period by period, which is far cheaper than assembling the full
//! propagator when only a handful of stroboscopic times are requested; the
//! revival-index profile assembles and eigendecomposes the full propagator
//! per amplitude.

use crate::basis::BlockadedBasis;
use crate::error::{Error, Result};
use crate::floquet::{decompose, dominant_spacing, overlaps, revival_index};
use crate::propagation::{DriveParams, SplitStepPropagator, DEFAULT_STEPS_PER_PERIOD};
use crate::states::{neel, polarized, theta_plus, StateVector};
use faer::Mat;
use num_complex::Complex64;
use rayon::prelude::*;

/// Initial-state selector, mirroring the CLI syntax
/// `polarized | neel | theta:<radians>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateSpec {
    Polarized,
    Neel,
    Theta(f64),
}

impl StateSpec {
    /// Instantiate on a basis.
    pub fn build(&self, basis: &BlockadedBasis) -> Result<StateVector> {
        match *self {
            StateSpec::Polarized => Ok(polarized(basis)),
            StateSpec::Neel => Ok(neel(basis)),
            StateSpec::Theta(theta) => theta_plus(basis, theta),
        }
    }

    /// Canonical label used in CSV output.
    pub fn label(&self) -> String {
        match *self {
            StateSpec::Polarized => "polarized".into(),
            StateSpec::Neel => "neel".into(),
            StateSpec::Theta(theta) => format!("theta:{theta}"),
        }
    }

    /// Parse the CLI syntax.
    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "polarized" => Ok(StateSpec::Polarized),
            "neel" => Ok(StateSpec::Neel),
            other => match other.strip_prefix("theta:") {
                Some(angle) => angle
                    .parse::<f64>()
                    .map(StateSpec::Theta)
                    .map_err(|_| Error::Usage(format!("bad theta angle in state '{other}'"))),
                None => Err(Error::Usage(format!(
                    "unknown state '{other}' (expected polarized | neel | theta:<radians>)"
                ))),
            },
        }
    }
}

/// A rectangular sweep over (ω_d, h) at fixed L and initial state.
#[derive(Debug, Clone)]
pub struct SweepGrid {
    pub l: usize,
    pub state: StateSpec,
    /// Drive amplitudes, ascending, all ≥ 0.
    pub h_values: Vec<f64>,
    /// Drive frequencies, ascending, all > 0.
    pub omega_d_values: Vec<f64>,
    /// Stroboscopic steps to record, ascending.
    pub n_values: Vec<usize>,
    pub steps_per_period: usize,
}

impl SweepGrid {
    fn validate(&self) -> Result<()> {
        if self.h_values.is_empty() || self.omega_d_values.is_empty() || self.n_values.is_empty() {
            return Err(Error::Size("sweep grid has an empty axis".into()));
        }
        if self.h_values.iter().any(|&h| h < 0.0) {
            return Err(Error::Domain("sweep amplitudes must be >= 0".into()));
        }
        if self.omega_d_values.iter().any(|&w| w <= 0.0) {
            return Err(Error::Domain("sweep frequencies must be > 0".into()));
        }
        if self.h_values.windows(2).any(|w| w[0] > w[1])
            || self.omega_d_values.windows(2).any(|w| w[0] > w[1])
        {
            return Err(Error::Domain("sweep axes must be ascending".into()));
        }
        Ok(())
    }
}

/// One sweep table row; `fidelity` is None when the cell's propagation
/// failed (the sweep continues and the cell is flagged).
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub l: usize,
    pub state: String,
    pub omega_d: f64,
    pub h: f64,
    pub n: usize,
    pub fidelity: Option<f64>,
}

/// Stroboscopic fidelities ℱ(nT) over the grid, rows in deterministic
/// (ω_d, h, n) order.
///
/// All amplitude cells of one frequency advance together as columns of a
/// single matrix, so each Strang substep is one kernel·matrix product; the
/// drive phase differs per column only through the scalar phase integral,
/// applied as e^{iφ_c·n_k} lookups. The phase profile repeats every period.
pub fn fidelity_sweep(grid: &SweepGrid) -> Result<Vec<SweepRow>> {
    grid.validate()?;
    if grid.steps_per_period < 16 {
        return Err(Error::Domain(format!(
            "steps {} below the minimum of 16",
            grid.steps_per_period
        )));
    }
    let basis = BlockadedBasis::enumerate(grid.l)?;
    let psi0 = grid.state.build(&basis)?;
    let engine = SplitStepPropagator::new(&basis)?;
    let label = grid.state.label();
    let n_max = *grid.n_values.last().expect("validated nonempty");
    let dim = basis.dim();
    let cells = grid.h_values.len();
    let number = crate::operators::number_diagonal(&basis);
    let max_count = number.iter().map(|&n| n as usize).max().unwrap_or(0);

    let mut rows = Vec::with_capacity(grid.omega_d_values.len() * cells * grid.n_values.len());
    for &omega_d in &grid.omega_d_values {
        let period = 2.0 * std::f64::consts::PI / omega_d;
        let dt = period / grid.steps_per_period as f64;
        let kernel = engine.spectral_exponential(dt);
        // per-substep half-interval phase integrals, identical every period
        let drive = |h: f64, t1: f64, t2: f64| {
            -(h / omega_d) * ((omega_d * t2).cos() - (omega_d * t1).cos())
        };
        let phase_pairs: Vec<(Vec<f64>, Vec<f64>)> = (0..grid.steps_per_period)
            .map(|k| {
                let a = k as f64 * dt;
                let mid = a + 0.5 * dt;
                let b = a + dt;
                let first = grid.h_values.iter().map(|&h| drive(h, a, mid)).collect();
                let second = grid.h_values.iter().map(|&h| drive(h, mid, b)).collect();
                (first, second)
            })
            .collect();

        let mut m = Mat::<Complex64>::from_fn(dim, cells, |i, _| psi0.amplitudes()[i]);
        let mut failed = vec![false; cells];
        let mut results = vec![vec![None; grid.n_values.len()]; cells];
        let mut record_at = 0usize;
        if grid.n_values[0] == 0 {
            for cell in results.iter_mut() {
                cell[0] = Some(1.0);
            }
            record_at = 1;
        }
        for n in 1..=n_max {
            for (first, second) in &phase_pairs {
                scale_columns_by_phase(&mut m, &number, first, max_count);
                m = &kernel * &m;
                scale_columns_by_phase(&mut m, &number, second, max_count);
            }
            for (c, flag) in failed.iter_mut().enumerate() {
                let norm: f64 = (0..dim).map(|i| m[(i, c)].norm_sqr()).sum();
                if (norm.sqrt() - 1.0).abs() > 1e-6 {
                    *flag = true;
                }
            }
            while record_at < grid.n_values.len() && grid.n_values[record_at] == n {
                for c in 0..cells {
                    if !failed[c] {
                        let mut overlap = Complex64::ZERO;
                        for i in 0..dim {
                            overlap += psi0.amplitudes()[i].conj() * m[(i, c)];
                        }
                        results[c][record_at] = Some(overlap.norm_sqr());
                    }
                }
                record_at += 1;
            }
        }
        for (hi, &h) in grid.h_values.iter().enumerate() {
            for (ni, &n) in grid.n_values.iter().enumerate() {
                rows.push(SweepRow {
                    l: grid.l,
                    state: label.clone(),
                    omega_d,
                    h,
                    n,
                    fidelity: results[hi][ni],
                });
            }
        }
    }
    Ok(rows)
}

/// Multiply column c by e^{i·phase[c]·n_i} per row i, using precomputed
/// powers of the per-column base phase (the excitation count n_i is a small
/// integer).
fn scale_columns_by_phase(
    m: &mut Mat<Complex64>,
    number: &[f64],
    phases: &[f64],
    max_count: usize,
) {
    let dim = m.nrows();
    let mut powers = vec![Complex64::ONE; max_count + 1];
    for (c, &phase) in phases.iter().enumerate() {
        let base = Complex64::from_polar(1.0, phase);
        let mut acc = Complex64::ONE;
        for p in powers.iter_mut() {
            *p = acc;
            acc *= base;
        }
        for i in 0..dim {
            m[(i, c)] *= powers[number[i] as usize];
        }
    }
}

/// One point of the revival-index profile.
#[derive(Debug)]
pub struct NrevPoint {
    pub h: f64,
    /// ω_d/Δε, or the per-point analysis error (no arc, integration failure).
    pub outcome: Result<f64>,
}

/// Revival-index profile n_rev(h) at fixed (L, ω_d): per amplitude, build
/// the one-period propagator, eigendecompose, project onto the Néel state,
/// and convert the dominant spacing. Analysis failures are carried per
/// point; the profile itself only fails on setup errors.
pub fn nrev_profile(
    h_values: &[f64],
    omega_d: f64,
    l: usize,
    eta: f64,
    steps_per_period: usize,
) -> Result<Vec<NrevPoint>> {
    if h_values.is_empty() {
        return Err(Error::Size("empty amplitude grid".into()));
    }
    let basis = BlockadedBasis::enumerate(l)?;
    let engine = SplitStepPropagator::new(&basis)?;
    let psi0 = neel(&basis);
    let points: Vec<NrevPoint> = h_values
        .par_iter()
        .map(|&h| {
            let outcome = (|| {
                let params = DriveParams::new(h, omega_d)?;
                let propagator = engine.one_period(&params, steps_per_period)?;
                let decomposition = decompose(&propagator)?;
                let profile = overlaps(&decomposition, &psi0, "neel")?;
                let spacing = dominant_spacing(&decomposition, &profile, eta)?;
                Ok(revival_index(spacing, omega_d))
            })();
            NrevPoint { h, outcome }
        })
        .collect();
    Ok(points)
}

/// Default steps used by sweep commands when unspecified.
pub fn default_steps() -> usize {
    DEFAULT_STEPS_PER_PERIOD
}
