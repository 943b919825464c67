//! Eigenstructure of the one-period propagator: quasi-energies folded into
//! the Floquet Brillouin zone, overlap profiles, the dominant quasi-energy
//! spacing Δε, and the predicted revival index n_rev = ω_d/Δε.
//!
//! A unitary U is normal, so it shares eigenvectors with the commuting
//! Hermitian pair B = (U + U†)/2 and C = (U − U†)/(2i). The decomposition
//! here diagonalizes B with a self-adjoint eigensolver and then diagonalizes
//! C inside each near-degenerate B-cluster, which yields orthonormal
//! eigenvectors even under degeneracy; the eigenvalues are recovered as
//! Rayleigh quotients and renormalized onto the unit circle.

use crate::error::{Error, Result};
use crate::propagation::PropagatorMatrix;
use crate::states::StateVector;
use faer::Mat;
use num_complex::Complex64;

/// Quasi-energy gap below which two Floquet states are treated as one
/// degenerate eigenspace.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// Default dominant-set threshold as a fraction of the maximum overlap.
pub const DEFAULT_ETA: f64 = 0.3;

/// Eigendecomposition of a one-period propagator.
#[derive(Debug, Clone)]
pub struct FloquetDecomposition {
    quasi_energies: Vec<f64>,
    eigenvalues: Vec<Complex64>,
    eigenvectors: Mat<Complex64>,
    period: f64,
    omega_d: f64,
}

impl FloquetDecomposition {
    /// Quasi-energies, ascending, each in (−ω_d/2, ω_d/2].
    pub fn quasi_energies(&self) -> &[f64] {
        &self.quasi_energies
    }

    /// Unit-circle eigenvalues λ_m = e^{−iε_m T}, ordered like the
    /// quasi-energies.
    pub fn eigenvalues(&self) -> &[Complex64] {
        &self.eigenvalues
    }

    /// Floquet eigenvectors as matrix columns, ordered like the
    /// quasi-energies.
    pub fn eigenvectors(&self) -> &Mat<Complex64> {
        &self.eigenvectors
    }

    /// Driving period T.
    pub fn period(&self) -> f64 {
        self.period
    }

    /// Driving frequency ω_d.
    pub fn omega_d(&self) -> f64 {
        self.omega_d
    }

    /// Matrix dimension.
    pub fn dim(&self) -> usize {
        self.quasi_energies.len()
    }

    /// Spectral width max ε − min ε.
    pub fn bandwidth(&self) -> f64 {
        match (self.quasi_energies.first(), self.quasi_energies.last()) {
            (Some(lo), Some(hi)) => hi - lo,
            _ => 0.0,
        }
    }
}

/// Fold a raw energy into the Floquet Brillouin zone (−ω_d/2, ω_d/2].
pub fn fold_quasi_energy(energy: f64, omega_d: f64) -> f64 {
    let k = (energy / omega_d - 0.5).ceil();
    energy - k * omega_d
}

/// Eigendecompose a one-period propagator.
pub fn decompose(propagator: &PropagatorMatrix) -> Result<FloquetDecomposition> {
    let defect = propagator.unitarity_defect();
    if defect > 1e-8 {
        return Err(Error::Decomposition(format!(
            "propagator violates unitarity by {defect:.3e}"
        )));
    }
    let u = propagator.matrix();
    let dim = u.nrows();
    let period = propagator.params().period();
    let omega_d = propagator.params().omega_d;

    // Commuting Hermitian pair.
    let real_part = Mat::<Complex64>::from_fn(dim, dim, |i, j| (u[(i, j)] + u[(j, i)].conj()) * 0.5);
    let imag_part = Mat::<Complex64>::from_fn(dim, dim, |i, j| {
        (u[(i, j)] - u[(j, i)].conj()) * Complex64::new(0.0, -0.5)
    });
    let evd = real_part
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|e| Error::Decomposition(format!("eigensolver failed: {e:?}")))?;
    let cosines: Vec<f64> = (0..dim).map(|i| evd.S()[i].re).collect();
    let mut vectors = evd.U().to_owned();

    // Resolve each B-cluster by diagonalizing C restricted to it.
    const CLUSTER_TOL: f64 = 1e-7;
    let mut start = 0;
    while start < dim {
        let mut end = start + 1;
        while end < dim && (cosines[end] - cosines[end - 1]).abs() < CLUSTER_TOL {
            end += 1;
        }
        let width = end - start;
        if width > 1 {
            let block = vectors.as_ref().submatrix(0, start, dim, width).to_owned();
            let projected = block.adjoint() * &imag_part * &block;
            let hermitized = Mat::<Complex64>::from_fn(width, width, |i, j| {
                (projected[(i, j)] + projected[(j, i)].conj()) * 0.5
            });
            let sub = hermitized
                .self_adjoint_eigen(faer::Side::Lower)
                .map_err(|e| Error::Decomposition(format!("cluster eigensolver failed: {e:?}")))?;
            let rotated = &block * sub.U();
            for (offset, col) in (start..end).enumerate() {
                for row in 0..dim {
                    vectors[(row, col)] = rotated[(row, offset)];
                }
            }
        }
        start = end;
    }

    // Rayleigh quotients give the eigenvalues; project onto the unit circle.
    let applied = u * &vectors;
    let mut order: Vec<usize> = (0..dim).collect();
    let mut raw: Vec<(f64, Complex64)> = Vec::with_capacity(dim);
    for m in 0..dim {
        let mut lambda = Complex64::ZERO;
        for i in 0..dim {
            lambda += vectors[(i, m)].conj() * applied[(i, m)];
        }
        let modulus = lambda.norm();
        if (modulus - 1.0).abs() > 1e-8 {
            return Err(Error::Decomposition(format!(
                "eigenvalue modulus {modulus} off the unit circle"
            )));
        }
        let lambda = lambda / modulus;
        let eps = fold_quasi_energy(-lambda.arg() / period, omega_d);
        raw.push((eps, lambda));
    }
    order.sort_by(|&a, &b| raw[a].0.partial_cmp(&raw[b].0).unwrap());

    let quasi_energies: Vec<f64> = order.iter().map(|&m| raw[m].0).collect();
    let eigenvalues: Vec<Complex64> = order.iter().map(|&m| raw[m].1).collect();
    let mut eigenvectors = Mat::<Complex64>::zeros(dim, dim);
    for (col, &m) in order.iter().enumerate() {
        for row in 0..dim {
            eigenvectors[(row, col)] = vectors[(row, m)];
        }
    }

    // Stabilizing orthogonalization pass inside near-degenerate clusters of
    // the sorted quasi-energies.
    let mut start = 0;
    while start < dim {
        let mut end = start + 1;
        while end < dim && (quasi_energies[end] - quasi_energies[end - 1]).abs() < 1e-10 {
            end += 1;
        }
        if end - start > 1 {
            gram_schmidt_columns(&mut eigenvectors, start, end);
        }
        start = end;
    }

    let decomposition = FloquetDecomposition {
        quasi_energies,
        eigenvalues,
        eigenvectors,
        period,
        omega_d,
    };
    let reconstruction = reconstruction_defect(&decomposition, u);
    if reconstruction > 1e-7 {
        return Err(Error::Decomposition(format!(
            "eigen-reconstruction defect {reconstruction:.3e}"
        )));
    }
    Ok(decomposition)
}

/// Modified Gram–Schmidt over the column range [start, end).
fn gram_schmidt_columns(m: &mut Mat<Complex64>, start: usize, end: usize) {
    let dim = m.nrows();
    for col in start..end {
        for prev in start..col {
            let mut proj = Complex64::ZERO;
            for row in 0..dim {
                proj += m[(row, prev)].conj() * m[(row, col)];
            }
            for row in 0..dim {
                let correction = proj * m[(row, prev)];
                m[(row, col)] -= correction;
            }
        }
        let norm: f64 = (0..dim).map(|row| m[(row, col)].norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.0 {
            for row in 0..dim {
                m[(row, col)] /= norm;
            }
        }
    }
}

/// ‖V diag(λ) V† − U‖_max.
pub fn reconstruction_defect(decomposition: &FloquetDecomposition, u: &Mat<Complex64>) -> f64 {
    let dim = decomposition.dim();
    let v = &decomposition.eigenvectors;
    let mut scaled = v.clone();
    for m in 0..dim {
        let lambda = decomposition.eigenvalues[m];
        for row in 0..dim {
            scaled[(row, m)] *= lambda;
        }
    }
    let rebuilt = &scaled * v.adjoint();
    let mut worst = 0.0f64;
    for i in 0..dim {
        for j in 0..dim {
            worst = worst.max((rebuilt[(i, j)] - u[(i, j)]).norm());
        }
    }
    worst
}

/// Overlap profile of an initial state against a Floquet decomposition:
/// pairs (ε_m, |c_m|²) in quasi-energy order.
#[derive(Debug, Clone)]
pub struct OverlapProfile {
    pairs: Vec<(f64, f64)>,
    label: String,
    period: f64,
}

impl OverlapProfile {
    /// (ε_m, |c_m|²) pairs, ascending in ε.
    pub fn pairs(&self) -> &[(f64, f64)] {
        &self.pairs
    }

    /// Label of the source state.
    pub fn label(&self) -> &str {
        &self.label
    }

    /// Σ|c_m|².
    pub fn total_weight(&self) -> f64 {
        self.pairs.iter().map(|&(_, w)| w).sum()
    }

    /// Stroboscopic fidelity reconstructed from the spectral expansion:
    /// ℱ(nT) = |Σ_m |c_m|² e^{−iε_m nT}|².
    pub fn stroboscopic_fidelity(&self, n: usize) -> f64 {
        let t = n as f64 * self.period;
        self.pairs
            .iter()
            .map(|&(eps, w)| Complex64::from_polar(w, -eps * t))
            .sum::<Complex64>()
            .norm_sqr()
    }
}

/// Project `psi0` onto the Floquet eigenbasis.
pub fn overlaps(
    decomposition: &FloquetDecomposition,
    psi0: &StateVector,
    label: impl Into<String>,
) -> Result<OverlapProfile> {
    let dim = decomposition.dim();
    if psi0.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, actual: psi0.dim() });
    }
    let v = &decomposition.eigenvectors;
    let pairs = (0..dim)
        .map(|m| {
            let mut c = Complex64::ZERO;
            for row in 0..dim {
                c += v[(row, m)].conj() * psi0.amplitudes()[row];
            }
            (decomposition.quasi_energies[m], c.norm_sqr())
        })
        .collect();
    Ok(OverlapProfile { pairs, label: label.into(), period: decomposition.period })
}

/// Dominant quasi-energy spacing Δε: the gap between the dominant state of
/// smallest |ε| and its nearest dominant neighbor at a distinct quasi-energy.
///
/// The dominant set is {m : |c_m|² ≥ eta·max |c|²}. Partners within
/// [`DEGENERACY_TOL`] of the anchor belong to the same degenerate eigenspace
/// and are skipped.
pub fn dominant_spacing(
    decomposition: &FloquetDecomposition,
    profile: &OverlapProfile,
    eta: f64,
) -> Result<f64> {
    if !(0.0..1.0).contains(&eta) || eta <= 0.0 {
        return Err(Error::Domain(format!("eta {eta} outside (0, 1)")));
    }
    if profile.pairs.len() != decomposition.dim() {
        return Err(Error::DimensionMismatch {
            expected: decomposition.dim(),
            actual: profile.pairs.len(),
        });
    }
    let max_weight = profile.pairs.iter().map(|&(_, w)| w).fold(0.0, f64::max);
    let dominant: Vec<(f64, f64)> = profile
        .pairs
        .iter()
        .copied()
        .filter(|&(_, w)| w >= eta * max_weight)
        .collect();
    if dominant.len() < 2 {
        return Err(Error::NoArc(format!(
            "dominant set has {} state(s) at eta {eta}",
            dominant.len()
        )));
    }
    let &(anchor, _) = dominant
        .iter()
        .min_by(|a, b| a.0.abs().partial_cmp(&b.0.abs()).unwrap())
        .expect("dominant set nonempty");
    let spacing = dominant
        .iter()
        .map(|&(eps, _)| (eps - anchor).abs())
        .filter(|&gap| gap > DEGENERACY_TOL)
        .fold(f64::INFINITY, f64::min);
    if !spacing.is_finite() {
        return Err(Error::NoArc(
            "all dominant states share one quasi-energy".into(),
        ));
    }
    Ok(spacing)
}

/// Predicted revival index n_rev = ω_d/Δε. A zero spacing signals the
/// divergent-revival (FSN) regime and maps to +∞ rather than an error.
pub fn revival_index(delta_eps: f64, omega_d: f64) -> f64 {
    omega_d / delta_eps
}
