//! Initial states and the fidelity functional.
//!
//! The chain carries |θ₊⟩ = cos(θ)|0⟩ + sin(θ)|1⟩ on odd sites and |0⟩ on
//! even sites, interpolating between the fully polarized state (θ = 0) and
//! the Néel state |1010…⟩ (θ = π/2). Odd chain lengths follow the same
//! convention, ending with |θ₊⟩ at site L.

use crate::basis::BlockadedBasis;
use crate::error::{Error, Result};
use num_complex::Complex64;

/// Normalized amplitude vector over a blockaded basis.
#[derive(Debug, Clone)]
pub struct StateVector {
    l: usize,
    amplitudes: Vec<Complex64>,
}

/// Norm tolerance enforced at construction and after propagation.
pub const NORM_TOL: f64 = 1e-9;

impl StateVector {
    /// Wrap an amplitude vector, enforcing unit norm within [`NORM_TOL`].
    pub fn new(basis: &BlockadedBasis, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: basis.dim(),
                actual: amplitudes.len(),
            });
        }
        let state = Self { l: basis.sites(), amplitudes };
        let norm = state.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!(
                "state norm {norm} deviates from 1 beyond {NORM_TOL}"
            )));
        }
        Ok(state)
    }

    pub(crate) fn from_raw(l: usize, amplitudes: Vec<Complex64>) -> Self {
        Self { l, amplitudes }
    }

    /// Chain length of the underlying basis.
    pub fn sites(&self) -> usize {
        self.l
    }

    /// Basis dimension.
    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    /// Amplitudes in basis order.
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Euclidean norm.
    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.dim() != other.dim() || self.l != other.l {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }
}

/// Fully polarized state |000…⟩: amplitude 1 on the all-zeros pattern.
pub fn polarized(basis: &BlockadedBasis) -> StateVector {
    let mut amplitudes = vec![Complex64::ZERO; basis.dim()];
    amplitudes[0] = Complex64::ONE;
    StateVector::from_raw(basis.sites(), amplitudes)
}

/// Néel state |1010…⟩: sites 1, 3, 5, … excited.
pub fn neel(basis: &BlockadedBasis) -> StateVector {
    let pattern = neel_pattern(basis.sites());
    let k = basis.lookup(pattern).expect("Néel pattern is always blockaded");
    let mut amplitudes = vec![Complex64::ZERO; basis.dim()];
    amplitudes[k] = Complex64::ONE;
    StateVector::from_raw(basis.sites(), amplitudes)
}

/// Bit pattern of the Néel state for a chain of length `l`.
pub fn neel_pattern(l: usize) -> u64 {
    (0..l).step_by(2).fold(0u64, |acc, bit| acc | (1 << bit))
}

/// Interpolating product state |θ₊⟩ ⊗ |0⟩ ⊗ |θ₊⟩ ⊗ |0⟩ ⊗ …
///
/// Its support lies wholly inside the blockaded subspace (excitations only
/// on non-adjacent odd sites), so the result is unit norm without any
/// renormalization.
pub fn theta_plus(basis: &BlockadedBasis, theta: f64) -> Result<StateVector> {
    if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&theta) {
        return Err(Error::Domain(format!(
            "theta {theta} outside [0, pi/2]"
        )));
    }
    let l = basis.sites();
    let (cos_t, sin_t) = (theta.cos(), theta.sin());
    // even sites (bits 1, 3, 5, …) must stay unexcited
    let even_mask: u64 = (1..l).step_by(2).fold(0u64, |acc, bit| acc | (1 << bit));
    let mut amplitudes = vec![Complex64::ZERO; basis.dim()];
    for (k, &pattern) in basis.patterns().iter().enumerate() {
        if pattern & even_mask != 0 {
            continue;
        }
        let mut amp = 1.0;
        for bit in (0..l).step_by(2) {
            amp *= if pattern & (1 << bit) != 0 { sin_t } else { cos_t };
        }
        amplitudes[k] = Complex64::new(amp, 0.0);
    }
    Ok(StateVector::from_raw(l, amplitudes))
}

/// Squared overlap ℱ = |⟨a|b⟩|², symmetric in its arguments.
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(a.inner(b)?.norm_sqr())
}

/// Arbitrary product state, one (α, β) qubit amplitude pair per site for
/// (|0⟩, |1⟩). Loaded by projecting onto the blockaded subspace.
#[derive(Debug, Clone)]
pub struct ProductStateSpec {
    site_amplitudes: Vec<(Complex64, Complex64)>,
}

impl ProductStateSpec {
    /// Build from per-site (α, β) pairs; each site is normalized to
    /// |α|² + |β|² = 1.
    pub fn new(site_amplitudes: Vec<(Complex64, Complex64)>) -> Result<Self> {
        if site_amplitudes.is_empty() {
            return Err(Error::Size("product state needs at least one site".into()));
        }
        let normalized = site_amplitudes
            .into_iter()
            .map(|(a, b)| {
                let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
                if n < 1e-300 {
                    return Err(Error::Domain("zero single-site amplitude pair".into()));
                }
                Ok((a / n, b / n))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { site_amplitudes: normalized })
    }

    /// Project onto the blockaded subspace and renormalize. Errors when the
    /// surviving weight is below 1e-12.
    pub fn to_state(&self, basis: &BlockadedBasis) -> Result<StateVector> {
        let l = basis.sites();
        if self.site_amplitudes.len() != l {
            return Err(Error::DimensionMismatch {
                expected: l,
                actual: self.site_amplitudes.len(),
            });
        }
        let mut amplitudes = vec![Complex64::ZERO; basis.dim()];
        let mut weight = 0.0;
        for (k, &pattern) in basis.patterns().iter().enumerate() {
            let mut amp = Complex64::ONE;
            for (site, &(alpha, beta)) in self.site_amplitudes.iter().enumerate() {
                amp *= if pattern & (1 << site) != 0 { beta } else { alpha };
            }
            weight += amp.norm_sqr();
            amplitudes[k] = amp;
        }
        if weight < 1e-12 {
            return Err(Error::InvalidState(format!(
                "product state has weight {weight:.3e} inside the blockaded subspace"
            )));
        }
        let scale = weight.sqrt();
        for a in &mut amplitudes {
            *a /= scale;
        }
        Ok(StateVector::from_raw(l, amplitudes))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    #[test]
    fn polarized_is_first_ordinal() {
        let basis = BlockadedBasis::enumerate(4).unwrap();
        let s = polarized(&basis);
        assert_eq!(s.amplitudes()[0], Complex64::ONE);
        assert!(s.amplitudes()[1..].iter().all(|&a| a == Complex64::ZERO));
        assert!((fidelity(&s, &s).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn neel_ordinal_at_four_sites() {
        let basis = BlockadedBasis::enumerate(4).unwrap();
        let s = neel(&basis);
        assert_eq!(neel_pattern(4), 0b0101);
        assert_eq!(s.amplitudes()[4], Complex64::ONE);
    }

    #[test]
    fn odd_length_neel_ends_excited() {
        assert_eq!(neel_pattern(3), 0b101);
        assert_eq!(neel_pattern(5), 0b10101);
    }

    #[test]
    fn theta_endpoints() {
        let basis = BlockadedBasis::enumerate(6).unwrap();
        let pol = theta_plus(&basis, 0.0).unwrap();
        let nel = theta_plus(&basis, FRAC_PI_2).unwrap();
        assert!((fidelity(&pol, &polarized(&basis)).unwrap() - 1.0).abs() < 1e-14);
        assert!((fidelity(&nel, &neel(&basis)).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn theta_quarter_pi_amplitudes() {
        let basis = BlockadedBasis::enumerate(4).unwrap();
        let s = theta_plus(&basis, FRAC_PI_4).unwrap();
        let amp = |pattern: u64| s.amplitudes()[basis.index_of(pattern).unwrap()].re;
        assert!((amp(0b0000) - 0.5).abs() < 1e-15);
        assert!((amp(0b0101) - 0.5).abs() < 1e-15);
        assert!((amp(0b0001) - 0.5).abs() < 1e-15);
        assert!((amp(0b0100) - 0.5).abs() < 1e-15);
        let support: f64 = s.amplitudes().iter().map(|a| a.norm_sqr()).sum();
        assert!((support - 1.0).abs() < 1e-14);
        // everything else zero
        for pattern in [0b0010u64, 0b1000, 0b1001, 0b1010] {
            assert_eq!(amp(pattern), 0.0);
        }
    }

    #[test]
    fn theta_norm_is_one_without_renormalization() {
        let basis = BlockadedBasis::enumerate(7).unwrap();
        for k in 0..=20 {
            let theta = FRAC_PI_2 * k as f64 / 20.0;
            let s = theta_plus(&basis, theta).unwrap();
            assert!((s.norm() - 1.0).abs() < 1e-14, "theta={theta}");
        }
    }

    #[test]
    fn theta_continuity() {
        let basis = BlockadedBasis::enumerate(8).unwrap();
        let delta = 1e-6;
        for k in 1..10 {
            let theta = FRAC_PI_2 * k as f64 / 10.0 - delta;
            let a = theta_plus(&basis, theta).unwrap();
            let b = theta_plus(&basis, theta + delta).unwrap();
            let dist: f64 = a
                .amplitudes()
                .iter()
                .zip(b.amplitudes())
                .map(|(x, y)| (x - y).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(dist < 1e-5 * basis.sites() as f64, "theta={theta} dist={dist}");
        }
    }

    #[test]
    fn theta_domain_errors() {
        let basis = BlockadedBasis::enumerate(4).unwrap();
        assert!(matches!(theta_plus(&basis, -0.1), Err(Error::Domain(_))));
        assert!(matches!(theta_plus(&basis, 1.6), Err(Error::Domain(_))));
    }

    #[test]
    fn fidelity_examples() {
        let basis = BlockadedBasis::enumerate(4).unwrap();
        let pol = polarized(&basis);
        let nel = neel(&basis);
        assert_eq!(fidelity(&pol, &nel).unwrap(), 0.0);
        let quarter = theta_plus(&basis, FRAC_PI_4).unwrap();
        assert!((fidelity(&quarter, &pol).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn fidelity_symmetry_is_exact() {
        let basis = BlockadedBasis::enumerate(6).unwrap();
        let a = theta_plus(&basis, 0.3).unwrap();
        let b = theta_plus(&basis, 1.1).unwrap();
        assert_eq!(fidelity(&a, &b).unwrap(), fidelity(&b, &a).unwrap());
    }

    #[test]
    fn fidelity_dimension_mismatch() {
        let b4 = BlockadedBasis::enumerate(4).unwrap();
        let b5 = BlockadedBasis::enumerate(5).unwrap();
        assert!(fidelity(&polarized(&b4), &polarized(&b5)).is_err());
    }

    #[test]
    fn product_loader_projects_and_renormalizes() {
        let basis = BlockadedBasis::enumerate(2).unwrap();
        // |+⟩ ⊗ |+⟩ has one component (11) outside the subspace
        let plus = (
            Complex64::new(1.0 / 2.0_f64.sqrt(), 0.0),
            Complex64::new(1.0 / 2.0_f64.sqrt(), 0.0),
        );
        let s = ProductStateSpec::new(vec![plus, plus]).unwrap().to_state(&basis).unwrap();
        assert!((s.norm() - 1.0).abs() < 1e-14);
        // surviving weight 3/4 → each of the three basis amplitudes 1/sqrt(3)
        for &a in s.amplitudes() {
            assert!((a.re - 1.0 / 3.0_f64.sqrt()).abs() < 1e-14);
        }
    }

    #[test]
    fn product_loader_rejects_fully_blocked_state() {
        let basis = BlockadedBasis::enumerate(2).unwrap();
        let up = (Complex64::ZERO, Complex64::ONE);
        let spec = ProductStateSpec::new(vec![up, up]).unwrap();
        assert!(matches!(spec.to_state(&basis), Err(Error::InvalidState(_))));
    }

    #[test]
    fn product_loader_matches_theta_construction() {
        let basis = BlockadedBasis::enumerate(5).unwrap();
        let theta: f64 = 0.7;
        let qubit_theta = (Complex64::new(theta.cos(), 0.0), Complex64::new(theta.sin(), 0.0));
        let qubit_zero = (Complex64::ONE, Complex64::ZERO);
        let spec = ProductStateSpec::new(vec![
            qubit_theta,
            qubit_zero,
            qubit_theta,
            qubit_zero,
            qubit_theta,
        ])
        .unwrap();
        let via_spec = spec.to_state(&basis).unwrap();
        let direct = theta_plus(&basis, theta).unwrap();
        assert!((fidelity(&via_spec, &direct).unwrap() - 1.0).abs() < 1e-13);
    }
}
