//! Operators restricted to the blockaded subspace: the static PXP
//! Hamiltonian, the diagonal excitation-number generator of the drive, and
//! single-site Pauli observables.
//!
//! Pauli conventions per site, written in the (|1⟩, |0⟩) ordering used
//! throughout this crate:
//!   Z = |1⟩⟨1| − |0⟩⟨0|,  X = |1⟩⟨0| + |0⟩⟨1|,  N = |1⟩⟨1|,
//!   Y carries ⟨1|Y|0⟩ = +i and ⟨0|Y|1⟩ = −i.
//! Restriction to the subspace keeps only matrix elements whose endpoints
//! are both blockaded patterns; flips that exit the subspace contribute
//! nothing.

use crate::basis::BlockadedBasis;
use crate::error::{Error, Result};
use faer::Mat;
use num_complex::Complex64;

/// Rabi frequency Ω. Energy and time are measured in units of Ω, so this is
/// fixed to 1; it is kept explicit so rescaling tests remain possible.
pub const OMEGA_RABI: f64 = 1.0;

/// Which single-site operator to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    X,
    Y,
    Z,
    N,
}

/// Sparse operator in triplet form over a blockaded basis.
///
/// Entries are stored in row-major (row, then column) order, which makes
/// serialization and comparison deterministic. Immutable after construction.
#[derive(Debug, Clone)]
pub struct SparseOperator {
    dim: usize,
    entries: Vec<(usize, usize, Complex64)>,
    hermitian: bool,
}

impl SparseOperator {
    fn from_triplets(
        dim: usize,
        mut entries: Vec<(usize, usize, Complex64)>,
        hermitian: bool,
    ) -> Self {
        entries.sort_by_key(|&(r, c, _)| (r, c));
        Self { dim, entries, hermitian }
    }

    /// Matrix dimension (= basis size).
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Triplets in row-major order.
    pub fn entries(&self) -> &[(usize, usize, Complex64)] {
        &self.entries
    }

    /// Whether the operator was built as Hermitian.
    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    /// Exact closure check: the entry set is invariant under
    /// (r, c, v) ↔ (c, r, conj v).
    pub fn hermitian_closure_holds(&self) -> bool {
        self.entries.iter().all(|&(r, c, v)| {
            self.entries
                .binary_search_by(|&(er, ec, _)| (er, ec).cmp(&(c, r)))
                .map(|k| self.entries[k].2 == v.conj())
                .unwrap_or(false)
        })
    }

    /// Dense copy.
    pub fn to_dense(&self) -> Mat<Complex64> {
        let mut m = Mat::zeros(self.dim, self.dim);
        for &(r, c, v) in &self.entries {
            m[(r, c)] += v;
        }
        m
    }

    /// y = A·x.
    pub fn apply(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, actual: x.len() });
        }
        let mut y = vec![Complex64::ZERO; self.dim];
        for &(r, c, v) in &self.entries {
            y[r] += v * x[c];
        }
        Ok(y)
    }

    /// ⟨x|A|x⟩ for a normalized amplitude vector.
    pub fn expectation(&self, x: &[Complex64]) -> Result<Complex64> {
        let ax = self.apply(x)?;
        Ok(x.iter().zip(&ax).map(|(a, b)| a.conj() * b).sum())
    }
}

/// Whether flipping `site` (1-based) is legal in the constrained space:
/// both neighbors must be unexcited (boundary sites have one neighbor).
fn flip_allowed(pattern: u64, site: usize, l: usize) -> bool {
    let bit = site - 1;
    let left_ok = bit == 0 || (pattern >> (bit - 1)) & 1 == 0;
    let right_ok = bit == l - 1 || (pattern >> (bit + 1)) & 1 == 0;
    left_ok && right_ok
}

/// Static PXP Hamiltonian: (Ω/2) Σ_j (projected flip at site j), with open
/// boundaries. Every matrix element connects two blockaded patterns that
/// differ by one legal flip; the diagonal is identically zero.
pub fn build_pxp(basis: &BlockadedBasis) -> SparseOperator {
    let l = basis.sites();
    let half = Complex64::new(OMEGA_RABI / 2.0, 0.0);
    let mut entries = Vec::new();
    for (col, &s) in basis.patterns().iter().enumerate() {
        for site in 1..=l {
            if !flip_allowed(s, site, l) {
                continue;
            }
            let flipped = s ^ (1 << (site - 1));
            // Legal flips stay inside the subspace by construction, but an
            // explicit lookup keeps the restriction semantics literal.
            if let Some(row) = basis.lookup(flipped) {
                entries.push((row, col, half));
            }
        }
    }
    SparseOperator::from_triplets(basis.dim(), entries, true)
}

/// Diagonal of the total excitation number N̂ = Σ_j N̂_j: entry k is the
/// popcount of pattern k. This is the generator the sinusoidal drive couples
/// to.
pub fn number_diagonal(basis: &BlockadedBasis) -> Vec<f64> {
    basis.patterns().iter().map(|s| s.count_ones() as f64).collect()
}

/// Restriction of a single-site Pauli operator to the blockaded subspace.
pub fn site_operator(basis: &BlockadedBasis, site: usize, which: Pauli) -> Result<SparseOperator> {
    let l = basis.sites();
    if site < 1 || site > l {
        return Err(Error::SiteRange { site, l });
    }
    let bit = 1u64 << (site - 1);
    let mut entries = Vec::new();
    for (col, &s) in basis.patterns().iter().enumerate() {
        match which {
            Pauli::Z => {
                let v = if s & bit != 0 { 1.0 } else { -1.0 };
                entries.push((col, col, Complex64::new(v, 0.0)));
            }
            Pauli::N => {
                if s & bit != 0 {
                    entries.push((col, col, Complex64::ONE));
                }
            }
            Pauli::X | Pauli::Y => {
                let flipped = s ^ bit;
                if let Some(row) = basis.lookup(flipped) {
                    let v = match which {
                        Pauli::X => Complex64::ONE,
                        // target bit set after the flip → +i, cleared → −i
                        Pauli::Y => {
                            if flipped & bit != 0 {
                                Complex64::I
                            } else {
                                -Complex64::I
                            }
                        }
                        _ => unreachable!(),
                    };
                    entries.push((row, col, v));
                }
            }
        }
    }
    Ok(SparseOperator::from_triplets(basis.dim(), entries, true))
}
