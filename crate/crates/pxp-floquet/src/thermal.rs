//! Single-site and chain-averaged observables, Bloch vectors, the exact
//! ergodic reference of the blockaded subspace, trace distances, and
//! fluctuation statistics.
//!
//! The ergodic reference state is the subspace identity 1/F(L+2) — never the
//! full 2^L identity — giving X_erg = Y_erg = 0 and the closed-form
//! Z_erg(j) = (F(j)·F(L−j+1) − F(j+1)·F(L−j+2)) / F(L+2).
//!
//! Continuous time averages are realized as discrete means over the
//! stroboscopic samples 1..=n; the n = 0 trace record reports the
//! instantaneous distance in the averaged slot.

use crate::basis::{fibonacci, BlockadedBasis};
use crate::error::{Error, Result};
use crate::operators::{site_operator, Pauli};
use crate::propagation::{stroboscopic_orbit, PropagatorMatrix};
use crate::states::StateVector;
use num_complex::Complex64;

/// Single-site Bloch vector (⟨X⟩, ⟨Y⟩, ⟨Z⟩).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    /// Euclidean length.
    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }
}

/// Bloch vector of `state` at `site` (1-based).
pub fn bloch_vector(basis: &BlockadedBasis, state: &StateVector, site: usize) -> Result<BlochVector> {
    if state.dim() != basis.dim() {
        return Err(Error::DimensionMismatch { expected: basis.dim(), actual: state.dim() });
    }
    let x = site_operator(basis, site, Pauli::X)?.expectation(state.amplitudes())?.re;
    let y = site_operator(basis, site, Pauli::Y)?.expectation(state.amplitudes())?.re;
    let z = site_operator(basis, site, Pauli::Z)?.expectation(state.amplitudes())?.re;
    Ok(BlochVector { x, y, z })
}

/// Exact ergodic ⟨Z_j⟩ of the subspace-uniform state.
pub fn ergodic_z(site: usize, l: usize) -> Result<f64> {
    if site < 1 || site > l {
        return Err(Error::SiteRange { site, l });
    }
    let f = |n: usize| fibonacci(n as u64).map(|v| v as f64);
    Ok((f(site)? * f(l - site + 1)? - f(site + 1)? * f(l - site + 2)?) / f(l + 2)?)
}

/// Ergodic Bloch vector (0, 0, Z_erg(j)).
pub fn ergodic_bloch(site: usize, l: usize) -> Result<BlochVector> {
    Ok(BlochVector { x: 0.0, y: 0.0, z: ergodic_z(site, l)? })
}

/// Chain-averaged ergodic ⟨Z⟩.
pub fn ergodic_z_chain(l: usize) -> Result<f64> {
    let mut sum = 0.0;
    for site in 1..=l {
        sum += ergodic_z(site, l)?;
    }
    Ok(sum / l as f64)
}

/// Chain-averaged ergodic Bloch vector (0, 0, mean_j Z_erg(j)).
pub fn ergodic_bloch_chain(l: usize) -> Result<BlochVector> {
    Ok(BlochVector { x: 0.0, y: 0.0, z: ergodic_z_chain(l)? })
}

/// Instantaneous trace distance ½|r − r_erg| between single-site states in
/// Bloch form.
pub fn instantaneous_distance(r: &BlochVector, r_erg: &BlochVector) -> f64 {
    let dx = r.x - r_erg.x;
    let dy = r.y - r_erg.y;
    let dz = r.z - r_erg.z;
    0.5 * (dx * dx + dy * dy + dz * dz).sqrt()
}

/// One stroboscopic record of a thermalization run.
#[derive(Debug, Clone)]
pub struct TraceRecord {
    /// Stroboscopic index.
    pub n: usize,
    /// Physical time nT.
    pub t: f64,
    /// Per-site Bloch vectors, index 0 ↔ site 1.
    pub sites: Vec<BlochVector>,
    /// Chain averages (X, Y, Z).
    pub chain: BlochVector,
    /// Per-site instantaneous distance to the ergodic state.
    pub d_inst: Vec<f64>,
    /// Per-site distance of the running mean Bloch vector (samples 1..=n)
    /// to the ergodic state; equals `d_inst` at n = 0.
    pub d_avg: Vec<f64>,
}

/// Stroboscopic thermalization trace of one initial state.
#[derive(Debug, Clone)]
pub struct ThermalizationTrace {
    l: usize,
    records: Vec<TraceRecord>,
}

impl ThermalizationTrace {
    /// Evolve `psi0` for `n_max` periods and record per-site and
    /// chain-averaged observables at every stroboscopic step.
    pub fn record(
        basis: &BlockadedBasis,
        propagator: &PropagatorMatrix,
        psi0: &StateVector,
        n_max: usize,
    ) -> Result<Self> {
        let l = basis.sites();
        let period = propagator.params().period();
        let ergodic: Vec<BlochVector> =
            (1..=l).map(|site| ergodic_bloch(site, l)).collect::<Result<_>>()?;
        let orbit = stroboscopic_orbit(propagator, psi0, n_max)?;
        let mut records: Vec<TraceRecord> = Vec::with_capacity(n_max + 1);
        let mut running = vec![(0.0f64, 0.0f64, 0.0f64); l];
        for (n, state) in orbit.iter().enumerate() {
            let sites: Vec<BlochVector> =
                (1..=l).map(|site| bloch_vector(basis, state, site)).collect::<Result<_>>()?;
            let chain = BlochVector {
                x: sites.iter().map(|r| r.x).sum::<f64>() / l as f64,
                y: sites.iter().map(|r| r.y).sum::<f64>() / l as f64,
                z: sites.iter().map(|r| r.z).sum::<f64>() / l as f64,
            };
            let d_inst: Vec<f64> =
                (0..l).map(|j| instantaneous_distance(&sites[j], &ergodic[j])).collect();
            let d_avg: Vec<f64> = if n == 0 {
                d_inst.clone()
            } else {
                for j in 0..l {
                    running[j].0 += sites[j].x;
                    running[j].1 += sites[j].y;
                    running[j].2 += sites[j].z;
                }
                (0..l)
                    .map(|j| {
                        let mean = BlochVector {
                            x: running[j].0 / n as f64,
                            y: running[j].1 / n as f64,
                            z: running[j].2 / n as f64,
                        };
                        instantaneous_distance(&mean, &ergodic[j])
                    })
                    .collect()
            };
            records.push(TraceRecord { n, t: n as f64 * period, sites, chain, d_inst, d_avg });
        }
        Ok(Self { l, records })
    }

    /// Chain length.
    pub fn sites(&self) -> usize {
        self.l
    }

    /// All records, index = stroboscopic step.
    pub fn records(&self) -> &[TraceRecord] {
        &self.records
    }

    /// Chain-averaged observable series over samples 1..=n_max (sample 0
    /// excluded, matching the averaging convention).
    pub fn chain_series(&self, component: impl Fn(&BlochVector) -> f64) -> Vec<f64> {
        self.records.iter().skip(1).map(|r| component(&r.chain)).collect()
    }

    /// Mean of the chain-averaged observable over samples 1..=n_max.
    pub fn chain_time_average(&self, component: impl Fn(&BlochVector) -> f64) -> Result<f64> {
        let series = self.chain_series(component);
        if series.is_empty() {
            return Err(Error::Domain("trace has no samples past n = 0".into()));
        }
        Ok(series.iter().sum::<f64>() / series.len() as f64)
    }
}

/// Distance of the mean Bloch vector over stroboscopic samples 1..=n from
/// the ergodic vector, recomputed from the stored per-step records.
pub fn time_averaged_distance(trace: &ThermalizationTrace, site: usize, n: usize) -> Result<f64> {
    let l = trace.sites();
    if site < 1 || site > l {
        return Err(Error::SiteRange { site, l });
    }
    if n == 0 {
        return Err(Error::Domain("time average needs n >= 1".into()));
    }
    if n >= trace.records().len() {
        return Err(Error::DimensionMismatch { expected: trace.records().len() - 1, actual: n });
    }
    let mut mean = (0.0f64, 0.0f64, 0.0f64);
    for record in &trace.records()[1..=n] {
        let r = record.sites[site - 1];
        mean.0 += r.x;
        mean.1 += r.y;
        mean.2 += r.z;
    }
    let mean = BlochVector { x: mean.0 / n as f64, y: mean.1 / n as f64, z: mean.2 / n as f64 };
    Ok(instantaneous_distance(&mean, &ergodic_bloch(site, l)?))
}

/// Population standard deviation of a signal window.
pub fn signal_std(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::Domain("signal_std needs a nonempty window".into()));
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    Ok(var.sqrt())
}

/// Single-site density matrix in Bloch form, in the (|1⟩, |0⟩) ordering:
/// rows/columns are (excited, ground).
pub fn reduced_single_site(
    basis: &BlockadedBasis,
    state: &StateVector,
    site: usize,
) -> Result<[[Complex64; 2]; 2]> {
    let r = bloch_vector(basis, state, site)?;
    let half = 0.5;
    Ok([
        [
            Complex64::new(half * (1.0 + r.z), 0.0),
            Complex64::new(half * r.x, half * r.y),
        ],
        [
            Complex64::new(half * r.x, -half * r.y),
            Complex64::new(half * (1.0 - r.z), 0.0),
        ],
    ])
}
