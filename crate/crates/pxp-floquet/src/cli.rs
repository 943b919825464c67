//! Command execution: drives the simulation pipeline from a [`RunConfig`],
//! writes the CSV tables, and records a JSON manifest with content hashes
//! of every output.

use crate::basis::BlockadedBasis;
use crate::config::{CommandKind, RunConfig};
use crate::error::{Error, Result};
use crate::fit::{default_fit_window, fit_nrev, min_revival_index, FitModel};
use crate::floquet::{decompose, overlaps, OverlapProfile};
use crate::manifest::RunManifest;
use crate::peaks::track_peaks;
use crate::propagation::{DriveParams, SplitStepPropagator};
use crate::report;
use crate::sweep::{fidelity_sweep, nrev_profile, NrevPoint, SweepGrid};
use crate::thermal::ThermalizationTrace;
use rayon::prelude::*;
use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::time::Instant;

/// Execute one command end to end. All file writes happen on this thread
/// after the parallel compute phases have merged.
pub fn run_command(config: &RunConfig) -> Result<()> {
    std::fs::create_dir_all(&config.output)?;
    let started = Instant::now();
    let mut manifest = RunManifest::new(config.command.name(), config.render());
    let csv_name = match config.command {
        CommandKind::Spectrum => run_spectrum(config, &mut manifest)?,
        CommandKind::FidelitySweep => run_fidelity_sweep(config, &mut manifest)?,
        CommandKind::NrevFit => run_nrev_fit(config, &mut manifest)?,
        CommandKind::Thermalize => run_thermalize(config, &mut manifest)?,
        CommandKind::Peaks => run_peaks(config, &mut manifest)?,
        CommandKind::BasisDump => run_basis_dump(config, &mut manifest)?,
    };
    if config.plot_script {
        let script = report::gnuplot_script(config.command.name(), &[&csv_name]);
        let path = config.output.join("plot.gp");
        std::fs::write(&path, script)?;
        manifest.add_output(&path)?;
    }
    manifest.wall_time_seconds = started.elapsed().as_secs_f64();
    manifest.write(&config.output)?;
    Ok(())
}

fn open_csv(config: &RunConfig, name: &str) -> Result<(PathBuf, BufWriter<File>)> {
    let path = config.output.join(name);
    let file = File::create(&path)?;
    Ok((path, BufWriter::new(file)))
}

fn scalar_axis(axis: &crate::config::AxisSpec, what: &str) -> Result<f64> {
    let values = axis.values();
    if values.len() != 1 {
        return Err(Error::Usage(format!("{what} must be a single value for this command")));
    }
    Ok(values[0])
}

fn run_spectrum(config: &RunConfig, manifest: &mut RunManifest) -> Result<String> {
    let basis = BlockadedBasis::enumerate(config.l)?;
    let engine = SplitStepPropagator::new(&basis)?;
    let psi0 = config.state.build(&basis)?;
    let label = config.state.label();
    let h_values = config.h.as_ref().expect("validated").values();
    let omega_values = config.omega_d.values();
    let cells: Vec<(f64, f64)> = omega_values
        .iter()
        .flat_map(|&w| h_values.iter().map(move |&h| (w, h)))
        .collect();
    type SpectrumCell = (f64, f64, Result<(OverlapProfile, f64)>);
    let results: Vec<SpectrumCell> = cells
        .par_iter()
        .map(|&(omega_d, h)| {
            let outcome = (|| {
                let params = DriveParams::new(h, omega_d)?;
                let propagator = engine.one_period(&params, config.steps_per_period)?;
                let defect = propagator.unitarity_defect();
                let decomposition = decompose(&propagator)?;
                Ok((overlaps(&decomposition, &psi0, label.clone())?, defect))
            })();
            (omega_d, h, outcome)
        })
        .collect();
    let mut rows = Vec::new();
    let mut flagged = 0usize;
    let mut worst_defect = 0.0f64;
    for (omega_d, h, outcome) in results {
        match outcome {
            Ok((profile, defect)) => {
                worst_defect = worst_defect.max(defect);
                rows.push((config.l, omega_d, h, profile));
            }
            Err(_) => flagged += 1,
        }
    }
    let (path, mut w) = open_csv(config, "spectrum.csv")?;
    report::write_spectrum_csv(&mut w, &rows)?;
    drop(w);
    manifest.add_output(&path)?;
    manifest.flagged_cells = flagged;
    manifest.partial = flagged > 0;
    manifest.convergence = serde_json::json!({
        "basis_dim": basis.dim(),
        "steps_per_period": config.steps_per_period,
        "max_unitarity_defect": worst_defect,
    });
    Ok("spectrum.csv".into())
}

fn run_fidelity_sweep(config: &RunConfig, manifest: &mut RunManifest) -> Result<String> {
    let grid = SweepGrid {
        l: config.l,
        state: config.state,
        h_values: config.h.as_ref().expect("validated").values(),
        omega_d_values: config.omega_d.values(),
        n_values: config.n.as_ref().expect("validated").0.clone(),
        steps_per_period: config.steps_per_period,
    };
    let rows = fidelity_sweep(&grid)?;
    let flagged = rows.iter().filter(|r| r.fidelity.is_none()).count();
    let (path, mut w) = open_csv(config, "sweep.csv")?;
    report::write_sweep_csv(&mut w, &rows)?;
    drop(w);
    manifest.add_output(&path)?;
    manifest.flagged_cells = flagged;
    manifest.partial = flagged > 0;
    manifest.convergence = serde_json::json!({
        "steps_per_period": config.steps_per_period,
        "rows": rows.len(),
    });
    Ok("sweep.csv".into())
}

fn run_nrev_fit(config: &RunConfig, manifest: &mut RunManifest) -> Result<String> {
    let mut profiles: Vec<(f64, Vec<NrevPoint>)> = Vec::new();
    let mut reports = Vec::new();
    let mut flagged = 0usize;
    for omega_d in config.omega_d.values() {
        let window = config.fit_window.unwrap_or_else(|| default_fit_window(omega_d));
        let h_values: Vec<f64> = match &config.h {
            Some(axis) => axis.values(),
            None => {
                // default profile grid: the fit window at step 0.2
                let mut v = Vec::new();
                let mut h = window.0;
                while h <= window.1 + 1e-9 {
                    v.push(h);
                    h += 0.2;
                }
                v
            }
        };
        let points = nrev_profile(&h_values, omega_d, config.l, config.eta, config.steps_per_period)?;
        flagged += points.iter().filter(|p| p.outcome.is_err()).count();
        let samples: Vec<(f64, f64)> = points
            .iter()
            .filter_map(|p| p.outcome.as_ref().ok().map(|&n_rev| (p.h, n_rev)))
            .collect();
        let with_offset = fit_nrev(&samples, omega_d, FitModel::WithOffset, window)?;
        let proportional = fit_nrev(&samples, omega_d, FitModel::Proportional, window)?;
        let n_min = min_revival_index(&with_offset, omega_d);
        reports.push(report::FitReport {
            l: config.l,
            omega_d,
            eta: config.eta,
            window,
            with_offset,
            proportional,
            min_revival_index: n_min,
        });
        profiles.push((omega_d, points));
    }
    let (path, mut w) = open_csv(config, "nrev.csv")?;
    report::write_nrev_csv(&mut w, config.l, &profiles)?;
    drop(w);
    manifest.add_output(&path)?;
    let report_path = config.output.join("fit_report.json");
    std::fs::write(&report_path, serde_json::to_string_pretty(&reports).expect("serializable"))?;
    manifest.add_output(&report_path)?;
    manifest.flagged_cells = flagged;
    manifest.partial = flagged > 0;
    manifest.convergence = serde_json::json!({
        "steps_per_period": config.steps_per_period,
        "eta": config.eta,
    });
    Ok("nrev.csv".into())
}

fn run_thermalize(config: &RunConfig, manifest: &mut RunManifest) -> Result<String> {
    let h = scalar_axis(config.h.as_ref().expect("validated"), "--h")?;
    let omega_d = scalar_axis(&config.omega_d, "--omega-d")?;
    let n_max = config.n_max.expect("validated");
    let basis = BlockadedBasis::enumerate(config.l)?;
    let engine = SplitStepPropagator::new(&basis)?;
    let params = DriveParams::new(h, omega_d)?;
    let propagator = engine.one_period(&params, config.steps_per_period)?;
    let psi0 = config.state.build(&basis)?;
    let trace = ThermalizationTrace::record(&basis, &propagator, &psi0, n_max)?;
    let (path, mut w) = open_csv(config, "thermalization.csv")?;
    report::write_thermal_csv(&mut w, &trace)?;
    drop(w);
    manifest.add_output(&path)?;
    manifest.convergence = serde_json::json!({
        "basis_dim": basis.dim(),
        "steps_per_period": config.steps_per_period,
        "unitarity_defect": propagator.unitarity_defect(),
        "records": trace.records().len(),
    });
    Ok("thermalization.csv".into())
}

fn run_peaks(config: &RunConfig, manifest: &mut RunManifest) -> Result<String> {
    let grid = SweepGrid {
        l: config.l,
        state: config.state,
        h_values: config.h.as_ref().expect("validated").values(),
        omega_d_values: config.omega_d.values(),
        n_values: config.n.as_ref().expect("validated").0.clone(),
        steps_per_period: config.steps_per_period,
    };
    let rows = fidelity_sweep(&grid)?;
    let flagged = rows.iter().filter(|r| r.fidelity.is_none()).count();
    let label = config.state.label();
    let mut peak_rows = Vec::new();
    for &omega_d in &grid.omega_d_values {
        for &n in &grid.n_values {
            let slice: Vec<f64> = rows
                .iter()
                .filter(|r| r.omega_d == omega_d && r.n == n)
                .map(|r| r.fidelity.unwrap_or(f64::NEG_INFINITY))
                .collect();
            for peak in track_peaks(&grid.h_values, &slice, config.min_height, config.min_separation)
            {
                peak_rows.push((config.l, label.clone(), omega_d, n, peak));
            }
        }
    }
    let (path, mut w) = open_csv(config, "peaks.csv")?;
    report::write_peaks_csv(&mut w, &peak_rows)?;
    drop(w);
    manifest.add_output(&path)?;
    manifest.flagged_cells = flagged;
    manifest.partial = flagged > 0;
    manifest.convergence = serde_json::json!({
        "steps_per_period": config.steps_per_period,
        "peaks": peak_rows.len(),
    });
    Ok("peaks.csv".into())
}

fn run_basis_dump(config: &RunConfig, manifest: &mut RunManifest) -> Result<String> {
    let basis = BlockadedBasis::enumerate(config.l)?;
    let (path, mut w) = open_csv(config, "basis.txt")?;
    basis.write_dump(&mut w)?;
    drop(w);
    manifest.add_output(&path)?;
    manifest.convergence = serde_json::json!({ "basis_dim": basis.dim() });
    Ok("basis.txt".into())
}
