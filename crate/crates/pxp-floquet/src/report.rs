//! CSV and gnuplot emission. All floating-point fields use 17 significant
//! digits, '.' decimal separators, and '\n' line endings, so identical runs
//! produce byte-identical files.

use crate::error::Result;
use crate::fit::FitResult;
use crate::floquet::OverlapProfile;
use crate::peaks::Peak;
use crate::sweep::{NrevPoint, SweepRow};
use crate::thermal::ThermalizationTrace;
use std::io::Write;

/// Fixed 17-significant-digit rendering.
pub fn float17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Spectrum CSV: one row per Floquet state of each (ω_d, h) cell.
pub fn write_spectrum_csv<W: Write>(
    mut w: W,
    cells: &[(usize, f64, f64, OverlapProfile)],
) -> Result<()> {
    writeln!(w, "L,omega_d,h,m,quasi_energy,overlap_sq,state_label")?;
    for (l, omega_d, h, profile) in cells {
        for (m, &(eps, weight)) in profile.pairs().iter().enumerate() {
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                l,
                float17(*omega_d),
                float17(*h),
                m,
                float17(eps),
                float17(weight),
                profile.label()
            )?;
        }
    }
    Ok(())
}

/// Fidelity sweep CSV.
pub fn write_sweep_csv<W: Write>(mut w: W, rows: &[SweepRow]) -> Result<()> {
    writeln!(w, "L,state,omega_d,h,n,fidelity")?;
    for row in rows {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            row.l,
            row.state,
            float17(row.omega_d),
            float17(row.h),
            row.n,
            row.fidelity.map(float17).unwrap_or_else(|| "nan".into())
        )?;
    }
    Ok(())
}

/// Thermalization CSV: per-site rows plus chain-average rows with site = 0.
pub fn write_thermal_csv<W: Write>(mut w: W, trace: &ThermalizationTrace) -> Result<()> {
    writeln!(w, "n,t,site,x,y,z,d_inst,d_avg")?;
    let l = trace.sites();
    // chain-average reference: (0, 0, mean_j Z_erg(j))
    let chain_erg = crate::thermal::ergodic_bloch_chain(l)?;
    let mut running = (0.0f64, 0.0f64, 0.0f64);
    for record in trace.records() {
        let chain = &record.chain;
        let (chain_d_inst, chain_d_avg) = {
            let inst = crate::thermal::instantaneous_distance(chain, &chain_erg);
            let avg = if record.n == 0 {
                inst
            } else {
                running.0 += chain.x;
                running.1 += chain.y;
                running.2 += chain.z;
                let mean = crate::thermal::BlochVector {
                    x: running.0 / record.n as f64,
                    y: running.1 / record.n as f64,
                    z: running.2 / record.n as f64,
                };
                crate::thermal::instantaneous_distance(&mean, &chain_erg)
            };
            (inst, avg)
        };
        writeln!(
            w,
            "{},{},0,{},{},{},{},{}",
            record.n,
            float17(record.t),
            float17(chain.x),
            float17(chain.y),
            float17(chain.z),
            float17(chain_d_inst),
            float17(chain_d_avg)
        )?;
        for site in 1..=l {
            let r = &record.sites[site - 1];
            writeln!(
                w,
                "{},{},{},{},{},{},{},{}",
                record.n,
                float17(record.t),
                site,
                float17(r.x),
                float17(r.y),
                float17(r.z),
                float17(record.d_inst[site - 1]),
                float17(record.d_avg[site - 1])
            )?;
        }
    }
    Ok(())
}

/// Revival-index profile CSV; failed points carry `nan` and accepted = 0.
pub fn write_nrev_csv<W: Write>(
    mut w: W,
    l: usize,
    profiles: &[(f64, Vec<NrevPoint>)],
) -> Result<()> {
    writeln!(w, "L,state,omega_d,h,n_rev,accepted")?;
    for (omega_d, points) in profiles {
        for point in points {
            match &point.outcome {
                Ok(n_rev) => writeln!(
                    w,
                    "{},neel,{},{},{},1",
                    l,
                    float17(*omega_d),
                    float17(point.h),
                    float17(*n_rev)
                )?,
                Err(_) => writeln!(
                    w,
                    "{},neel,{},{},nan,0",
                    l,
                    float17(*omega_d),
                    float17(point.h)
                )?,
            }
        }
    }
    Ok(())
}

/// Crest table CSV.
pub fn write_peaks_csv<W: Write>(
    mut w: W,
    rows: &[(usize, String, f64, usize, Peak)],
) -> Result<()> {
    writeln!(w, "L,state,omega_d,n,h_peak,height,prominence,width")?;
    for (l, state, omega_d, n, peak) in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            l,
            state,
            float17(*omega_d),
            n,
            float17(peak.position),
            float17(peak.height),
            float17(peak.prominence),
            float17(peak.width)
        )?;
    }
    Ok(())
}

/// Fit report rows serialized to JSON alongside the profile CSV.
#[derive(serde::Serialize)]
pub struct FitReport {
    pub l: usize,
    pub omega_d: f64,
    pub eta: f64,
    pub window: (f64, f64),
    pub with_offset: FitResult,
    pub proportional: FitResult,
    pub min_revival_index: f64,
}

/// Minimal gnuplot script referencing the emitted CSVs. The data files stay
/// the source of truth; the script is a convenience view.
pub fn gnuplot_script(command: &str, csv_names: &[&str]) -> String {
    let mut s = String::new();
    s.push_str("set datafile separator ','\n");
    s.push_str("set key outside\n");
    match command {
        "spectrum" => {
            s.push_str("set xlabel 'h'\nset ylabel 'quasi-energy'\n");
            s.push_str(&format!(
                "plot '{}' skip 1 using 3:5:(column(6)) with points pointtype 7 pointsize 0.3 palette title 'spectrum'\n",
                csv_names[0]
            ));
        }
        "fidelity-sweep" | "peaks" => {
            s.push_str("set xlabel 'h'\nset ylabel 'fidelity'\n");
            s.push_str(&format!(
                "plot '{}' skip 1 using 4:6 with lines title 'F(nT)'\n",
                csv_names[0]
            ));
        }
        "nrev-fit" => {
            s.push_str("set xlabel 'h'\nset ylabel 'n_rev'\n");
            s.push_str(&format!(
                "plot '{}' skip 1 using 4:5 with points title 'n_rev'\n",
                csv_names[0]
            ));
        }
        "thermalize" => {
            s.push_str("set xlabel 't'\nset ylabel 'Z(t)'\n");
            s.push_str(&format!(
                "plot '{}' skip 1 using ($3==0?$2:1/0):5 with lines title 'chain Z'\n",
                csv_names[0]
            ));
        }
        _ => {}
    }
    s
}
