use std::io::Write;

use crate::error::{CrbError, Result};
use crate::sigcore::arma_psd;
use crate::sysmodel::ArmaxSystem;

use super::run::CrbReport;

/// Number of grid points of the PSD table.
pub const PSD_POINTS: usize = 2048;

const COLUMNS: [&str; 19] = [
    "point",
    "case",
    "freq_hz",
    "snr_mode",
    "snr_db",
    "samples",
    "trials",
    "seed",
    "sigma_e2",
    "sqrtcrb_a1",
    "sqrtcrb_phi1_rad",
    "sqrtcrb_f1_hz",
    "mode_freq_hz",
    "mode_damp_pct",
    "sqrtcrb_mode_freq_hz",
    "sqrtcrb_mode_damp_pct",
    "condition",
    "error",
    "wall_s",
];

/// Twelve significant digits.
fn num(v: f64) -> String {
    format!("{v:.11e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

fn csv_err(e: csv::Error) -> CrbError {
    CrbError::Io(e.to_string())
}

/// Writes report rows as CSV. Every row carries its full scenario
/// coordinates. Wall-clock time is appended only when `timing` is set, so the
/// default output is reproducible byte for byte.
pub fn write_reports<W: Write>(rows: &[CrbReport], out: W, timing: bool) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let ncols = if timing { COLUMNS.len() } else { COLUMNS.len() - 1 };
    w.write_record(&COLUMNS[..ncols]).map_err(csv_err)?;
    for r in rows {
        let ok = r.result.as_ref().ok();
        let mut rec = vec![
            r.point_index.to_string(),
            r.case.name().to_string(),
            num(r.point.freq_hz),
            r.snr_mode.name().to_string(),
            num(r.point.snr_db),
            r.point.samples.to_string(),
            r.trials.to_string(),
            r.seed.to_string(),
            num(r.sigma_e2),
            opt(r.sqrtcrb_amplitude()),
            opt(r.sqrtcrb_phase()),
            opt(r.sqrtcrb_freq_hz()),
            opt(ok.map(|b| b.mode.mode.frequency_hz)),
            opt(ok.map(|b| b.mode.mode.damping_pct)),
            opt(r.sqrtcrb_mode_freq_hz()),
            opt(r.sqrtcrb_mode_damp_pct()),
            opt(ok.map(|b| b.condition)),
            r.result.as_ref().err().map(|e| e.to_string()).unwrap_or_default(),
        ];
        if timing {
            rec.push(opt(ok.map(|b| b.wall_s)));
        }
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.flush().map_err(|e| CrbError::Io(e.to_string()))
}

/// PSD table on [0, fs/2): frequency in Hz and sigma_e2 |C/A|^2.
pub fn psd_table(sys: &ArmaxSystem) -> Vec<(f64, f64)> {
    let nyquist = sys.fs() / 2.0;
    (0..PSD_POINTS)
        .map(|i| {
            let f = nyquist * i as f64 / PSD_POINTS as f64;
            (f, arma_psd(sys, sys.hz_to_omega(f)))
        })
        .collect()
}

/// Writes the PSD table as CSV.
pub fn emit_psd<W: Write>(sys: &ArmaxSystem, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["freq_hz", "psd"]).map_err(csv_err)?;
    for (f, p) in psd_table(sys) {
        w.write_record([num(f), num(p)]).map_err(csv_err)?;
    }
    w.flush().map_err(|e| CrbError::Io(e.to_string()))
}
