use std::time::Instant;

use rayon::prelude::*;

use crate::error::{CrbError, Result};
use crate::fisher::{crb_monte_carlo, Case, CrbMatrix, Experiment};
use crate::secondary::{crb_fo_case1, crb_fo_case2, crb_modes, nearest_mode, FoCrb, ModeCrb};
use crate::sysmodel::{
    calibrate_sigma_global, calibrate_sigma_local, derive_seed, input_fo_from_output, ArmaxSystem, FoSpec,
};

use super::config::{Point, ScenarioConfig, SnrMode};

/// Bounds for one case at one scenario point.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseBounds {
    /// None for the ambient case.
    pub fo: Option<FoCrb>,
    /// Monitored mode and its bounds.
    pub mode: ModeCrb,
    pub condition: f64,
    pub wall_s: f64,
}

/// One output row: scenario coordinates, the case and its bounds or error.
#[derive(Debug, Clone, PartialEq)]
pub struct CrbReport {
    pub point_index: usize,
    pub point: Point,
    pub case: Case,
    pub snr_mode: SnrMode,
    pub trials: usize,
    pub seed: u64,
    /// Noise variance used (NaN if calibration failed).
    pub sigma_e2: f64,
    pub fs: f64,
    pub result: std::result::Result<CaseBounds, CrbError>,
}

impl CrbReport {
    pub fn sqrtcrb_amplitude(&self) -> Option<f64> {
        self.fo().map(|f| f.var_amplitude.sqrt())
    }

    pub fn sqrtcrb_phase(&self) -> Option<f64> {
        self.fo().map(|f| f.var_phase.sqrt())
    }

    /// Frequency bound in Hz, f = w fs / 2pi.
    pub fn sqrtcrb_freq_hz(&self) -> Option<f64> {
        self.fo()
            .map(|f| f.var_omega.sqrt() * self.fs / (2.0 * std::f64::consts::PI))
    }

    pub fn sqrtcrb_mode_freq_hz(&self) -> Option<f64> {
        self.result.as_ref().ok().map(|b| b.mode.var_freq.sqrt())
    }

    pub fn sqrtcrb_mode_damp_pct(&self) -> Option<f64> {
        self.result.as_ref().ok().map(|b| b.mode.var_damp.sqrt())
    }

    fn fo(&self) -> Option<&FoCrb> {
        self.result.as_ref().ok().and_then(|b| b.fo.as_ref())
    }
}

fn case_bounds(
    case: Case,
    sys: &ArmaxSystem,
    fo_out: &FoSpec,
    n: usize,
    m: usize,
    seed: u64,
    monitored_hz: f64,
) -> Result<CaseBounds> {
    let start = Instant::now();
    let (crb, fo): (CrbMatrix, Option<FoCrb>) = match case {
        Case::Ambient => (crb_monte_carlo(&Experiment::Ambient, sys, n, m, seed)?, None),
        Case::One => {
            let crb = crb_monte_carlo(&Experiment::Case1(*fo_out), sys, n, m, seed)?;
            let fo = crb_fo_case1(&crb)?;
            (crb, Some(fo))
        }
        Case::Two => {
            let fo_in = input_fo_from_output(sys, fo_out.amplitude, fo_out.phase_rad, fo_out.omega)?;
            let crb = crb_monte_carlo(&Experiment::Case2(fo_in), sys, n, m, seed)?;
            let fo = crb_fo_case2(&crb, sys, &fo_in)?;
            (crb, Some(fo))
        }
    };
    let modes = crb_modes(&crb.ar_block(), sys.a(), sys.fs())?;
    let mode = *nearest_mode(&modes, monitored_hz)
        .ok_or_else(|| CrbError::InvalidArgument("AR polynomial has no oscillatory mode".into()))?;
    Ok(CaseBounds {
        fo,
        mode,
        condition: crb.meta.condition,
        wall_s: start.elapsed().as_secs_f64(),
    })
}

fn calibrate(cfg: &ScenarioConfig, sys: &ArmaxSystem, fo_out: &FoSpec, snr_db: f64) -> Result<ArmaxSystem> {
    let s2 = match cfg.snr_mode {
        SnrMode::Local => calibrate_sigma_local(sys, fo_out, snr_db)?,
        SnrMode::Global => calibrate_sigma_global(sys, fo_out, snr_db)?,
    };
    sys.with_sigma_e2(s2)
}

/// Runs every configured case at one scenario point.
///
/// The noise variance is calibrated from the output FO and the SNR mode; the
/// case-2 input FO is back-solved so both cases share the same output FO. All
/// cases use the trial seeds derived from `derive_seed(cfg.seed, index)`.
pub fn run_point(cfg: &ScenarioConfig, sys: &ArmaxSystem, point: Point, index: usize) -> Vec<CrbReport> {
    let seed = derive_seed(cfg.seed, index as u64);
    let omega = sys.hz_to_omega(point.freq_hz);
    let prepared = FoSpec::output(cfg.amplitude, cfg.phase_rad, omega)
        .and_then(|fo| calibrate(cfg, sys, &fo, point.snr_db).map(|s| (fo, s)));
    cfg.case
        .cases()
        .iter()
        .map(|&case| {
            let (sigma_e2, result) = match &prepared {
                Ok((fo, calibrated)) => (
                    calibrated.sigma_e2(),
                    case_bounds(case, calibrated, fo, point.samples, cfg.trials, seed, cfg.monitored_hz),
                ),
                Err(e) => (f64::NAN, Err(e.clone())),
            };
            CrbReport {
                point_index: index,
                point,
                case,
                snr_mode: cfg.snr_mode,
                trials: cfg.trials,
                seed,
                sigma_e2,
                fs: sys.fs(),
                result,
            }
        })
        .collect()
}

/// Runs all sweep points, in parallel, and returns rows in sweep order.
/// Failed points keep their row with the error recorded.
pub fn run_sweep(cfg: &ScenarioConfig, sys: &ArmaxSystem) -> Result<Vec<CrbReport>> {
    let points = cfg.points()?;
    cfg.validate(sys, &points)?;
    let rows: Vec<Vec<CrbReport>> = points
        .par_iter()
        .enumerate()
        .map(|(i, &p)| run_point(cfg, sys, p, i))
        .collect();
    Ok(rows.into_iter().flatten().collect())
}
