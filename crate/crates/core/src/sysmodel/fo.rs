use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{CrbError, Result};

use super::ArmaxSystem;

/// Which side of B(q)/A(q) the FO amplitude and phase refer to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FoReference {
    /// Injected FO u[k] (amplitude Ã_1, phase φ̃_1).
    Input,
    /// Steady-state FO seen in y (amplitude A_1, phase φ_1).
    Output,
}

/// A single forced oscillation amplitude cos(omega k + phase), active for
/// start <= k <= stop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FoSpec {
    pub amplitude: f64,
    pub phase_rad: f64,
    pub omega: f64,
    pub start: i64,
    pub stop: i64,
    pub reference: FoReference,
}

impl FoSpec {
    pub fn new(
        amplitude: f64,
        phase_rad: f64,
        omega: f64,
        start: i64,
        stop: i64,
        reference: FoReference,
    ) -> Result<Self> {
        if !(omega > 0.0 && omega < PI) {
            return Err(CrbError::InvalidArgument(format!(
                "FO frequency {omega} rad/sample outside (0, pi)"
            )));
        }
        if start > stop {
            return Err(CrbError::InvalidArgument("FO start after stop".into()));
        }
        if !(amplitude >= 0.0) || !amplitude.is_finite() || !phase_rad.is_finite() {
            return Err(CrbError::InvalidArgument(
                "FO amplitude must be finite and non-negative".into(),
            ));
        }
        Ok(Self {
            amplitude,
            phase_rad,
            omega,
            start,
            stop,
            reference,
        })
    }

    /// Output-referenced FO spanning every sample (steady state only).
    pub fn output(amplitude: f64, phase_rad: f64, omega: f64) -> Result<Self> {
        Self::new(amplitude, phase_rad, omega, i64::MIN, i64::MAX, FoReference::Output)
    }

    /// Input-referenced FO switched on at k = 0 and never switched off.
    pub fn input_from_start(amplitude: f64, phase_rad: f64, omega: f64) -> Result<Self> {
        Self::new(amplitude, phase_rad, omega, 0, i64::MAX, FoReference::Input)
    }

    pub fn is_active(&self, k: i64) -> bool {
        self.start <= k && k <= self.stop
    }

    /// Cosine value at sample k, gated by the activity window.
    pub fn value(&self, k: i64) -> f64 {
        if self.is_active(k) {
            self.amplitude * (self.omega * k as f64 + self.phase_rad).cos()
        } else {
            0.0
        }
    }

    /// Complex amplitude amplitude * e^{j phase}.
    pub fn phasor(&self) -> Complex64 {
        Complex64::from_polar(self.amplitude, self.phase_rad)
    }
}

/// Wraps an angle to (-pi, pi].
pub fn wrap_phase(phi: f64) -> f64 {
    let mut w = phi.rem_euclid(2.0 * PI);
    if w > PI {
        w -= 2.0 * PI;
    }
    w
}

/// Steady-state output FO (A_1, phi_1) produced by an input FO through B/A.
pub fn output_fo_from_input(sys: &ArmaxSystem, fo_in: &FoSpec) -> Result<(f64, f64)> {
    if fo_in.reference != FoReference::Input {
        return Err(CrbError::InvalidArgument("expected an input-referenced FO".into()));
    }
    let a = sys.a().eval_at_frequency(fo_in.omega);
    if a.norm() == 0.0 {
        return Err(CrbError::PoleOnFoFrequency);
    }
    let b = sys.b().eval_at_frequency(fo_in.omega);
    let amp = b.norm() / a.norm() * fo_in.amplitude;
    let phase = wrap_phase(fo_in.phase_rad + b.arg() - a.arg());
    Ok((amp, phase))
}

/// Input FO (switched on at k = 0) whose steady-state output is (A_1, phi_1).
pub fn input_fo_from_output(sys: &ArmaxSystem, amplitude: f64, phase_rad: f64, omega: f64) -> Result<FoSpec> {
    let b = sys.b().eval_at_frequency(omega);
    if b.norm() == 0.0 {
        return Err(CrbError::UnobservableFo);
    }
    let a = sys.a().eval_at_frequency(omega);
    let amp = amplitude * a.norm() / b.norm();
    let phase = wrap_phase(phase_rad - b.arg() + a.arg());
    FoSpec::input_from_start(amp, phase, omega)
}
