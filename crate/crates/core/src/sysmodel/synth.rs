use crate::error::{CrbError, Result};
use crate::sigcore::lfilter;

use super::{ArmaxSystem, ExtSignal, FoReference, FoSpec, NoiseRealization};

/// Stationary ambient response (C/A) e. The filter starts at the first buffer
/// sample, so the pre-record history acts as burn-in.
pub fn synth_ambient(sys: &ArmaxSystem, e: &NoiseRealization) -> ExtSignal {
    let y = lfilter(sys.c().coeffs(), sys.a().coeffs(), &e.signal.samples);
    ExtSignal::new(y, e.signal.origin)
}

/// Ambient response plus the steady-state output FO A_1 cos(w k + phi_1),
/// present at every buffer sample including the pre-record history.
pub fn synth_case1(sys: &ArmaxSystem, fo_out: &FoSpec, e: &NoiseRealization) -> Result<ExtSignal> {
    if fo_out.reference != FoReference::Output {
        return Err(CrbError::InvalidArgument("case 1 expects an output-referenced FO".into()));
    }
    let mut y = synth_ambient(sys, e);
    let n = y.len() as i64;
    if fo_out.start > -(y.origin as i64) || fo_out.stop < n - 1 {
        return Err(CrbError::InvalidArgument(
            "case 1 FO must span the whole record and its history".into(),
        ));
    }
    let origin = y.origin;
    for (t, v) in y.samples.iter_mut().enumerate() {
        *v += fo_out.value(t as i64 - origin as i64);
    }
    Ok(y)
}

/// Ambient response plus the zero-state response of B/A to an input FO that
/// switches on at k = 0; the record contains the startup transient.
pub fn synth_case2(sys: &ArmaxSystem, fo_in: &FoSpec, e: &NoiseRealization) -> Result<ExtSignal> {
    if fo_in.reference != FoReference::Input {
        return Err(CrbError::InvalidArgument("case 2 expects an input-referenced FO".into()));
    }
    let n = e.len() as i64;
    if fo_in.start != 0 || fo_in.stop < n - 1 {
        return Err(CrbError::InvalidArgument(
            "case 2 FO must start at k = 0 and last through the record".into(),
        ));
    }
    let mut y = synth_ambient(sys, e);
    let fo = fo_response(sys, fo_in, y.origin, y.samples.len());
    for (v, f) in y.samples.iter_mut().zip(fo) {
        *v += f;
    }
    Ok(y)
}

/// Zero-state (B/A) u over a buffer with the given origin.
pub(crate) fn fo_response(sys: &ArmaxSystem, fo_in: &FoSpec, origin: usize, len: usize) -> Vec<f64> {
    let u: Vec<f64> = (0..len).map(|t| fo_in.value(t as i64 - origin as i64)).collect();
    lfilter(sys.b().coeffs(), sys.a().coeffs(), &u)
}
