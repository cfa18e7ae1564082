use crate::error::{CrbError, Result};
use crate::sigcore::{lfilter, max_root_radius};
use crate::sysmodel::ExtSignal;

use super::theta::{Case, Theta};

/// One-step-ahead prediction over the record samples k = 0..N.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub yhat: Vec<f64>,
    pub eps: Vec<f64>,
}

/// Runs the predictor recursion for `theta` over the whole buffer, starting
/// with zero state at its first sample, and returns the record part.
///
/// Prediction errors:
/// - ambient: eps = (A/C) y
/// - case 1:  eps = (A/C) (y - A_1 cos(w k + phi_1))
/// - case 2:  eps = (A/C) y - (B/C) u,  u the gated input FO
///
/// Only used to validate gradients; the Monte-Carlo loop never calls it.
pub fn predict_one_step(theta: &Theta, y: &ExtSignal) -> Result<Prediction> {
    let rc = max_root_radius(&theta.c)?;
    if rc >= 1.0 {
        return Err(CrbError::NonInvertibleMa(rc));
    }
    let (a, b, c) = (theta.a.coeffs(), theta.b.coeffs(), theta.c.coeffs());
    let ks = (0..y.samples.len()).map(|t| y.k_at(t));
    let eps_full = match (theta.case, theta.fo) {
        (Case::Ambient, _) => lfilter(a, c, &y.samples),
        (Case::One, Some(fo)) => {
            let w: Vec<f64> = y
                .samples
                .iter()
                .zip(ks)
                .map(|(v, k)| v - fo.amplitude * (fo.omega * k as f64 + fo.phase_rad).cos())
                .collect();
            lfilter(a, c, &w)
        }
        (Case::Two, Some(fo)) => {
            let u: Vec<f64> = ks.map(|k| fo.value(k)).collect();
            let ey = lfilter(a, c, &y.samples);
            let eu = lfilter(b, c, &u);
            ey.iter().zip(&eu).map(|(p, q)| p - q).collect()
        }
        _ => {
            return Err(CrbError::InvalidArgument("FO parameters missing".into()));
        }
    };
    let eps = eps_full[y.origin..].to_vec();
    let yhat = y.record().iter().zip(&eps).map(|(v, r)| v - r).collect();
    Ok(Prediction { yhat, eps })
}
