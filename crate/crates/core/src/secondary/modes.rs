use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{CrbError, Result};
use crate::sigcore::{mode_from_pole, Mode, Pole, Polynomial};

/// Relative distance below which two roots count as repeated.
const REPEAT_TOL: f64 = 1e-7;

/// Propagated bound for one electromechanical mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeCrb {
    pub mode: Mode,
    /// Upper-half-plane pole of the conjugate pair.
    pub pole: Complex64,
    /// Hz^2.
    pub var_freq: f64,
    /// %^2.
    pub var_damp: f64,
    /// Hz %.
    pub covar: f64,
}

/// Real 2 x n_a Jacobian of (frequency Hz, damping %) of `pole` with respect to
/// a_1..a_{n_a}.
///
/// dp/da_j = -p^{n_a - j} / A'(p) for the z-domain image of A, then
/// lambda = fs log p, f = Im(lambda)/2pi and zeta = -100 Re(lambda)/|lambda|.
pub fn mode_jacobian(a: &Polynomial, fs: f64, pole: Complex64) -> Result<DMatrix<f64>> {
    let na = a.degree();
    let deriv = a.eval_z_derivative(pole);
    if deriv.norm() <= REPEAT_TOL * (1.0 + pole.norm()).powi(na as i32 - 1) {
        return Err(CrbError::RepeatedPole);
    }
    if pole.norm() == 0.0 {
        return Err(CrbError::DegeneratePole("pole at z=0"));
    }
    let lambda = fs * pole.ln();
    let (x, y) = (lambda.re, lambda.im);
    let mag = lambda.norm();
    if mag == 0.0 {
        return Err(CrbError::DegeneratePole("degenerate pole at z=1"));
    }
    let mag3 = mag * mag * mag;
    let dz_dx = -100.0 * y * y / mag3;
    let dz_dy = 100.0 * x * y / mag3;
    // frequency is |Im lambda|/2pi
    let sign = if y < 0.0 { -1.0 } else { 1.0 };
    let mut j = DMatrix::zeros(2, na);
    for col in 0..na {
        let dp = -pole.powi((na - col - 1) as i32) / deriv;
        let dl = fs * dp / pole;
        j[(0, col)] = sign * dl.im / (2.0 * std::f64::consts::PI);
        j[(1, col)] = dz_dx * dl.re + dz_dy * dl.im;
    }
    Ok(j)
}

/// Taylor-series propagation of the AR-block CRB to every complex mode of A.
///
/// One entry per conjugate pole pair, in root order (upper-half pole used).
/// Cross-covariances between the AR block and the other parameters are not
/// used.
pub fn crb_modes(crb_ar_block: &DMatrix<f64>, a: &Polynomial, fs: f64) -> Result<Vec<ModeCrb>> {
    let na = a.degree();
    if crb_ar_block.nrows() != na || crb_ar_block.ncols() != na {
        return Err(CrbError::LengthMismatch(crb_ar_block.nrows(), na));
    }
    let roots = a.roots()?;
    let mut out = Vec::new();
    for (i, &p) in roots.iter().enumerate() {
        if p.im <= 0.0 {
            continue;
        }
        let repeated = roots
            .iter()
            .enumerate()
            .any(|(k, &q)| k != i && (p - q).norm() <= REPEAT_TOL * p.norm().max(1.0));
        if repeated {
            return Err(CrbError::RepeatedPole);
        }
        let j = mode_jacobian(a, fs, p)?;
        let cov = &j * crb_ar_block * j.transpose();
        out.push(ModeCrb {
            mode: mode_from_pole(Pole { value: p, fs })?,
            pole: p,
            var_freq: cov[(0, 0)],
            var_damp: cov[(1, 1)],
            covar: 0.5 * (cov[(0, 1)] + cov[(1, 0)]),
        });
    }
    Ok(out)
}

/// Mode whose frequency is closest to `target_hz`.
pub fn nearest_mode(modes: &[ModeCrb], target_hz: f64) -> Option<&ModeCrb> {
    modes.iter().min_by(|x, y| {
        let dx = (x.mode.frequency_hz - target_hz).abs();
        let dy = (y.mode.frequency_hz - target_hz).abs();
        dx.total_cmp(&dy)
    })
}
