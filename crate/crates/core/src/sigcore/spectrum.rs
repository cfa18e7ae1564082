use crate::error::Result;
use crate::sysmodel::ArmaxSystem;

use super::filter::{decay_length, lfilter};
use super::poly::max_root_radius;

/// Two-sided ARMA power spectral density sigma_e^2 |C(w)|^2 / |A(w)|^2,
/// no sample-rate scaling, `omega` in radians/sample.
pub fn arma_psd(sys: &ArmaxSystem, omega: f64) -> f64 {
    let c = sys.c().eval_at_frequency(omega).norm_sqr();
    let a = sys.a().eval_at_frequency(omega).norm_sqr();
    sys.sigma_e2() * c / a
}

/// Variance of the stationary ARMA process C/A e, from the squared impulse
/// response of C/A (Parseval).
pub fn arma_variance(sys: &ArmaxSystem) -> Result<f64> {
    Ok(sys.sigma_e2() * impulse_energy(sys.c().coeffs(), sys.a().coeffs(), max_root_radius(sys.a())?)?)
}

/// Sum of h[k]^2 for the impulse response of num/den, extended until the last
/// block contributes below 1e-12 of the accumulated sum.
pub(crate) fn impulse_energy(num: &[f64], den: &[f64], radius: f64) -> Result<f64> {
    Ok(impulse_response(num, den, radius, 1e-12)?.iter().map(|v| v * v).sum())
}

/// Impulse response of num/den, doubled in length until the squared tail of
/// the last block is at most `tail_tol` of the total energy.
pub(crate) fn impulse_response(num: &[f64], den: &[f64], radius: f64, tail_tol: f64) -> Result<Vec<f64>> {
    let block = decay_length(radius, 1e-6)?.max(num.len()).max(16);
    let mut len = 2 * block;
    loop {
        let mut x = vec![0.0; len];
        x[0] = 1.0;
        let h = lfilter(num, den, &x);
        let total: f64 = h.iter().map(|v| v * v).sum();
        let tail: f64 = h[len - block..].iter().map(|v| v * v).sum();
        if tail <= tail_tol * total || total == 0.0 {
            return Ok(h);
        }
        len *= 2;
    }
}
