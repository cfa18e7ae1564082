use crate::error::{CrbError, Result};
use crate::sigcore::arma_variance;

use super::{ArmaxSystem, FoReference, FoSpec};

fn fo_power(fo_out: &FoSpec) -> Result<f64> {
    if fo_out.reference != FoReference::Output {
        return Err(CrbError::InvalidArgument("SNR is defined on the output FO".into()));
    }
    Ok(fo_out.amplitude * fo_out.amplitude / 2.0)
}

/// sigma_e2 giving `snr_db` between the FO power A_1^2/2 and the ARMA PSD
/// sigma_e2 |C/A|^2 at the FO frequency.
pub fn calibrate_sigma_local(sys: &ArmaxSystem, fo_out: &FoSpec, snr_db: f64) -> Result<f64> {
    let power = fo_power(fo_out)?;
    let a = sys.a().eval_at_frequency(fo_out.omega).norm_sqr();
    if a == 0.0 {
        return Err(CrbError::PoleOnFoFrequency);
    }
    let c = sys.c().eval_at_frequency(fo_out.omega).norm_sqr();
    Ok(power * a / (c * 10f64.powf(snr_db / 10.0)))
}

/// sigma_e2 giving `snr_db` between the FO power and the total ARMA variance
/// (the mean PSD over the band).
pub fn calibrate_sigma_global(sys: &ArmaxSystem, fo_out: &FoSpec, snr_db: f64) -> Result<f64> {
    let power = fo_power(fo_out)?;
    let unit = arma_variance(&sys.with_sigma_e2(1.0)?)?;
    Ok(power / (unit * 10f64.powf(snr_db / 10.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sigcore::{arma_psd, Polynomial};

    fn p(c: &[f64]) -> Polynomial {
        Polynomial::new(c.to_vec()).unwrap()
    }

    fn white() -> ArmaxSystem {
        ArmaxSystem::new(p(&[1.0]), p(&[1.0]), p(&[1.0]), 1.0, 3.0).unwrap()
    }

    #[test]
    fn local_white_40db() {
        let fo = FoSpec::output(1.0, 0.8, 0.7).unwrap();
        let s2 = calibrate_sigma_local(&white(), &fo, 40.0).unwrap();
        assert!((s2 - 0.5e-4).abs() < 1e-18);
    }

    #[test]
    fn local_zero_db_and_round_trip() {
        let s = ArmaxSystem::new(p(&[1.0, -1.2, 0.8]), p(&[1.0]), p(&[1.0, 0.3]), 1.0, 3.0).unwrap();
        let fo = FoSpec::output(1.5, 0.8, 0.9).unwrap();
        let s0 = calibrate_sigma_local(&s, &fo, 0.0).unwrap();
        let ratio = s.a().eval_at_frequency(0.9).norm_sqr() / s.c().eval_at_frequency(0.9).norm_sqr();
        assert!((s0 - 1.125 * ratio).abs() < 1e-12 * s0);
        for snr in [-3.0, 9.5, 40.0] {
            let s2 = calibrate_sigma_local(&s, &fo, snr).unwrap();
            let psd = arma_psd(&s.with_sigma_e2(s2).unwrap(), fo.omega);
            let back = 10.0 * (1.125 / psd).log10();
            assert!((back - snr).abs() < 1e-10);
        }
    }

    #[test]
    fn global_white() {
        let fo = FoSpec::output(1.0, 0.8, 0.7).unwrap();
        let s2 = calibrate_sigma_global(&white(), &fo, 9.5).unwrap();
        assert!((s2 - 0.5 * 10f64.powf(-0.95)).abs() < 1e-15);
        let s0 = calibrate_sigma_global(&white(), &fo, 0.0).unwrap();
        assert!((s0 - 0.5).abs() < 1e-15);
    }

    #[test]
    fn global_round_trip() {
        let s = ArmaxSystem::new(p(&[1.0, -1.2, 0.8]), p(&[1.0]), p(&[1.0, 0.3]), 1.0, 3.0).unwrap();
        let fo = FoSpec::output(1.0, 0.8, 0.9).unwrap();
        let s2 = calibrate_sigma_global(&s, &fo, 9.5).unwrap();
        let var = arma_variance(&s.with_sigma_e2(s2).unwrap()).unwrap();
        assert!((10.0 * (0.5 / var).log10() - 9.5).abs() < 1e-10);
    }
}
