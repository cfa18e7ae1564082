use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{CrbError, Result};

/// Electromechanical mode: frequency in Hz and damping ratio in percent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub frequency_hz: f64,
    pub damping_pct: f64,
}

/// Discrete-time pole together with the sample rate it refers to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pole {
    pub value: Complex64,
    pub fs: f64,
}

impl Pole {
    /// Continuous-time image fs * log(p), principal branch.
    pub fn continuous(&self) -> Result<Complex64> {
        if self.value == Complex64::new(0.0, 0.0) {
            return Err(CrbError::DegeneratePole("pole at z=0"));
        }
        Ok(self.fs * self.value.ln())
    }
}

/// Mode of a pole from lambda = fs log p: f = |Im lambda| / 2pi and
/// zeta = -100 Re(lambda) / |lambda|.
///
/// Conjugate poles map to the same mode.
pub fn mode_from_pole(p: Pole) -> Result<Mode> {
    let lambda = p.continuous()?;
    let mag = lambda.norm();
    if mag == 0.0 {
        return Err(CrbError::DegeneratePole("degenerate pole at z=1"));
    }
    Ok(Mode {
        frequency_hz: lambda.im.abs() / (2.0 * PI),
        damping_pct: -100.0 * lambda.re / mag,
    })
}

/// Upper-half-plane pole realizing the mode at sample rate `fs`.
pub fn pole_from_mode(m: Mode, fs: f64) -> Result<Pole> {
    if !(fs > 0.0) {
        return Err(CrbError::InvalidArgument("sample rate must be positive".into()));
    }
    if m.frequency_hz >= fs / 2.0 {
        return Err(CrbError::AboveNyquist {
            freq: m.frequency_hz,
            nyquist: fs / 2.0,
        });
    }
    if !(m.frequency_hz > 0.0) {
        // With Im(lambda) = 0 the decay rate |lambda| is not determined by (f, zeta).
        return Err(CrbError::InvalidArgument(
            "mode frequency must be positive to fix the pole radius".into(),
        ));
    }
    if !(0.0..100.0).contains(&m.damping_pct) {
        return Err(CrbError::InvalidArgument(format!(
            "damping {} % outside [0, 100)",
            m.damping_pct
        )));
    }
    let zeta = m.damping_pct / 100.0;
    let wd = 2.0 * PI * m.frequency_hz;
    let mag = wd / (1.0 - zeta * zeta).sqrt();
    let lambda = Complex64::new(-zeta * mag, wd);
    Ok(Pole {
        value: (lambda / fs).exp(),
        fs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn unit_circle_quarter_rate() {
        let m = mode_from_pole(Pole {
            value: Complex64::from_polar(1.0, PI / 2.0),
            fs: 3.0,
        })
        .unwrap();
        assert!((m.frequency_hz - 0.75).abs() < 1e-12);
        assert!(m.damping_pct.abs() < 1e-12);
    }

    #[test]
    fn positive_real_pole_fully_damped() {
        let m = mode_from_pole(Pole {
            value: Complex64::new(0.5, 0.0),
            fs: 3.0,
        })
        .unwrap();
        assert_eq!(m.frequency_hz, 0.0);
        assert!((m.damping_pct - 100.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_poles() {
        let zero = Pole {
            value: Complex64::new(0.0, 0.0),
            fs: 3.0,
        };
        assert!(mode_from_pole(zero).is_err());
        let one = Pole {
            value: Complex64::new(1.0, 0.0),
            fs: 3.0,
        };
        assert_eq!(
            mode_from_pole(one),
            Err(CrbError::DegeneratePole("degenerate pole at z=1"))
        );
    }

    #[test]
    fn inverse_of_quarter_rate() {
        let p = pole_from_mode(
            Mode {
                frequency_hz: 0.75,
                damping_pct: 0.0,
            },
            3.0,
        )
        .unwrap();
        assert!((p.value - Complex64::from_polar(1.0, PI / 2.0)).norm() < 1e-14);
    }

    #[test]
    fn monitored_mode_round_trip_and_stable() {
        let target = Mode {
            frequency_hz: 0.372,
            damping_pct: 4.67,
        };
        let p = pole_from_mode(target, 3.0).unwrap();
        assert!(p.value.norm() < 1.0);
        let back = mode_from_pole(p).unwrap();
        assert!((back.frequency_hz - 0.372).abs() < 1e-12);
        assert!((back.damping_pct - 4.67).abs() < 1e-10);
    }

    #[test]
    fn nyquist_rejected() {
        let r = pole_from_mode(
            Mode {
                frequency_hz: 1.5,
                damping_pct: 5.0,
            },
            3.0,
        );
        assert!(matches!(r, Err(CrbError::AboveNyquist { .. })));
    }

    #[test]
    fn conjugate_gives_same_mode() {
        let p = Complex64::from_polar(0.96, 0.8);
        let a = mode_from_pole(Pole { value: p, fs: 3.0 }).unwrap();
        let b = mode_from_pole(Pole {
            value: p.conj(),
            fs: 3.0,
        })
        .unwrap();
        assert_eq!(a, b);
    }

    proptest! {
        #[test]
        fn pole_mode_round_trip(f in 0.001f64..1.499, d in 0.0f64..99.0) {
            let m = Mode { frequency_hz: f, damping_pct: d };
            let back = mode_from_pole(pole_from_mode(m, 3.0).unwrap()).unwrap();
            prop_assert!((back.frequency_hz - f).abs() <= 1e-10 * f);
            prop_assert!((back.damping_pct - d).abs() <= 1e-10 * d.max(1e-2));
        }
    }
}
