use crate::error::{CrbError, Result};
use crate::sigcore::{decay_length, max_root_radius, Polynomial, STEADY_STATE_TOL};

/// ARMAX system y = (B/A) u + (C/A) e with Var(e) = sigma_e2, sampled at fs.
#[derive(Debug, Clone, PartialEq)]
pub struct ArmaxSystem {
    a: Polynomial,
    b: Polynomial,
    c: Polynomial,
    sigma_e2: f64,
    fs: f64,
    burn_in: usize,
}

impl ArmaxSystem {
    /// Validates monic A and C, stable A, invertible C, positive sigma_e2 and fs.
    pub fn new(a: Polynomial, b: Polynomial, c: Polynomial, sigma_e2: f64, fs: f64) -> Result<Self> {
        if !a.is_monic() {
            return Err(CrbError::NonMonic("AR"));
        }
        if !c.is_monic() {
            return Err(CrbError::NonMonic("MA"));
        }
        if !(sigma_e2 > 0.0) || !sigma_e2.is_finite() {
            return Err(CrbError::InvalidArgument("sigma_e2 must be positive".into()));
        }
        if !(fs > 0.0) || !fs.is_finite() {
            return Err(CrbError::InvalidArgument("fs must be positive".into()));
        }
        let ra = max_root_radius(&a)?;
        if ra >= 1.0 {
            return Err(CrbError::Unstable {
                what: "AR polynomial",
                radius: ra,
            });
        }
        let rc = max_root_radius(&c)?;
        if rc >= 1.0 {
            return Err(CrbError::NonInvertibleMa(rc));
        }
        let burn_in = decay_length(ra.max(rc), STEADY_STATE_TOL)?;
        Ok(Self {
            a,
            b,
            c,
            sigma_e2,
            fs,
            burn_in,
        })
    }

    pub fn a(&self) -> &Polynomial {
        &self.a
    }
    pub fn b(&self) -> &Polynomial {
        &self.b
    }
    pub fn c(&self) -> &Polynomial {
        &self.c
    }
    pub fn sigma_e2(&self) -> f64 {
        self.sigma_e2
    }
    pub fn fs(&self) -> f64 {
        self.fs
    }
    pub fn na(&self) -> usize {
        self.a.degree()
    }
    pub fn nb(&self) -> usize {
        self.b.degree()
    }
    pub fn nc(&self) -> usize {
        self.c.degree()
    }

    /// Copy with a different noise variance.
    pub fn with_sigma_e2(&self, sigma_e2: f64) -> Result<Self> {
        if !(sigma_e2 > 0.0) || !sigma_e2.is_finite() {
            return Err(CrbError::InvalidArgument("sigma_e2 must be positive".into()));
        }
        Ok(Self {
            sigma_e2,
            ..self.clone()
        })
    }

    /// Copy with a different X polynomial.
    pub fn with_b(&self, b: Polynomial) -> Self {
        Self { b, ..self.clone() }
    }

    /// Samples for the slowest A or C pole to decay below 1e-12.
    pub fn burn_in(&self) -> usize {
        self.burn_in
    }

    /// Pre-record history kept in synthesized buffers: burn-in plus the largest
    /// polynomial order, so lagged gradient terms are also settled.
    pub fn history_len(&self) -> usize {
        self.burn_in + self.na().max(self.nb()).max(self.nc())
    }

    pub fn hz_to_omega(&self, hz: f64) -> f64 {
        2.0 * std::f64::consts::PI * hz / self.fs
    }

    pub fn omega_to_hz(&self, omega: f64) -> f64 {
        omega * self.fs / (2.0 * std::f64::consts::PI)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[f64]) -> Polynomial {
        Polynomial::new(c.to_vec()).unwrap()
    }

    #[test]
    fn rejects_unstable_and_non_invertible() {
        let r = ArmaxSystem::new(p(&[1.0, -1.1]), p(&[1.0]), p(&[1.0]), 1.0, 3.0);
        assert!(matches!(r, Err(CrbError::Unstable { .. })));
        let r = ArmaxSystem::new(p(&[1.0]), p(&[1.0]), p(&[1.0, 2.0]), 1.0, 3.0);
        assert!(matches!(r, Err(CrbError::NonInvertibleMa(_))));
        let r = ArmaxSystem::new(p(&[2.0]), p(&[1.0]), p(&[1.0]), 1.0, 3.0);
        assert_eq!(r, Err(CrbError::NonMonic("AR")));
    }

    #[test]
    fn burn_in_for_white_noise_is_zero() {
        let s = ArmaxSystem::new(p(&[1.0]), p(&[1.0]), p(&[1.0]), 1.0, 3.0).unwrap();
        assert_eq!(s.burn_in(), 0);
        assert_eq!(s.history_len(), 0);
    }

    #[test]
    fn burn_in_settles_slowest_pole() {
        let s = ArmaxSystem::new(p(&[1.0, -0.9]), p(&[1.0]), p(&[1.0, 0.5]), 1.0, 3.0).unwrap();
        let k = s.burn_in() as i32;
        assert!(0.9f64.powi(k) < 1e-12);
        assert!(0.9f64.powi(k - 1) >= 1e-12);
    }
}
