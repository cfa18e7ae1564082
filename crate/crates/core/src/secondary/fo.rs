use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;

use crate::error::{CrbError, Result};
use crate::fisher::{Case, CrbMatrix, Param, Theta, ThetaLayout};
use crate::sysmodel::{ArmaxSystem, FoSpec};

/// Output FO phasor X = A_1 e^{j phi_1} = alpha + j beta.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FoPhasor {
    pub alpha: f64,
    pub beta: f64,
}

impl FoPhasor {
    pub fn from_polar(amplitude: f64, phase_rad: f64) -> Self {
        Self {
            alpha: amplitude * phase_rad.cos(),
            beta: amplitude * phase_rad.sin(),
        }
    }

    pub fn from_complex(x: Complex64) -> Self {
        Self { alpha: x.re, beta: x.im }
    }

    /// (A_1, phi_1) with phi_1 in (-pi, pi].
    pub fn to_polar(self) -> (f64, f64) {
        (self.alpha.hypot(self.beta), self.beta.atan2(self.alpha))
    }
}

/// Variances of the output FO amplitude, phase and frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FoCrb {
    /// signal units^2
    pub var_amplitude: f64,
    /// rad^2
    pub var_phase: f64,
    /// (rad/sample)^2
    pub var_omega: f64,
    pub cov_amplitude_phase: f64,
}

fn require_case(crb: &CrbMatrix, case: Case) -> Result<()> {
    if crb.case() != case {
        return Err(CrbError::CaseMismatch {
            expected: case.name(),
            got: crb.case().name(),
        });
    }
    Ok(())
}

fn diag(crb: &CrbMatrix, p: Param) -> Result<f64> {
    crb.variance(p)
        .ok_or_else(|| CrbError::InvalidArgument(format!("{p:?} not among the free parameters")))
}

/// Case 1: the FO parameters are primary, so their bounds are the last three
/// diagonal entries of the parameter CRB.
pub fn crb_fo_case1(crb: &CrbMatrix) -> Result<FoCrb> {
    require_case(crb, Case::One)?;
    let ia = crb.layout.index_of(Param::FoAmplitude);
    let ip = crb.layout.index_of(Param::FoPhase);
    Ok(FoCrb {
        var_amplitude: diag(crb, Param::FoAmplitude)?,
        var_phase: diag(crb, Param::FoPhase)?,
        var_omega: diag(crb, Param::FoFrequency)?,
        cov_amplitude_phase: match (ia, ip) {
            (Some(i), Some(j)) => crb.matrix[(i, j)],
            _ => f64::NAN,
        },
    })
}

/// Output phasor X = B(w)/A(w) Ã e^{jφ̃} of a case-2 parameter vector.
pub fn output_phasor(theta: &Theta) -> Result<Complex64> {
    let fo = theta
        .fo
        .ok_or_else(|| CrbError::InvalidArgument("FO parameters missing".into()))?;
    let av = theta.a.eval_at_frequency(fo.omega);
    if av.norm() == 0.0 {
        return Err(CrbError::PoleOnFoFrequency);
    }
    Ok(theta.b.eval_at_frequency(fo.omega) / av * Complex64::from_polar(fo.amplitude, fo.phase_rad))
}

/// Complex derivative of the output phasor X with respect to every entry of
/// the case-2 parameter vector (a, b, c, Ã, φ̃, w), in layout order.
///
/// dX/dw is the derivative of B(w)/A(w) by the quotient rule, times Ã e^{jφ̃}.
pub fn jacobian_x(sys: &ArmaxSystem, fo_in: &FoSpec) -> Result<Vec<Complex64>> {
    let w = fo_in.omega;
    let av = sys.a().eval_at_frequency(w);
    if av.norm() == 0.0 {
        return Err(CrbError::PoleOnFoFrequency);
    }
    let bv = sys.b().eval_at_frequency(w);
    let u = Complex64::from_polar(fo_in.amplitude, fo_in.phase_rad);
    let unit = Complex64::from_polar(1.0, fo_in.phase_rad);
    let layout = ThetaLayout::for_system(Case::Two, sys);
    let rot = |i: usize| Complex64::from_polar(1.0, -(i as f64) * w);
    let d_ratio = (sys.b().d_eval_at_frequency(w) * av - bv * sys.a().d_eval_at_frequency(w)) / (av * av);
    Ok(layout
        .params()
        .iter()
        .map(|p| match *p {
            Param::Ar(i) => -rot(i) * bv / (av * av) * u,
            Param::X(i) => rot(i) / av * u,
            Param::Ma(_) => Complex64::new(0.0, 0.0),
            Param::FoAmplitude => bv / av * unit,
            Param::FoPhase => bv / av * Complex64::i() * u,
            Param::FoFrequency => d_ratio * u,
        })
        .collect())
}

/// Case 2: Cov(alpha, beta) = J Crb J^T with J = [Re J_X; Im J_X], then
/// Cov(A_1, phi_1) = J_Aphi Cov(alpha, beta) J_Aphi^T. The frequency bound is
/// the w_1 diagonal entry of the parameter CRB.
///
/// Only J_X columns of the free parameters in `crb` enter the product.
pub fn crb_fo_case2(crb: &CrbMatrix, sys: &ArmaxSystem, fo_in: &FoSpec) -> Result<FoCrb> {
    require_case(crb, Case::Two)?;
    let full = ThetaLayout::for_system(Case::Two, sys);
    let jx = jacobian_x(sys, fo_in)?;
    let d = crb.layout.dim();
    let mut jab = DMatrix::zeros(2, d);
    for (col, &p) in crb.layout.params().iter().enumerate() {
        let idx = full
            .index_of(p)
            .ok_or_else(|| CrbError::LengthMismatch(d, full.dim()))?;
        jab[(0, col)] = jx[idx].re;
        jab[(1, col)] = jx[idx].im;
    }
    let cov_ab = &jab * &crb.matrix * jab.transpose();
    let x = output_phasor(&Theta {
        case: Case::Two,
        a: sys.a().clone(),
        b: sys.b().clone(),
        c: sys.c().clone(),
        fo: Some(*fo_in),
    })?;
    let (amp, phi) = FoPhasor::from_complex(x).to_polar();
    if !(amp > 0.0) {
        return Err(CrbError::ZeroAmplitude);
    }
    let j_ap = Matrix2::new(amp * phi.cos(), amp * phi.sin(), -phi.sin(), phi.cos()) / amp;
    let cov_ab = Matrix2::new(cov_ab[(0, 0)], cov_ab[(0, 1)], cov_ab[(1, 0)], cov_ab[(1, 1)]);
    let cov = j_ap * cov_ab * j_ap.transpose();
    Ok(FoCrb {
        var_amplitude: cov[(0, 0)],
        var_phase: cov[(1, 1)],
        var_omega: diag(crb, Param::FoFrequency)?,
        cov_amplitude_phase: 0.5 * (cov[(0, 1)] + cov[(1, 0)]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fisher::Experiment;
    use crate::sigcore::Polynomial;

    fn sys() -> ArmaxSystem {
        ArmaxSystem::new(
            Polynomial::new(vec![1.0, -1.1, 0.6]).unwrap(),
            Polynomial::new(vec![0.8, 0.3]).unwrap(),
            Polynomial::new(vec![1.0, 0.2]).unwrap(),
            1.0,
            3.0,
        )
        .unwrap()
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let s = sys();
        let fo = FoSpec::input_from_start(1.7, 0.4, 0.9).unwrap();
        let truth = Theta::truth(&s, &Experiment::Case2(fo));
        let jx = jacobian_x(&s, &fo).unwrap();
        let h = 1e-7;
        for (j, &p) in truth.layout().params().iter().enumerate() {
            let v = truth.get(p);
            let fd = (output_phasor(&truth.with(p, v + h)).unwrap() - output_phasor(&truth.with(p, v - h)).unwrap())
                / (2.0 * h);
            if let Param::Ma(_) = p {
                assert_eq!(jx[j], Complex64::new(0.0, 0.0));
                assert_eq!(fd, Complex64::new(0.0, 0.0));
            } else {
                assert!((fd - jx[j]).norm() <= 1e-5 * jx[j].norm(), "{p:?}");
            }
        }
    }

    #[test]
    fn unity_transfer_keeps_input_bounds() {
        let a = Polynomial::new(vec![1.0, -0.5]).unwrap();
        let s = ArmaxSystem::new(a.clone(), a, Polynomial::one(), 1.0, 3.0).unwrap();
        let fo = FoSpec::input_from_start(2.0, 0.7, 1.2).unwrap();
        let layout = ThetaLayout::for_system(Case::Two, &s);
        let mut m = DMatrix::zeros(layout.dim(), layout.dim());
        let ia = layout.index_of(Param::FoAmplitude).unwrap();
        let ip = layout.index_of(Param::FoPhase).unwrap();
        let iw = layout.index_of(Param::FoFrequency).unwrap();
        m[(ia, ia)] = 0.04;
        m[(ip, ip)] = 0.01;
        m[(iw, iw)] = 1e-6;
        let crb = CrbMatrix::from_covariance(m, layout).unwrap();
        let out = crb_fo_case2(&crb, &s, &fo).unwrap();
        assert!((out.var_amplitude - 0.04).abs() < 1e-14);
        assert!((out.var_phase - 0.01).abs() < 1e-14);
        assert_eq!(out.var_omega, 1e-6);
    }

    #[test]
    fn zero_covariance_and_case_checks() {
        let s = sys();
        let fo = FoSpec::input_from_start(1.0, 0.0, 0.5).unwrap();
        let l2 = ThetaLayout::for_system(Case::Two, &s);
        let zero = CrbMatrix::from_covariance(DMatrix::zeros(l2.dim(), l2.dim()), l2).unwrap();
        let out = crb_fo_case2(&zero, &s, &fo).unwrap();
        assert_eq!((out.var_amplitude, out.var_phase, out.var_omega), (0.0, 0.0, 0.0));
        assert!(matches!(crb_fo_case1(&zero), Err(CrbError::CaseMismatch { .. })));

        let l1 = ThetaLayout::for_system(Case::One, &s);
        let id = CrbMatrix::from_covariance(DMatrix::identity(l1.dim(), l1.dim()), l1).unwrap();
        let f = crb_fo_case1(&id).unwrap();
        assert_eq!((f.var_amplitude, f.var_phase, f.var_omega), (1.0, 1.0, 1.0));
        assert!(matches!(crb_fo_case2(&id, &s, &fo), Err(CrbError::CaseMismatch { .. })));
    }

    #[test]
    fn zero_output_amplitude_refused() {
        let s = sys();
        let fo = FoSpec::input_from_start(0.0, 0.0, 0.5).unwrap();
        let l2 = ThetaLayout::for_system(Case::Two, &s);
        let zero = CrbMatrix::from_covariance(DMatrix::zeros(l2.dim(), l2.dim()), l2).unwrap();
        assert_eq!(crb_fo_case2(&zero, &s, &fo), Err(CrbError::ZeroAmplitude));
    }

    #[test]
    fn phasor_round_trip() {
        let (amp, phi) = FoPhasor::from_polar(1.3, -2.2).to_polar();
        assert!((amp - 1.3).abs() < 1e-12 && (phi + 2.2).abs() < 1e-12);
    }
}
