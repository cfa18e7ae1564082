use nalgebra::DMatrix;

use crate::error::{CrbError, Result};
use crate::sigcore::{filter_steady_state, filter_steady_state_from, lfilter, Polynomial};
use crate::sysmodel::{ArmaxSystem, ExtSignal, FoReference, FoSpec};

use super::theta::{Case, Param, ThetaLayout};

/// Predictor gradients psi(k, theta_o), one row per record sample and one
/// column per parameter in layout order.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientMatrix {
    pub data: DMatrix<f64>,
    pub layout: ThetaLayout,
}

impl GradientMatrix {
    fn checked(data: DMatrix<f64>, layout: ThetaLayout) -> Result<Self> {
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            let rows = data.nrows();
            return Err(CrbError::NonFinite {
                sample: pos % rows,
                column: pos / rows,
            });
        }
        Ok(Self { data, layout })
    }

    pub fn column(&self, p: Param) -> Option<Vec<f64>> {
        self.layout
            .index_of(p)
            .map(|j| self.data.column(j).iter().copied().collect())
    }
}

fn check_pair(y: &ExtSignal, e: &ExtSignal) -> Result<()> {
    if y.samples.len() != e.samples.len() {
        return Err(CrbError::LengthMismatch(y.samples.len(), e.samples.len()));
    }
    if y.origin != e.origin {
        return Err(CrbError::LengthMismatch(y.origin, e.origin));
    }
    Ok(())
}

/// buf at sample k - lag, zero outside the buffer.
#[inline]
fn lagged(buf: &[f64], origin: usize, k: usize, lag: usize) -> f64 {
    let t = origin + k;
    if t >= lag {
        buf[t - lag]
    } else {
        0.0
    }
}

/// Fills the stochastic AR and MA columns shared by every case:
/// a_i <- sign_a * (1/C) y[k-i] and c_i <- (1/C) e[k-i].
fn fill_arma_columns(
    g: &mut DMatrix<f64>,
    layout: &ThetaLayout,
    sys: &ArmaxSystem,
    y: &ExtSignal,
    e: &ExtSignal,
) {
    let inv_c_y = lfilter(&[1.0], sys.c().coeffs(), &y.samples);
    let inv_c_e = lfilter(&[1.0], sys.c().coeffs(), &e.samples);
    let n = y.len();
    for (j, p) in layout.params().iter().enumerate() {
        match *p {
            Param::Ar(i) => {
                for k in 0..n {
                    g[(k, j)] = -lagged(&inv_c_y, y.origin, k, i);
                }
            }
            Param::Ma(i) => {
                for k in 0..n {
                    g[(k, j)] = lagged(&inv_c_e, e.origin, k, i);
                }
            }
            _ => {}
        }
    }
}

fn set_column(g: &mut DMatrix<f64>, j: usize, values: &[f64]) {
    g.column_mut(j).copy_from_slice(values);
}

/// Gradients with no FO present: a_i = -(1/C) y[k-i], c_i = (1/C) e[k-i].
pub fn gradients_ambient(sys: &ArmaxSystem, y: &ExtSignal, e: &ExtSignal) -> Result<GradientMatrix> {
    check_pair(y, e)?;
    let layout = ThetaLayout::for_system(Case::Ambient, sys);
    let mut g = DMatrix::zeros(y.len(), layout.dim());
    fill_arma_columns(&mut g, &layout, sys, y, e);
    GradientMatrix::checked(g, layout)
}

/// Case-1 gradients (steady-state FO only).
///
/// Deterministic sinusoid filterings use the steady-state response; the AR
/// columns combine it with the zero-state (1/C) y over the burn-in-extended
/// record, and MA columns use the generating noise e (equal to the prediction
/// error at the true parameters).
pub fn gradients_case1(sys: &ArmaxSystem, fo_out: &FoSpec, y: &ExtSignal, e: &ExtSignal) -> Result<GradientMatrix> {
    check_pair(y, e)?;
    if fo_out.reference != FoReference::Output {
        return Err(CrbError::InvalidArgument("case 1 expects an output-referenced FO".into()));
    }
    let layout = ThetaLayout::for_system(Case::One, sys);
    let n = y.len();
    let mut g = DMatrix::zeros(n, layout.dim());
    fill_arma_columns(&mut g, &layout, sys, y, e);

    let (amp, w, phi) = (fo_out.amplitude, fo_out.omega, fo_out.phase_rad);
    let na = sys.na();
    let one = Polynomial::one();
    // (1/C) A_1 cos(w k + phi), steady state, for k = -na..n
    let s_c = filter_steady_state_from(
        &one,
        sys.c(),
        |k| amp * (w * k as f64 + phi).cos(),
        -(na as i64),
        n + na,
    )?;
    let [d_amp, d_phase, d_omega] = case1_fo_columns(sys, fo_out, n)?;

    for (j, p) in layout.params().iter().enumerate() {
        match *p {
            Param::Ar(i) => {
                for k in 0..n {
                    g[(k, j)] += s_c[k + na - i];
                }
            }
            Param::FoAmplitude => set_column(&mut g, j, &d_amp),
            Param::FoPhase => set_column(&mut g, j, &d_phase),
            Param::FoFrequency => set_column(&mut g, j, &d_omega),
            _ => {}
        }
    }
    GradientMatrix::checked(g, layout)
}

/// Case-2 gradients (FO switched on at k = 0).
///
/// Deterministic inputs are filtered with zero initial state from k = 0 so the
/// startup transient is retained; the FO is zero before its start.
pub fn gradients_case2(sys: &ArmaxSystem, fo_in: &FoSpec, y: &ExtSignal, e: &ExtSignal) -> Result<GradientMatrix> {
    check_pair(y, e)?;
    if fo_in.reference != FoReference::Input || fo_in.start != 0 {
        return Err(CrbError::InvalidArgument(
            "case 2 expects an input-referenced FO starting at k = 0".into(),
        ));
    }
    let layout = ThetaLayout::for_system(Case::Two, sys);
    let n = y.len();
    let mut g = DMatrix::zeros(n, layout.dim());
    fill_arma_columns(&mut g, &layout, sys, y, e);
    let det = case2_deterministic_inputs(sys, fo_in, n);
    for (j, p) in layout.params().iter().enumerate() {
        match *p {
            Param::X(i) => {
                for k in i..n {
                    g[(k, j)] = det.inv_c_u[k - i];
                }
            }
            Param::FoAmplitude => set_column(&mut g, j, &det.d_amp),
            Param::FoPhase => set_column(&mut g, j, &det.d_phase),
            Param::FoFrequency => set_column(&mut g, j, &det.d_omega),
            _ => {}
        }
    }
    GradientMatrix::checked(g, layout)
}

/// Steady-state (A/C)-filtered FO derivatives w.r.t. (A_1, phi_1, w_1).
pub(crate) fn case1_fo_columns(sys: &ArmaxSystem, fo: &FoSpec, n: usize) -> Result<[Vec<f64>; 3]> {
    let (amp, w, phi) = (fo.amplitude, fo.omega, fo.phase_rad);
    let (a, c) = (sys.a(), sys.c());
    Ok([
        filter_steady_state(a, c, |k| (w * k as f64 + phi).cos(), n)?,
        filter_steady_state(a, c, |k| -amp * (w * k as f64 + phi).sin(), n)?,
        filter_steady_state(a, c, |k| -amp * k as f64 * (w * k as f64 + phi).sin(), n)?,
    ])
}

pub(crate) struct Case2Inputs {
    /// (1/C) u[k], k = 0..n
    pub inv_c_u: Vec<f64>,
    pub d_amp: Vec<f64>,
    pub d_phase: Vec<f64>,
    pub d_omega: Vec<f64>,
}

pub(crate) fn case2_deterministic_inputs(sys: &ArmaxSystem, fo: &FoSpec, n: usize) -> Case2Inputs {
    let (amp, w, phi) = (fo.amplitude, fo.omega, fo.phase_rad);
    let gate = |k: usize| if fo.is_active(k as i64) { 1.0 } else { 0.0 };
    let u: Vec<f64> = (0..n).map(|k| fo.value(k as i64)).collect();
    let cosv: Vec<f64> = (0..n).map(|k| gate(k) * (w * k as f64 + phi).cos()).collect();
    let sinv: Vec<f64> = (0..n)
        .map(|k| -gate(k) * amp * (w * k as f64 + phi).sin())
        .collect();
    let ksinv: Vec<f64> = sinv.iter().enumerate().map(|(k, v)| k as f64 * v).collect();
    let (b, c) = (sys.b().coeffs(), sys.c().coeffs());
    Case2Inputs {
        inv_c_u: lfilter(&[1.0], c, &u),
        d_amp: lfilter(b, c, &cosv),
        d_phase: lfilter(b, c, &sinv),
        d_omega: lfilter(b, c, &ksinv),
    }
}

/// Gradients for any experiment.
pub fn gradients(
    sys: &ArmaxSystem,
    exp: &super::Experiment,
    y: &ExtSignal,
    e: &ExtSignal,
) -> Result<GradientMatrix> {
    match exp {
        super::Experiment::Ambient => gradients_ambient(sys, y, e),
        super::Experiment::Case1(fo) => gradients_case1(sys, fo, y, e),
        super::Experiment::Case2(fo) => gradients_case2(sys, fo, y, e),
    }
}
