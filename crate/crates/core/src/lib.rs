//! Asymptotic Cramér-Rao bounds for the joint estimation of ARMAX power-system
//! models and a forced oscillation (FO).
//!
//! Two measurement situations are supported: an FO whose steady-state response
//! alone is present in the record ([`Experiment::Case1`]) and an FO that starts
//! at the first recorded sample so its startup transient is observed as well
//! ([`Experiment::Case2`]). The parameter bound is obtained from a Monte-Carlo
//! average of predictor gradients and then propagated to electromechanical mode
//! frequency/damping and to the output FO amplitude/phase.
//!
//! Module map:
//! - [`sigcore`]: delay-operator polynomials, filtering, spectra, pole/mode maps.
//! - [`sysmodel`]: ARMAX systems, FO definitions, signal synthesis, SNR calibration.
//! - [`fisher`]: gradient signals, Monte-Carlo Fisher information, CRB matrices.
//! - [`secondary`]: Taylor-series propagation to modes and output-FO parameters.
//! - [`scenarios`]: single-point runs, sweeps and CSV output used by the CLI.

// `!(x > 0.0)` is used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fisher;
pub mod scenarios;
pub mod secondary;
pub mod sigcore;
pub mod sysmodel;

pub use error::{CrbError, Result};
pub use fisher::{
    crb_monte_carlo, fisher_information, fisher_semi_analytic, gradients_case1, gradients_case2,
    predict_one_step, Case, CrbMatrix, Experiment, GradientMatrix, Param, Theta, ThetaLayout,
};
pub use secondary::{crb_fo_case1, crb_fo_case2, crb_modes, jacobian_x, FoCrb, FoPhasor, ModeCrb};
pub use sigcore::{mode_from_pole, pole_from_mode, Mode, Pole, Polynomial};
pub use sysmodel::{default_system, ArmaxSystem, ExtSignal, FoReference, FoSpec, NoiseRealization};
