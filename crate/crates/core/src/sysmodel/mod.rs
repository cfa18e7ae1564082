//! ARMAX systems, forced-oscillation definitions, signal synthesis for the
//! ambient / steady-state / startup-transient conditions, and SNR calibration.

mod calibrate;
mod fo;
mod noise;
mod surrogate;
mod synth;
mod system;

pub use calibrate::{calibrate_sigma_global, calibrate_sigma_local};
pub use fo::{input_fo_from_output, output_fo_from_input, wrap_phase, FoReference, FoSpec};
pub use noise::{derive_seed, ExtSignal, NoiseRealization};
pub use surrogate::{
    default_system, format_coefficients, parse_coefficients, surrogate_design, MONITORED_MODE,
    SURROGATE_FS,
};
pub use synth::{synth_ambient, synth_case1, synth_case2};
pub use system::ArmaxSystem;

pub(crate) use synth::fo_response;
