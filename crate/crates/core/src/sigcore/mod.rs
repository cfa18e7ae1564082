//! Delay-operator polynomials, IIR filtering, ARMA spectra and the pole/mode map.
//!
//! Frequencies are radians/sample throughout; Hz appears only in [`Mode`].

mod filter;
mod mode;
mod poly;
mod spectrum;

pub use filter::{
    burn_in_length, filter_steady_state, filter_steady_state_from, filter_zero_state,
    BURN_IN_CAP, STEADY_STATE_TOL,
};
pub use mode::{mode_from_pole, pole_from_mode, Mode, Pole};
pub use poly::{max_root_radius, Polynomial};
pub use spectrum::{arma_psd, arma_variance};

pub(crate) use filter::{decay_length, lfilter};
pub(crate) use spectrum::impulse_response;
