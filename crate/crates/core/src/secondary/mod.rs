//! Propagation of the parameter CRB to mode frequency/damping and to the
//! output FO amplitude/phase.

mod fo;
mod modes;

pub use fo::{crb_fo_case1, crb_fo_case2, jacobian_x, output_phasor, FoCrb, FoPhasor};
pub use modes::{crb_modes, mode_jacobian, nearest_mode, ModeCrb};
