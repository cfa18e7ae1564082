//! Shared fixtures for the criterion benchmarks.

use modecrb::sysmodel::{default_system, input_fo_from_output, ArmaxSystem, FoSpec};

/// Surrogate system with the FO at 0.353 Hz, output amplitude 1 and phase 0.8 rad.
pub fn surrogate_fixture() -> (ArmaxSystem, FoSpec, FoSpec) {
    let sys = default_system();
    let omega = sys.hz_to_omega(0.353);
    let fo_out = FoSpec::output(1.0, 0.8, omega).expect("valid FO");
    let fo_in = input_fo_from_output(&sys, 1.0, 0.8, omega).expect("observable FO");
    (sys, fo_out, fo_in)
}
