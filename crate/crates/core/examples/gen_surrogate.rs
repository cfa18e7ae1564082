//! Regenerates `data/surrogate.txt` from the pole/zero placement.
//!
//! cargo run -p modecrb --example gen_surrogate > crates/core/data/surrogate.txt

use modecrb::sysmodel::{format_coefficients, surrogate_design};

fn main() {
    let sys = surrogate_design().expect("surrogate design is valid");
    let header = "Surrogate order-(10,1,10) ARMAX system, fs = 3 samples/s.\n\
                  AR modes: 0.372 Hz/4.67 % (monitored), 0.15, 0.62, 0.88, 1.15 Hz at 15 %.\n\
                  MA zeros: radius 0.45 at 0.05, 0.3, 0.7, 1.0, 1.35 Hz. B = [1, 0.5].\n\
                  Generated by `cargo run -p modecrb --example gen_surrogate`.";
    print!("{}", format_coefficients(&sys, header));
}
