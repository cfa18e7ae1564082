//! Surrogate order-(10, 1, 10) ARMAX system at 3 samples/s and its plain-text
//! coefficient file format.
//!
//! The AR polynomial is placed from five modes: the monitored inter-area mode
//! at 0.372 Hz / 4.67 % and four well-damped modes between 0.1 and 1.2 Hz.
//! The MA polynomial has five conjugate zero pairs of radius 0.45 spread over
//! the band, which tilts the spectrum without creating notches.
//!
//! Coefficient file layout, one value per line, `#` starts a comment:
//!
//! ```text
//! [A]
//! 1
//! -1.23...
//! [B]
//! 1
//! 0.5
//! [C]
//! ...
//! [sigma_e2]
//! 1
//! [fs]
//! 3
//! ```

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{CrbError, Result};
use crate::sigcore::{pole_from_mode, Mode, Polynomial};

use super::ArmaxSystem;

pub const SURROGATE_FS: f64 = 3.0;
/// Monitored electromechanical mode of the surrogate.
pub const MONITORED_MODE: Mode = Mode {
    frequency_hz: 0.372,
    damping_pct: 4.67,
};
/// Additional AR modes (Hz, % damping).
pub const SURROGATE_EXTRA_MODES: [(f64, f64); 4] = [(0.15, 15.0), (0.62, 15.0), (0.88, 15.0), (1.15, 15.0)];
/// MA zero pairs (Hz, radius).
pub const SURROGATE_MA_ZEROS: [(f64, f64); 5] = [(0.05, 0.45), (0.3, 0.45), (0.7, 0.45), (1.0, 0.45), (1.35, 0.45)];
pub const SURROGATE_B: [f64; 2] = [1.0, 0.5];

const FROZEN: &str = include_str!("../../data/surrogate.txt");

/// Builds the surrogate from its pole/zero placement.
pub fn surrogate_design() -> Result<ArmaxSystem> {
    let fs = SURROGATE_FS;
    let mut poles = Vec::new();
    for m in std::iter::once(MONITORED_MODE).chain(
        SURROGATE_EXTRA_MODES
            .iter()
            .map(|&(f, d)| Mode {
                frequency_hz: f,
                damping_pct: d,
            }),
    ) {
        let p = pole_from_mode(m, fs)?.value;
        poles.push(p);
        poles.push(p.conj());
    }
    let mut zeros = Vec::new();
    for &(f, r) in &SURROGATE_MA_ZEROS {
        let z = Complex64::from_polar(r, 2.0 * std::f64::consts::PI * f / fs);
        zeros.push(z);
        zeros.push(z.conj());
    }
    ArmaxSystem::new(
        Polynomial::from_roots(&poles),
        Polynomial::new(SURROGATE_B.to_vec())?,
        Polynomial::from_roots(&zeros),
        1.0,
        fs,
    )
}

/// The frozen surrogate system shipped with the crate.
pub fn default_system() -> ArmaxSystem {
    parse_coefficients(FROZEN).expect("frozen surrogate coefficient file is valid")
}

/// Serializes a system in the coefficient file format.
pub fn format_coefficients(sys: &ArmaxSystem, header: &str) -> String {
    let mut out = String::new();
    for line in header.lines() {
        let _ = writeln!(out, "# {line}");
    }
    for (name, poly) in [("A", sys.a()), ("B", sys.b()), ("C", sys.c())] {
        let _ = writeln!(out, "[{name}]");
        for c in poly.coeffs() {
            let _ = writeln!(out, "{c:?}");
        }
    }
    let _ = writeln!(out, "[sigma_e2]\n{:?}", sys.sigma_e2());
    let _ = writeln!(out, "[fs]\n{:?}", sys.fs());
    out
}

/// Parses the coefficient file format.
pub fn parse_coefficients(text: &str) -> Result<ArmaxSystem> {
    let mut sections: [Vec<f64>; 5] = Default::default();
    let names = ["A", "B", "C", "sigma_e2", "fs"];
    let mut current: Option<usize> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let perr = |msg: String| CrbError::Parse { line: i + 1, msg };
        if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            let idx = names
                .iter()
                .position(|n| n.eq_ignore_ascii_case(name.trim()))
                .ok_or_else(|| perr(format!("unknown section [{name}]")))?;
            if !sections[idx].is_empty() {
                return Err(perr(format!("duplicate section [{name}]")));
            }
            current = Some(idx);
            continue;
        }
        let idx = current.ok_or_else(|| perr("value before any section".into()))?;
        let v: f64 = line
            .parse()
            .map_err(|_| perr(format!("not a number: {line:?}")))?;
        sections[idx].push(v);
    }
    for (idx, name) in names.iter().enumerate() {
        if sections[idx].is_empty() {
            return Err(CrbError::Parse {
                line: 0,
                msg: format!("missing section [{name}]"),
            });
        }
    }
    for idx in [3, 4] {
        if sections[idx].len() != 1 {
            return Err(CrbError::Parse {
                line: 0,
                msg: format!("[{}] takes exactly one value", names[idx]),
            });
        }
    }
    let [a, b, c, s2, fs] = sections;
    ArmaxSystem::new(
        Polynomial::new(a)?,
        Polynomial::new(b)?,
        Polynomial::new(c)?,
        s2[0],
        fs[0],
    )
}
