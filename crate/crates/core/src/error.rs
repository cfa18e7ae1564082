use thiserror::Error;

pub type Result<T> = std::result::Result<T, CrbError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CrbError {
    #[error("polynomial must have at least one coefficient")]
    EmptyPolynomial,
    #[error("root finding needs a polynomial of degree >= 1")]
    DegreeZero,
    #[error("leading coefficient is zero")]
    ZeroLeadingCoefficient,
    #[error("{0} polynomial must be monic (c_0 = 1)")]
    NonMonic(&'static str),
    #[error("{what} is not strictly stable (max pole radius {radius})")]
    Unstable { what: &'static str, radius: f64 },
    #[error("burn-in of {needed} samples exceeds the cap of {cap}")]
    BurnInCap { needed: usize, cap: usize },
    #[error("degenerate pole: {0}")]
    DegeneratePole(&'static str),
    #[error("frequency {freq} is at or above Nyquist ({nyquist})")]
    AboveNyquist { freq: f64, nyquist: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("A(w) vanishes at the FO frequency (pole on the FO frequency)")]
    PoleOnFoFrequency,
    #[error("FO unobservable through X polynomial at this frequency")]
    UnobservableFo,
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("MA polynomial is not invertible (max root radius {0})")]
    NonInvertibleMa(f64),
    #[error("Fisher matrix is singular or ill-conditioned (condition estimate {condition:e})")]
    IllConditioned { condition: f64 },
    #[error("operation expects a {expected} CRB, got {got}")]
    CaseMismatch { expected: &'static str, got: &'static str },
    #[error("semi-analytic oracle limited to n_a + n_b + n_c <= {limit}, got {got}")]
    OrderLimit { limit: usize, got: usize },
    #[error("Jacobian singular: repeated pole")]
    RepeatedPole,
    #[error("output FO amplitude must be positive")]
    ZeroAmplitude,
    #[error("non-finite gradient entry at sample {sample}, column {column}")]
    NonFinite { sample: usize, column: usize },
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("config error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CrbError {
    /// True for failures of the numerics (as opposed to bad input or config).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            CrbError::IllConditioned { .. }
                | CrbError::Unstable { .. }
                | CrbError::BurnInCap { .. }
                | CrbError::NonInvertibleMa(_)
                | CrbError::RepeatedPole
                | CrbError::NonFinite { .. }
                | CrbError::DegeneratePole(_)
                | CrbError::PoleOnFoFrequency
                | CrbError::UnobservableFo
        )
    }
}
