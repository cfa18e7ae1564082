use crate::error::{CrbError, Result};
use crate::sigcore::Polynomial;
use crate::sysmodel::{ArmaxSystem, FoReference, FoSpec};

/// Measurement situation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Case {
    /// No FO in the record; parameters are the ARMA coefficients only.
    Ambient,
    /// Steady-state FO response only.
    One,
    /// FO switched on at the first sample; startup transient included.
    Two,
}

impl Case {
    pub fn name(self) -> &'static str {
        match self {
            Case::Ambient => "ambient",
            Case::One => "1",
            Case::Two => "2",
        }
    }
}

/// One entry of the parameter vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Param {
    /// a_i, i >= 1.
    Ar(usize),
    /// b_i, i >= 0.
    X(usize),
    /// c_i, i >= 1.
    Ma(usize),
    /// A_1 (case 1) or Ã_1 (case 2).
    FoAmplitude,
    /// phi_1 (case 1) or φ̃_1 (case 2), radians.
    FoPhase,
    /// omega_1, radians/sample.
    FoFrequency,
}

/// Ordered parameter list. Case 1: a, c, (A_1, phi_1, w_1). Case 2: a, b, c,
/// (Ã_1, φ̃_1, w_1). Ambient: a, c.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaLayout {
    case: Case,
    params: Vec<Param>,
}

impl ThetaLayout {
    pub fn new(case: Case, na: usize, nb: usize, nc: usize) -> Self {
        let mut params: Vec<Param> = (1..=na).map(Param::Ar).collect();
        if case == Case::Two {
            params.extend((0..=nb).map(Param::X));
        }
        params.extend((1..=nc).map(Param::Ma));
        if case != Case::Ambient {
            params.extend([Param::FoAmplitude, Param::FoPhase, Param::FoFrequency]);
        }
        Self { case, params }
    }

    pub fn for_system(case: Case, sys: &ArmaxSystem) -> Self {
        Self::new(case, sys.na(), sys.nb(), sys.nc())
    }

    pub fn case(&self) -> Case {
        self.case
    }

    pub fn params(&self) -> &[Param] {
        &self.params
    }

    pub fn dim(&self) -> usize {
        self.params.len()
    }

    pub fn index_of(&self, p: Param) -> Option<usize> {
        self.params.iter().position(|&q| q == p)
    }

    /// Layout with the given parameters removed.
    pub fn without(&self, pinned: &[Param]) -> Self {
        Self {
            case: self.case,
            params: self
                .params
                .iter()
                .copied()
                .filter(|p| !pinned.contains(p))
                .collect(),
        }
    }

    /// Number of leading AR parameters.
    pub fn na(&self) -> usize {
        self.params.iter().filter(|p| matches!(p, Param::Ar(_))).count()
    }
}

/// A measurement situation together with its FO.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Experiment {
    Ambient,
    /// Output-referenced FO (A_1, phi_1, w_1).
    Case1(FoSpec),
    /// Input-referenced FO (Ã_1, φ̃_1, w_1) starting at k = 0.
    Case2(FoSpec),
}

impl Experiment {
    pub fn case(&self) -> Case {
        match self {
            Experiment::Ambient => Case::Ambient,
            Experiment::Case1(_) => Case::One,
            Experiment::Case2(_) => Case::Two,
        }
    }

    pub fn fo(&self) -> Option<&FoSpec> {
        match self {
            Experiment::Ambient => None,
            Experiment::Case1(f) | Experiment::Case2(f) => Some(f),
        }
    }

    pub fn layout(&self, sys: &ArmaxSystem) -> ThetaLayout {
        ThetaLayout::for_system(self.case(), sys)
    }

    /// Parameters held fixed when inverting the Fisher matrix.
    ///
    /// In case 2 the X polynomial and the input amplitude enter the output only
    /// through the product B(q) Ã_1, so scaling one against the other leaves
    /// every gradient combination unchanged and the Fisher matrix has an exact
    /// null direction. Ã_1 is fixed to its true value to remove it; mode, w_1 and
    /// output-phasor bounds do not depend on this choice.
    pub fn pinned(&self) -> &'static [Param] {
        match self {
            Experiment::Case2(_) => &[Param::FoAmplitude],
            _ => &[],
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        match self {
            Experiment::Ambient => Ok(()),
            Experiment::Case1(f) if f.reference != FoReference::Output => Err(
                CrbError::InvalidArgument("case 1 expects an output-referenced FO".into()),
            ),
            Experiment::Case2(f) if f.reference != FoReference::Input => Err(
                CrbError::InvalidArgument("case 2 expects an input-referenced FO".into()),
            ),
            _ => Ok(()),
        }
    }
}

/// Parameter values for one case; `b` is used only in case 2 and `fo` is
/// absent for the ambient case.
#[derive(Debug, Clone, PartialEq)]
pub struct Theta {
    pub case: Case,
    pub a: Polynomial,
    pub b: Polynomial,
    pub c: Polynomial,
    pub fo: Option<FoSpec>,
}

impl Theta {
    /// True parameter vector of `exp` on `sys`.
    pub fn truth(sys: &ArmaxSystem, exp: &Experiment) -> Self {
        Self {
            case: exp.case(),
            a: sys.a().clone(),
            b: sys.b().clone(),
            c: sys.c().clone(),
            fo: exp.fo().copied(),
        }
    }

    pub fn layout(&self) -> ThetaLayout {
        ThetaLayout::new(self.case, self.a.degree(), self.b.degree(), self.c.degree())
    }

    pub fn get(&self, p: Param) -> f64 {
        match p {
            Param::Ar(i) => self.a.coeffs()[i],
            Param::X(i) => self.b.coeffs()[i],
            Param::Ma(i) => self.c.coeffs()[i],
            Param::FoAmplitude => self.fo.map_or(0.0, |f| f.amplitude),
            Param::FoPhase => self.fo.map_or(0.0, |f| f.phase_rad),
            Param::FoFrequency => self.fo.map_or(0.0, |f| f.omega),
        }
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.layout().params().iter().map(|&p| self.get(p)).collect()
    }

    /// Copy with one parameter replaced. FO values bypass FoSpec validation so
    /// that finite-difference perturbations near the limits stay possible.
    pub fn with(&self, p: Param, value: f64) -> Self {
        let mut out = self.clone();
        let set = |poly: &Polynomial, i: usize| {
            let mut c = poly.coeffs().to_vec();
            c[i] = value;
            Polynomial::new(c).expect("non-empty")
        };
        match p {
            Param::Ar(i) => out.a = set(&self.a, i),
            Param::X(i) => out.b = set(&self.b, i),
            Param::Ma(i) => out.c = set(&self.c, i),
            Param::FoAmplitude => {
                if let Some(f) = out.fo.as_mut() {
                    f.amplitude = value
                }
            }
            Param::FoPhase => {
                if let Some(f) = out.fo.as_mut() {
                    f.phase_rad = value
                }
            }
            Param::FoFrequency => {
                if let Some(f) = out.fo.as_mut() {
                    f.omega = value
                }
            }
        }
        out
    }

    /// Rebuilds a Theta from a vector in layout order.
    pub fn from_vec(&self, values: &[f64]) -> Result<Self> {
        let layout = self.layout();
        if values.len() != layout.dim() {
            return Err(CrbError::LengthMismatch(values.len(), layout.dim()));
        }
        Ok(layout
            .params()
            .iter()
            .zip(values)
            .fold(self.clone(), |t, (&p, &v)| t.with(p, v)))
    }
}
