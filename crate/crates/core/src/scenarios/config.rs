use std::fmt::Write as _;
use std::path::PathBuf;

use crate::error::{CrbError, Result};
use crate::fisher::{Case, ThetaLayout};
use crate::sysmodel::{default_system, parse_coefficients, ArmaxSystem, MONITORED_MODE};

/// Where the ARMAX system comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum SystemSource {
    Surrogate,
    File(PathBuf),
}

impl SystemSource {
    pub fn load(&self) -> Result<ArmaxSystem> {
        match self {
            SystemSource::Surrogate => Ok(default_system()),
            SystemSource::File(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CrbError::Io(format!("{}: {e}", path.display())))?;
                parse_coefficients(&text)
            }
        }
    }
}

/// Which measurement cases a run covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseSelect {
    One,
    Two,
    Both,
    Ambient,
    /// Ambient, case 1 and case 2.
    All,
}

impl CaseSelect {
    pub fn cases(self) -> &'static [Case] {
        match self {
            CaseSelect::One => &[Case::One],
            CaseSelect::Two => &[Case::Two],
            CaseSelect::Both => &[Case::One, Case::Two],
            CaseSelect::Ambient => &[Case::Ambient],
            CaseSelect::All => &[Case::Ambient, Case::One, Case::Two],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CaseSelect::One => "1",
            CaseSelect::Two => "2",
            CaseSelect::Both => "both",
            CaseSelect::Ambient => "ambient",
            CaseSelect::All => "all",
        }
    }
}

impl std::str::FromStr for CaseSelect {
    type Err = CrbError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" => Ok(CaseSelect::One),
            "2" => Ok(CaseSelect::Two),
            "both" => Ok(CaseSelect::Both),
            "ambient" => Ok(CaseSelect::Ambient),
            "all" => Ok(CaseSelect::All),
            _ => Err(CrbError::Config(format!(
                "case must be 1, 2, both, ambient or all, got '{s}'"
            ))),
        }
    }
}

/// Noise reference for the SNR definition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SnrMode {
    /// ARMA PSD at the FO frequency.
    Local,
    /// ARMA process variance (average PSD).
    Global,
}

impl SnrMode {
    pub fn name(self) -> &'static str {
        match self {
            SnrMode::Local => "local",
            SnrMode::Global => "global",
        }
    }
}

impl std::str::FromStr for SnrMode {
    type Err = CrbError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "local" => Ok(SnrMode::Local),
            "global" => Ok(SnrMode::Global),
            _ => Err(CrbError::Config(format!("snr_mode must be local or global, got '{s}'"))),
        }
    }
}

/// Swept coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepKind {
    None,
    Frequency,
    Snr,
    Length,
}

impl SweepKind {
    pub fn name(self) -> &'static str {
        match self {
            SweepKind::None => "none",
            SweepKind::Frequency => "freq",
            SweepKind::Snr => "snr",
            SweepKind::Length => "length",
        }
    }

    /// Default grid for this coordinate.
    pub fn default_values(self) -> Vec<f64> {
        match self {
            SweepKind::None => Vec::new(),
            SweepKind::Frequency => (1..=29).map(|i| (i as f64 * 0.05 * 100.0).round() / 100.0).collect(),
            SweepKind::Snr => vec![0.0, 5.0, 9.5, 15.0, 20.0, 30.0, 40.0],
            SweepKind::Length => vec![1350.0, 2700.0, 5400.0, 10800.0],
        }
    }
}

impl std::str::FromStr for SweepKind {
    type Err = CrbError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(SweepKind::None),
            "freq" | "frequency" => Ok(SweepKind::Frequency),
            "snr" => Ok(SweepKind::Snr),
            "length" => Ok(SweepKind::Length),
            _ => Err(CrbError::Config(format!(
                "sweep must be none, freq, snr or length, got '{s}'"
            ))),
        }
    }
}

/// Scenario coordinates of one run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub freq_hz: f64,
    pub snr_db: f64,
    pub samples: usize,
}

/// Full scenario description.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub system: SystemSource,
    pub case: CaseSelect,
    /// Output FO amplitude A_1.
    pub amplitude: f64,
    /// Output FO phase phi_1, radians.
    pub phase_rad: f64,
    pub freq_hz: f64,
    pub snr_mode: SnrMode,
    pub snr_db: f64,
    pub samples: usize,
    pub trials: usize,
    pub seed: u64,
    pub sweep: SweepKind,
    /// Sweep values; empty means the default grid of `sweep`.
    pub sweep_values: Vec<f64>,
    /// Mode reported in the output: the AR mode closest to this frequency.
    pub monitored_hz: f64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            system: SystemSource::Surrogate,
            case: CaseSelect::Both,
            amplitude: 1.0,
            phase_rad: 0.8,
            freq_hz: 0.353,
            snr_mode: SnrMode::Global,
            snr_db: 9.5,
            samples: 5400,
            trials: 1000,
            seed: 1,
            sweep: SweepKind::None,
            sweep_values: Vec::new(),
            monitored_hz: MONITORED_MODE.frequency_hz,
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| CrbError::Config(format!("invalid value '{v}' for {key}")))
}

impl ScenarioConfig {
    /// Applies `key = value` lines on top of `self`. Blank lines and lines
    /// starting with `#` are ignored.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| CrbError::Parse {
                line: lineno + 1,
                msg: "expected key = value".into(),
            })?;
            self.set(key.trim(), value.trim()).map_err(|e| CrbError::Parse {
                line: lineno + 1,
                msg: e.to_string(),
            })?;
        }
        Ok(())
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        cfg.apply_text(text)?;
        Ok(cfg)
    }

    /// Sets one key.
    pub fn set(&mut self, key: &str, v: &str) -> Result<()> {
        match key {
            "system" => {
                self.system = if v == "surrogate" {
                    SystemSource::Surrogate
                } else {
                    SystemSource::File(PathBuf::from(v))
                }
            }
            "case" => self.case = v.parse()?,
            "amplitude" => self.amplitude = parse_num(key, v)?,
            "phase_rad" => self.phase_rad = parse_num(key, v)?,
            "freq_hz" => self.freq_hz = parse_num(key, v)?,
            "snr_mode" => self.snr_mode = v.parse()?,
            "snr_db" => self.snr_db = parse_num(key, v)?,
            "samples" => self.samples = parse_num(key, v)?,
            "trials" => self.trials = parse_num(key, v)?,
            "seed" => self.seed = parse_num(key, v)?,
            "sweep" => self.sweep = v.parse()?,
            "sweep_values" => {
                self.sweep_values = v
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| parse_num(key, s))
                    .collect::<Result<_>>()?
            }
            "monitored_hz" => self.monitored_hz = parse_num(key, v)?,
            _ => return Err(CrbError::Config(format!("unknown key '{key}'"))),
        }
        Ok(())
    }

    /// Effective configuration in the same `key = value` format.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let system = match &self.system {
            SystemSource::Surrogate => "surrogate".to_string(),
            SystemSource::File(p) => p.display().to_string(),
        };
        let values: Vec<String> = self.sweep_values.iter().map(|v| format!("{v:?}")).collect();
        let _ = writeln!(s, "system = {system}");
        let _ = writeln!(s, "case = {}", self.case.name());
        let _ = writeln!(s, "amplitude = {:?}", self.amplitude);
        let _ = writeln!(s, "phase_rad = {:?}", self.phase_rad);
        let _ = writeln!(s, "freq_hz = {:?}", self.freq_hz);
        let _ = writeln!(s, "snr_mode = {}", self.snr_mode.name());
        let _ = writeln!(s, "snr_db = {:?}", self.snr_db);
        let _ = writeln!(s, "samples = {}", self.samples);
        let _ = writeln!(s, "trials = {}", self.trials);
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(s, "sweep = {}", self.sweep.name());
        let _ = writeln!(s, "sweep_values = {}", values.join(", "));
        let _ = writeln!(s, "monitored_hz = {:?}", self.monitored_hz);
        s
    }

    /// The single point described by the non-sweep fields.
    pub fn base_point(&self) -> Point {
        Point {
            freq_hz: self.freq_hz,
            snr_db: self.snr_db,
            samples: self.samples,
        }
    }

    /// Sweep points in order.
    pub fn points(&self) -> Result<Vec<Point>> {
        let values = if self.sweep_values.is_empty() {
            self.sweep.default_values()
        } else {
            self.sweep_values.clone()
        };
        let base = self.base_point();
        let pts: Vec<Point> = match self.sweep {
            SweepKind::None => return Err(CrbError::Config("no sweep configured".into())),
            SweepKind::Frequency => values.iter().map(|&f| Point { freq_hz: f, ..base }).collect(),
            SweepKind::Snr => values.iter().map(|&s| Point { snr_db: s, ..base }).collect(),
            SweepKind::Length => values
                .iter()
                .map(|&n| {
                    if n >= 1.0 && n.fract() == 0.0 {
                        Ok(Point {
                            samples: n as usize,
                            ..base
                        })
                    } else {
                        Err(CrbError::Config(format!("record length {n} is not a positive integer")))
                    }
                })
                .collect::<Result<_>>()?,
        };
        if pts.is_empty() {
            return Err(CrbError::Config("sweep list is empty".into()));
        }
        Ok(pts)
    }

    /// Checks the configuration against the system for every point it implies.
    pub fn validate(&self, sys: &ArmaxSystem, points: &[Point]) -> Result<()> {
        if self.trials == 0 {
            return Err(CrbError::Config("trials must be at least 1".into()));
        }
        if !(self.amplitude > 0.0) || !self.amplitude.is_finite() {
            return Err(CrbError::Config("FO amplitude must be positive".into()));
        }
        if !self.phase_rad.is_finite() {
            return Err(CrbError::Config("FO phase must be finite".into()));
        }
        let nyquist = sys.fs() / 2.0;
        let dim = self
            .case
            .cases()
            .iter()
            .map(|&c| ThetaLayout::for_system(c, sys).dim())
            .max()
            .unwrap_or(0);
        for p in points {
            if !(p.freq_hz > 0.0 && p.freq_hz < nyquist) {
                return Err(CrbError::Config(format!(
                    "FO frequency {} Hz outside (0, {nyquist}) Hz",
                    p.freq_hz
                )));
            }
            if !p.snr_db.is_finite() {
                return Err(CrbError::Config("SNR must be finite".into()));
            }
            if p.samples <= dim {
                return Err(CrbError::Config(format!(
                    "record length {} must exceed the parameter count {dim}",
                    p.samples
                )));
            }
        }
        Ok(())
    }
}
