use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::engine::GammaParams;
use crate::error::{PiteError, Result};
use crate::schedules::ScheduleKind;

/// A dimensionless `s·Δτ` value: a plain number, a multiple of π such as
/// `"1.5pi"`, or either of those followed by `/gap` to divide by `Δλ_min`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quantity {
    pub value: f64,
    pub per_gap: bool,
}

impl Quantity {
    pub const fn plain(value: f64) -> Self {
        Self {
            value,
            per_gap: false,
        }
    }

    pub const fn per_gap(value: f64) -> Self {
        Self {
            value,
            per_gap: true,
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        let t = text.trim();
        let (body, per_gap) = match t.strip_suffix("/gap") {
            Some(b) => (b.trim(), true),
            None => (t, false),
        };
        let value = match body.strip_suffix("pi") {
            Some("") => PI,
            Some("-") => -PI,
            Some(coef) => coef.trim().parse::<f64>().ok()? * PI,
            None => body.parse::<f64>().ok()?,
        };
        value.is_finite().then_some(Self { value, per_gap })
    }

    /// Absolute value given the smallest excitation energy.
    pub fn resolve(&self, gap: Option<f64>) -> Result<f64> {
        if !self.per_gap {
            return Ok(self.value);
        }
        match gap {
            Some(g) if g > 0.0 => Ok(self.value / g),
            _ => Err(PiteError::config(
                "schedule",
                "a `/gap` quantity needs a spectrum with a nonzero excitation gap",
            )),
        }
    }
}

impl<'de> Deserialize<'de> for Quantity {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Number(v) => Ok(Quantity::plain(v)),
            Raw::Text(s) => Quantity::parse(&s).ok_or_else(|| {
                serde::de::Error::custom(format!(
                    "`{s}` is not a number, `<x>pi` or `<x>pi/gap` quantity"
                ))
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum HamiltonianSpec {
    Heisenberg {
        n: usize,
        #[serde(rename = "J")]
        coupling: f64,
        #[serde(rename = "h")]
        field: f64,
    },
    DoubleWell {
        n_qubits: usize,
        #[serde(rename = "L")]
        length: f64,
        d: f64,
        delta: f64,
        #[serde(rename = "V0")]
        barrier: f64,
    },
    SpectrumFile {
        path: PathBuf,
    },
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialState {
    #[default]
    Uniform,
    WeightsFile(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleSpec {
    #[serde(rename = "type")]
    pub kind: ScheduleKind,
    #[serde(rename = "K")]
    pub steps: usize,
    /// Ignored by constant schedules.
    #[serde(default = "zero_quantity")]
    pub s_dtau_min: Quantity,
    /// Step size of a constant schedule.
    pub s_dtau_max: Quantity,
    #[serde(default)]
    pub kappa_bar: Option<f64>,
}

fn zero_quantity() -> Quantity {
    Quantity::plain(0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    SDtauMax,
    SDtauMin,
    #[serde(rename = "K")]
    Steps,
    Alpha,
    KappaBar,
}

impl SweepParam {
    pub fn name(&self) -> &'static str {
        match self {
            SweepParam::SDtauMax => "s_dtau_max",
            SweepParam::SDtauMin => "s_dtau_min",
            SweepParam::Steps => "K",
            SweepParam::Alpha => "alpha",
            SweepParam::KappaBar => "kappa_bar",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub param: SweepParam,
    pub from: Quantity,
    pub to: Quantity,
    pub points: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

/// Parsed experiment description.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub hamiltonian: HamiltonianSpec,
    #[serde(default)]
    pub initial_state: InitialState,
    pub schedule: ScheduleSpec,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default)]
    pub branch_n: i64,
    /// Ground-energy estimate used for the shift; the exact value by default.
    #[serde(default)]
    pub lambda1: Option<f64>,
    #[serde(default)]
    pub sweep: Option<SweepSpec>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

pub const DEFAULT_GAMMA: f64 = 0.9;

fn default_gamma() -> f64 {
    DEFAULT_GAMMA
}

fn default_alpha() -> f64 {
    1.0
}

/// Parses and validates a JSON config. Relative paths are kept as written.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let cfg: RunConfig = serde_json::from_str(text).map_err(|e| {
        let msg = e.to_string();
        let field = msg
            .split('`')
            .nth(1)
            .filter(|_| msg.contains("unknown field") || msg.contains("missing field"))
            .unwrap_or("config")
            .to_string();
        PiteError::config(field, msg)
    })?;
    cfg.validate()?;
    Ok(cfg)
}

/// Reads a config file, resolving relative paths against its directory and
/// checking that referenced files exist.
pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| PiteError::io(path, e))?;
    let mut cfg = parse_config(&text)?;
    let base = path.parent().unwrap_or(Path::new(""));
    cfg.rebase(base);
    cfg.check_files()?;
    Ok(cfg)
}

impl RunConfig {
    fn validate(&self) -> Result<()> {
        GammaParams::new(self.gamma).map_err(|e| PiteError::config("gamma", e.to_string()))?;
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(PiteError::config(
                "alpha",
                format!("must lie in [0, 1], got {}", self.alpha),
            ));
        }
        if let Some(l) = self.lambda1 {
            if !l.is_finite() {
                return Err(PiteError::config("lambda1", "must be finite"));
            }
        }
        self.validate_schedule()?;
        if let Some(sw) = &self.sweep {
            self.validate_sweep(sw)?;
        }
        Ok(())
    }

    fn validate_schedule(&self) -> Result<()> {
        let s = &self.schedule;
        let min_steps = if s.kind == ScheduleKind::Linear { 2 } else { 1 };
        if s.steps < min_steps {
            return Err(PiteError::config(
                "schedule.K",
                format!("{} schedule needs K >= {min_steps}", s.kind),
            ));
        }
        if s.s_dtau_min.value < 0.0 || s.s_dtau_max.value < 0.0 {
            return Err(PiteError::config("schedule", "step sizes must be >= 0"));
        }
        if s.kind != ScheduleKind::Constant
            && s.s_dtau_min.per_gap == s.s_dtau_max.per_gap
            && s.s_dtau_min.value > s.s_dtau_max.value
        {
            return Err(PiteError::config(
                "schedule.s_dtau_min",
                "must not exceed s_dtau_max",
            ));
        }
        match (s.kind, s.kappa_bar) {
            (ScheduleKind::Exponential, None) => Err(PiteError::config(
                "schedule.kappa_bar",
                "required for exponential schedules",
            )),
            (ScheduleKind::Exponential, Some(kb)) if !(kb > 0.0 && kb.is_finite()) => Err(
                PiteError::config("schedule.kappa_bar", format!("must be positive, got {kb}")),
            ),
            (ScheduleKind::Linear | ScheduleKind::Constant, Some(_)) => Err(PiteError::config(
                "schedule.kappa_bar",
                "only exponential schedules take kappa_bar",
            )),
            _ => Ok(()),
        }
    }

    fn validate_sweep(&self, sw: &SweepSpec) -> Result<()> {
        if sw.points == 0 {
            return Err(PiteError::config("sweep.points", "must be >= 1"));
        }
        if sw.from.per_gap != sw.to.per_gap {
            return Err(PiteError::config(
                "sweep.to",
                "`from` and `to` must both be plain or both be `/gap` quantities",
            ));
        }
        if sw.from.value > sw.to.value {
            return Err(PiteError::config(
                "sweep.from",
                format!("from ({}) exceeds to ({})", sw.from.value, sw.to.value),
            ));
        }
        if sw.spacing == Spacing::Log && !(sw.from.value > 0.0) {
            return Err(PiteError::config(
                "sweep.from",
                "log spacing needs from > 0",
            ));
        }
        let gap_ok = matches!(sw.param, SweepParam::SDtauMax | SweepParam::SDtauMin);
        if sw.from.per_gap && !gap_ok {
            return Err(PiteError::config(
                "sweep.from",
                format!("`/gap` is meaningless for {}", sw.param.name()),
            ));
        }
        match sw.param {
            SweepParam::Alpha if sw.from.value < 0.0 || sw.to.value > 1.0 => {
                Err(PiteError::config("sweep", "alpha must stay within [0, 1]"))
            }
            SweepParam::KappaBar if self.schedule.kind != ScheduleKind::Exponential => {
                Err(PiteError::config(
                    "sweep.param",
                    "kappa_bar sweeps need an exponential schedule",
                ))
            }
            SweepParam::KappaBar if !(sw.from.value > 0.0) => Err(PiteError::config(
                "sweep.from",
                "kappa_bar must be positive",
            )),
            SweepParam::Steps if sw.from.value < 1.0 => {
                Err(PiteError::config("sweep.from", "K must be >= 1"))
            }
            SweepParam::SDtauMin | SweepParam::SDtauMax if sw.from.value < 0.0 => {
                Err(PiteError::config("sweep.from", "step sizes must be >= 0"))
            }
            _ => Ok(()),
        }
    }

    fn rebase(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        if let HamiltonianSpec::SpectrumFile { path } = &mut self.hamiltonian {
            fix(path);
        }
        if let InitialState::WeightsFile(path) = &mut self.initial_state {
            fix(path);
        }
    }

    /// Fails if a referenced input file does not exist.
    pub fn check_files(&self) -> Result<()> {
        let check = |field: &str, p: &Path| {
            if p.is_file() {
                Ok(())
            } else {
                Err(PiteError::config(
                    field,
                    format!("{} does not exist", p.display()),
                ))
            }
        };
        if let HamiltonianSpec::SpectrumFile { path } = &self.hamiltonian {
            check("hamiltonian.path", path)?;
        }
        if let InitialState::WeightsFile(path) = &self.initial_state {
            check("initial_state.weights_file", path)?;
        }
        Ok(())
    }
}

impl SweepSpec {
    /// Grid values in the sweep's own units (before any `/gap` scaling).
    pub fn grid(&self) -> Vec<f64> {
        let (a, b, n) = (self.from.value, self.to.value, self.points);
        if n == 1 {
            return vec![a];
        }
        let last = (n - 1) as f64;
        let mut v: Vec<f64> = match self.spacing {
            Spacing::Linear => (0..n).map(|j| a + (b - a) * j as f64 / last).collect(),
            Spacing::Log => {
                let (la, lb) = (a.ln(), b.ln());
                (0..n)
                    .map(|j| (la + (lb - la) * j as f64 / last).exp())
                    .collect()
            }
        };
        v[n - 1] = b;
        v
    }
}
