use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::engine::{run_pite, GammaParams, InitialWeights, RunResult, ShiftPolicy};
use crate::error::{PiteError, Result};
use crate::hamiltonians::{
    build_double_well, build_heisenberg_chain, diagonalize, diagonalize_values, DoubleWellParams,
    HamiltonianMatrix, Spectrum,
};
use crate::io::{format_number, read_spectrum_file, read_weights_file};
use crate::schedules::ScheduleKind;
use crate::schedules::{constant_schedule, exponential_schedule, linear_schedule, Schedule};

use super::config::{HamiltonianSpec, InitialState, Quantity, RunConfig, SweepParam};
use super::stats::{mean, sample_std};

/// Exact CSV header of sweep output.
pub const SWEEP_HEADER: [&str; 11] = [
    "param",
    "value",
    "K",
    "s_dtau_min",
    "s_dtau_max",
    "kappa_bar",
    "ln_error_tilde",
    "error",
    "total_success_prob",
    "fidelity",
    "cumulative_tau",
];

/// Hamiltonian (when built from a model), its spectrum and the initial weights.
#[derive(Debug, Clone)]
pub struct System {
    pub hamiltonian: Option<HamiltonianMatrix>,
    pub spectrum: Spectrum,
    pub weights: InitialWeights,
}

impl System {
    pub fn gap(&self) -> Option<f64> {
        self.spectrum.min_gap()
    }
}

pub fn build_hamiltonian(spec: &HamiltonianSpec) -> Result<Option<HamiltonianMatrix>> {
    let to_cfg = |e: PiteError| match e {
        PiteError::InvalidArgument(m) => PiteError::config("hamiltonian", m),
        other => other,
    };
    match *spec {
        HamiltonianSpec::Heisenberg { n, coupling, field } => {
            build_heisenberg_chain(n, coupling, field)
                .map(Some)
                .map_err(to_cfg)
        }
        HamiltonianSpec::DoubleWell {
            n_qubits,
            length,
            d,
            delta,
            barrier,
        } => {
            let p = DoubleWellParams::new(n_qubits, length, d, delta, barrier);
            build_double_well(&p).map(Some).map_err(to_cfg)
        }
        HamiltonianSpec::SpectrumFile { .. } => Ok(None),
    }
}

/// Builds and diagonalizes the configured system.
pub fn build_system(cfg: &RunConfig, with_eigenvectors: bool) -> Result<System> {
    let hamiltonian = build_hamiltonian(&cfg.hamiltonian)?;
    let spectrum = match (&hamiltonian, &cfg.hamiltonian) {
        (Some(h), _) if with_eigenvectors => diagonalize(h)?,
        (Some(h), _) => diagonalize_values(h)?,
        (None, HamiltonianSpec::SpectrumFile { path }) => read_spectrum_file(path)?.0,
        (None, _) => unreachable!("model Hamiltonians are always built"),
    };
    let weights = match &cfg.initial_state {
        InitialState::Uniform => InitialWeights::uniform(spectrum.len())?,
        InitialState::WeightsFile(path) => {
            let w = read_weights_file(path)?;
            if w.len() != spectrum.len() {
                return Err(PiteError::config(
                    "initial_state.weights_file",
                    format!("{} weights for {} eigenstates", w.len(), spectrum.len()),
                ));
            }
            InitialWeights::new(w)
                .map_err(|e| PiteError::config("initial_state.weights_file", e.to_string()))?
        }
    };
    Ok(System {
        hamiltonian,
        spectrum,
        weights,
    })
}

/// One fully resolved run: step sizes as dimensionless `s·Δτ` products.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub kind: ScheduleKind,
    pub steps: usize,
    pub s_dtau_min: f64,
    pub s_dtau_max: f64,
    pub kappa_bar: Option<f64>,
    pub alpha: f64,
}

impl Point {
    pub fn from_config(cfg: &RunConfig, gap: Option<f64>) -> Result<Self> {
        let s = &cfg.schedule;
        Ok(Self {
            kind: s.kind,
            steps: s.steps,
            s_dtau_min: s.s_dtau_min.resolve(gap)?,
            s_dtau_max: s.s_dtau_max.resolve(gap)?,
            kappa_bar: s.kappa_bar,
            alpha: cfg.alpha,
        })
    }

    pub fn schedule(&self, s: f64) -> Result<Schedule> {
        let (lo, hi) = (self.s_dtau_min / s, self.s_dtau_max / s);
        match self.kind {
            ScheduleKind::Linear => linear_schedule(lo, hi, self.steps),
            ScheduleKind::Exponential => exponential_schedule(
                lo,
                hi,
                self.steps,
                self.kappa_bar
                    .ok_or_else(|| PiteError::invalid("kappa_bar missing"))?,
            ),
            ScheduleKind::Constant => constant_schedule(hi, self.steps),
        }
    }

    fn with(mut self, param: SweepParam, value: f64) -> Self {
        match param {
            SweepParam::SDtauMax => self.s_dtau_max = value,
            SweepParam::SDtauMin => self.s_dtau_min = value,
            SweepParam::Steps => self.steps = value.round() as usize,
            SweepParam::Alpha => self.alpha = value,
            SweepParam::KappaBar => self.kappa_bar = Some(value),
        }
        self
    }
}

pub fn gamma_params(cfg: &RunConfig) -> Result<GammaParams> {
    GammaParams::new(cfg.gamma).map_err(|e| PiteError::config("gamma", e.to_string()))
}

pub fn shift_policy(cfg: &RunConfig, system: &System, alpha: f64) -> Result<ShiftPolicy> {
    let lambda1 = cfg.lambda1.unwrap_or(system.spectrum.ground_energy());
    ShiftPolicy::new(alpha, cfg.branch_n, lambda1)
}

pub fn run_point(
    cfg: &RunConfig,
    system: &System,
    gp: &GammaParams,
    point: &Point,
) -> Result<RunResult> {
    let sched = point.schedule(gp.s())?;
    let policy = shift_policy(cfg, system, point.alpha)?;
    run_pite(&system.spectrum, &system.weights, &sched, gp, &policy)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub param: String,
    pub value: f64,
    #[serde(rename = "K")]
    pub steps: usize,
    pub s_dtau_min: f64,
    pub s_dtau_max: f64,
    pub kappa_bar: Option<f64>,
    pub ln_error_tilde: f64,
    pub error: f64,
    pub total_success_prob: f64,
    pub fidelity: f64,
    pub cumulative_tau: f64,
    /// Engine failure at this point; metrics are then `NaN`.
    #[serde(skip)]
    pub failure: Option<String>,
}

fn row(param: SweepParam, value: f64, point: &Point, r: Result<RunResult>) -> SweepRow {
    let (m, failure) = match r {
        Ok(r) => (
            [
                r.ln_error_tilde,
                r.error,
                r.total_success,
                r.fidelity,
                r.cumulative_tau,
            ],
            None,
        ),
        Err(e) => ([f64::NAN; 5], Some(e.to_string())),
    };
    SweepRow {
        param: param.name().to_string(),
        value,
        steps: point.steps,
        s_dtau_min: point.s_dtau_min,
        s_dtau_max: point.s_dtau_max,
        kappa_bar: point.kappa_bar,
        ln_error_tilde: m[0],
        error: m[1],
        total_success_prob: m[2],
        fidelity: m[3],
        cumulative_tau: m[4],
        failure,
    }
}

/// The resolved grid of `(value, point)` pairs of the configured sweep.
pub fn sweep_points(cfg: &RunConfig, system: &System) -> Result<Vec<(f64, Point)>> {
    let sw = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| PiteError::config("sweep", "the config has no sweep section"))?;
    let base = Point::from_config(cfg, system.gap())?;
    let gap = system.gap();
    sw.grid()
        .into_iter()
        .map(|v| {
            let value = Quantity {
                value: v,
                per_gap: sw.from.per_gap,
            }
            .resolve(gap)?;
            let p = base.with(sw.param, value);
            let value = if sw.param == SweepParam::Steps {
                p.steps as f64
            } else {
                value
            };
            Ok((value, p))
        })
        .collect()
}

/// One row per grid point, in grid order. Engine failures produce a row of
/// `NaN` metrics and do not stop the sweep.
pub fn run_sweep(cfg: &RunConfig, system: &System) -> Result<Vec<SweepRow>> {
    let gp = gamma_params(cfg)?;
    let param = cfg
        .sweep
        .as_ref()
        .map(|s| s.param)
        .expect("checked by sweep_points");
    let points = sweep_points(cfg, system)?;
    Ok(points
        .par_iter()
        .map(|(v, p)| row(param, *v, p, run_point(cfg, system, &gp, p)))
        .collect())
}

/// Mean and sample standard deviation of `ln ε̃` over `s·Δτ_max` values
/// within `±half_width` of a point's `s·Δτ_max`, on a grid of spacing `step`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WindowStats {
    pub center: f64,
    pub mean: f64,
    pub std: f64,
    pub points: usize,
}

/// Mean ± sample std of finite `ln ε̃` over `s·Δτ_max` values on the lattice
/// `j·step` within `half_width` of the point's own `s·Δτ_max`.
pub fn window_stats(
    cfg: &RunConfig,
    system: &System,
    point: &Point,
    half_width: f64,
    step: f64,
) -> Result<WindowStats> {
    let mut all = window_stats_many(cfg, system, std::slice::from_ref(point), half_width, step)?;
    Ok(all.remove(0))
}

/// [`window_stats`] for many points; lattice runs shared between windows are
/// evaluated once.
pub fn window_stats_many(
    cfg: &RunConfig,
    system: &System,
    points: &[Point],
    half_width: f64,
    step: f64,
) -> Result<Vec<WindowStats>> {
    if !(half_width >= 0.0 && step > 0.0) {
        return Err(PiteError::invalid(
            "window needs half_width >= 0 and step > 0",
        ));
    }
    let gp = gamma_params(cfg)?;
    let slack = 1e-9 * step;
    let key = |p: &Point, j: i64| {
        (
            j,
            p.steps,
            p.s_dtau_min.to_bits(),
            p.kappa_bar.map(f64::to_bits),
            p.alpha.to_bits(),
        )
    };
    let windows: Vec<Vec<(i64, Point)>> = points
        .iter()
        .map(|p| {
            let lo = ((p.s_dtau_max - half_width - slack) / step).ceil() as i64;
            let hi = ((p.s_dtau_max + half_width + slack) / step).floor() as i64;
            (lo.max(1)..=hi)
                .map(|j| (j, p.with(SweepParam::SDtauMax, j as f64 * step)))
                .filter(|(_, q)| q.s_dtau_max >= q.s_dtau_min)
                .collect()
        })
        .collect();
    let mut unique: BTreeMap<_, Point> = BTreeMap::new();
    for w in &windows {
        for (j, q) in w {
            unique.entry(key(q, *j)).or_insert(*q);
        }
    }
    let jobs: Vec<_> = unique.into_iter().collect();
    let values: BTreeMap<_, f64> = jobs
        .par_iter()
        .map(|(k, q)| run_point(cfg, system, &gp, q).map(|r| (*k, r.ln_error_tilde)))
        .collect::<Result<_>>()?;
    Ok(points
        .iter()
        .zip(&windows)
        .map(|(p, w)| {
            let v: Vec<f64> = w
                .iter()
                .map(|(j, q)| values[&key(q, *j)])
                .filter(|v| v.is_finite())
                .collect();
            WindowStats {
                center: p.s_dtau_max,
                mean: if v.is_empty() { f64::NAN } else { mean(&v) },
                std: sample_std(&v),
                points: v.len(),
            }
        })
        .collect())
}

/// CSV with [`SWEEP_HEADER`]; a missing `kappa_bar` is an empty field.
pub fn write_sweep_csv<W: Write>(out: W, rows: &[SweepRow]) -> Result<()> {
    if rows.is_empty() {
        return Err(PiteError::invalid("no sweep rows to write"));
    }
    let err = crate::io::csv_write_error;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_HEADER).map_err(err)?;
    for r in rows {
        w.write_record([
            r.param.clone(),
            format_number(r.value),
            r.steps.to_string(),
            format_number(r.s_dtau_min),
            format_number(r.s_dtau_max),
            r.kappa_bar.map(format_number).unwrap_or_default(),
            format_number(r.ln_error_tilde),
            format_number(r.error),
            format_number(r.total_success_prob),
            format_number(r.fidelity),
            format_number(r.cumulative_tau),
        ])
        .map_err(err)?;
    }
    w.flush().map_err(|e| PiteError::io("<output>", e))
}

/// JSON array mirroring the CSV; every number is written as its CSV string.
pub fn write_sweep_json<W: Write>(mut out: W, rows: &[SweepRow]) -> Result<()> {
    if rows.is_empty() {
        return Err(PiteError::invalid("no sweep rows to write"));
    }
    let objs: Vec<serde_json::Value> = rows
        .iter()
        .map(|r| {
            let mut m = serde_json::Map::new();
            m.insert("param".into(), r.param.clone().into());
            m.insert("value".into(), format_number(r.value).into());
            m.insert("K".into(), r.steps.into());
            m.insert("s_dtau_min".into(), format_number(r.s_dtau_min).into());
            m.insert("s_dtau_max".into(), format_number(r.s_dtau_max).into());
            m.insert(
                "kappa_bar".into(),
                r.kappa_bar
                    .map(format_number)
                    .map_or(serde_json::Value::Null, Into::into),
            );
            m.insert(
                "ln_error_tilde".into(),
                format_number(r.ln_error_tilde).into(),
            );
            m.insert("error".into(), format_number(r.error).into());
            m.insert(
                "total_success_prob".into(),
                format_number(r.total_success_prob).into(),
            );
            m.insert("fidelity".into(), format_number(r.fidelity).into());
            m.insert(
                "cumulative_tau".into(),
                format_number(r.cumulative_tau).into(),
            );
            serde_json::Value::Object(m)
        })
        .collect();
    let text =
        serde_json::to_string_pretty(&objs).map_err(|e| PiteError::Internal(e.to_string()))?;
    writeln!(out, "{text}").map_err(|e| PiteError::Internal(e.to_string()))
}
