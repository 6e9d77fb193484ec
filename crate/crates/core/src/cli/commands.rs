use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use nalgebra::{DMatrix, DVector};
use serde_json::json;

use crate::analysis::{
    arithmetic_mean_exponential, arithmetic_mean_linear, cost_estimate, log_damping_bounds,
    required_steps, ExpMeanParams, LinearBoundParams, StepEstimate,
};
use crate::circuit::{
    apply_postselect, build_approx_step_circuit, sample_trajectories, StateVector,
};
use crate::engine::{energy_shift, run_pite, step_factor};
use crate::error::{PiteError, Result};
use crate::hamiltonians::{diagonalize, dos_histogram, HamiltonianMatrix};
use crate::io::{create_file, format_number, write_spectrum_csv};

use super::config::{load_config, Quantity, RunConfig, Spacing, SweepParam};
use super::experiment::{
    build_system, gamma_params, run_point, run_sweep, shift_policy, sweep_points,
    window_stats_many, write_sweep_csv, write_sweep_json, Point, System,
};
use super::stats::windowed_argmin;

/// Block deviation accepted by `circuit-check`.
pub const CIRCUIT_BLOCK_TOLERANCE: f64 = 1e-10;
/// Eigen-weight deviation accepted by `circuit-check`.
pub const CIRCUIT_WEIGHT_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(
    name = "pite-lab",
    version,
    about = "Probabilistic imaginary-time evolution laboratory"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// JSON experiment description.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads for sweeps and sampling.
    #[arg(long, global = true, env = "PITE_LAB_THREADS")]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalues with initial weights, plus a density-of-states histogram.
    Spectrum {
        #[arg(long, default_value_t = 1.0)]
        bin_width: f64,
        /// Histogram file; defaults to `<output>_dos.csv` next to the output.
        #[arg(long)]
        dos: Option<PathBuf>,
    },
    /// A single run; prints the JSON summary.
    Run {
        /// Include per-eigenvalue damping.
        #[arg(long)]
        damping: bool,
    },
    /// Parameter sweep to CSV (and a JSON mirror when writing to a file).
    Sweep {
        /// Also report mean ± std of ln ε̃ within this half width of each
        /// point's s·Δτ_max (e.g. `0.25pi`).
        #[arg(long)]
        window: Option<String>,
        /// Lattice spacing of the window; defaults to the sweep's own spacing.
        #[arg(long)]
        window_step: Option<String>,
    },
    /// Per-eigenvalue bounds and arithmetic means against Δλ·s·Δτ_max.
    Bounds {
        #[arg(long = "steps", default_value_t = 200)]
        steps: usize,
        #[arg(long, default_value_t = 1.0)]
        kappa_bar: f64,
        /// Δλ·s·Δτ_min.
        #[arg(long, default_value_t = 1e-4)]
        min_phase: f64,
        #[arg(long, default_value = "5pi")]
        max_phase: String,
        #[arg(long, default_value_t = 500)]
        points: usize,
    },
    /// Compares the gate-built step with the eigenbasis engine.
    CircuitCheck {
        /// Only the first N schedule steps.
        #[arg(long)]
        max_steps: Option<usize>,
    },
    /// Samples ancilla outcomes shot by shot.
    Sample {
        #[arg(long, default_value_t = 10_000)]
        shots: u64,
    },
    /// Step count and cost estimate for a target error.
    Cost {
        /// Ground-state weight; taken from the config when omitted.
        #[arg(long)]
        w1_sq: Option<f64>,
        #[arg(long, default_value_t = 1e-2)]
        eps_tilde: f64,
        #[arg(long, default_value_t = 1.0)]
        depth: f64,
    },
}

/// Runs a parsed command; human-readable notes go to `log`.
pub fn execute(cli: &Cli, log: &mut (dyn Write + Send)) -> Result<()> {
    let pool = {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(t) = cli.global.threads {
            if t == 0 {
                return Err(PiteError::config("threads", "must be >= 1"));
            }
            b = b.num_threads(t);
        }
        b.build().map_err(|e| PiteError::Internal(e.to_string()))?
    };
    pool.install(|| dispatch(cli, log))
}

fn dispatch(cli: &Cli, log: &mut (dyn Write + Send)) -> Result<()> {
    let g = &cli.global;
    match &cli.command {
        Command::Spectrum { bin_width, dos } => {
            spectrum_cmd(&need_config(g)?, g, *bin_width, dos.as_deref(), log)
        }
        Command::Run { damping } => run_cmd(&need_config(g)?, g, *damping),
        Command::Sweep {
            window,
            window_step,
        } => sweep_cmd(
            &need_config(g)?,
            g,
            window.as_deref(),
            window_step.as_deref(),
            log,
        ),
        Command::Bounds {
            steps,
            kappa_bar,
            min_phase,
            max_phase,
            points,
        } => bounds_cmd(g, *steps, *kappa_bar, *min_phase, max_phase, *points),
        Command::CircuitCheck { max_steps } => circuit_cmd(&need_config(g)?, g, *max_steps, log),
        Command::Sample { shots } => sample_cmd(&need_config(g)?, g, *shots, log),
        Command::Cost {
            w1_sq,
            eps_tilde,
            depth,
        } => cost_cmd(g, *w1_sq, *eps_tilde, *depth),
    }
}

fn need_config(g: &GlobalArgs) -> Result<RunConfig> {
    let path = g
        .config
        .as_ref()
        .ok_or_else(|| PiteError::config("--config", "this subcommand needs a config file"))?;
    load_config(path)
}

fn output_path(g: &GlobalArgs, cfg: Option<&RunConfig>) -> Option<PathBuf> {
    g.output
        .clone()
        .or_else(|| cfg.and_then(|c| c.output.clone()))
}

fn open(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(create_file(p)?)),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn sibling(path: &Path, suffix: &str, ext: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    path.with_file_name(format!("{stem}{suffix}.{ext}"))
}

fn finish(mut w: Box<dyn Write>, path: Option<&Path>) -> Result<()> {
    w.flush().map_err(|e| match path {
        Some(p) => PiteError::io(p, e),
        None => PiteError::io("<stdout>", e),
    })
}

fn write_json(path: Option<&Path>, value: &serde_json::Value) -> Result<()> {
    let mut w = open(path)?;
    let text =
        serde_json::to_string_pretty(value).map_err(|e| PiteError::Internal(e.to_string()))?;
    writeln!(w, "{text}").map_err(|e| PiteError::io(path.unwrap_or(Path::new("<stdout>")), e))?;
    finish(w, path)
}

fn note(log: &mut (dyn Write + Send), text: std::fmt::Arguments) {
    // Notes are advisory; a closed log stream must not fail the command.
    let _ = writeln!(log, "{text}");
}

fn spectrum_cmd(
    cfg: &RunConfig,
    g: &GlobalArgs,
    bin_width: f64,
    dos_path: Option<&Path>,
    log: &mut (dyn Write + Send),
) -> Result<()> {
    let system = build_system(cfg, false)?;
    let out = output_path(g, Some(cfg));
    let mut w = open(out.as_deref())?;
    write_spectrum_csv(&mut w, &system.spectrum, system.weights.as_slice())?;
    finish(w, out.as_deref())?;

    let dos = dos_histogram(&system.spectrum, bin_width)?;
    let dos_file = dos_path
        .map(Path::to_path_buf)
        .or_else(|| out.as_ref().map(|p| sibling(p, "_dos", "csv")));
    if let Some(p) = &dos_file {
        let mut f = BufWriter::new(create_file(p)?);
        let werr = |e| PiteError::io(p, e);
        writeln!(f, "bin_lower,bin_upper,count,density").map_err(werr)?;
        for (b, (&c, &d)) in dos.counts.iter().zip(&dos.normalized).enumerate() {
            writeln!(
                f,
                "{},{},{},{}",
                format_number(dos.bin_edges[b]),
                format_number(dos.bin_edges[b + 1]),
                c,
                format_number(d)
            )
            .map_err(werr)?;
        }
        f.flush().map_err(werr)?;
    }
    let s = &system.spectrum;
    note(
        log,
        format_args!(
            "states={} lambda1={} gap_min={} gap_max={} dos_bins={}",
            s.len(),
            format_number(s.ground_energy()),
            s.min_gap().map_or("none".into(), format_number),
            s.max_gap().map_or("none".into(), format_number),
            dos.counts.len()
        ),
    );
    Ok(())
}

fn run_cmd(cfg: &RunConfig, g: &GlobalArgs, damping: bool) -> Result<()> {
    let system = build_system(cfg, false)?;
    let gp = gamma_params(cfg)?;
    let point = Point::from_config(cfg, system.gap())?;
    let r = run_point(cfg, &system, &gp, &point)?;
    let mut v = r.to_json(damping);
    v["seed"] = json!(g.seed.unwrap_or(cfg.seed));
    write_json(output_path(g, Some(cfg)).as_deref(), &v)
}

fn sweep_cmd(
    cfg: &RunConfig,
    g: &GlobalArgs,
    window: Option<&str>,
    window_step: Option<&str>,
    log: &mut (dyn Write + Send),
) -> Result<()> {
    let out = output_path(g, Some(cfg));
    if let (Some(p), Some(c)) = (&out, &g.config) {
        let same = |a: &Path, b: &Path| match (a.canonicalize(), b.canonicalize()) {
            (Ok(x), Ok(y)) => x == y,
            _ => false,
        };
        if same(p, c) || same(&p.with_extension("json"), c) {
            return Err(PiteError::config(
                "--output",
                "sweep output or its JSON mirror would overwrite the config file",
            ));
        }
    }
    let system = build_system(cfg, false)?;
    let rows = run_sweep(cfg, &system)?;
    for r in rows.iter().filter(|r| r.failure.is_some()) {
        note(
            log,
            format_args!(
                "point {}={} failed: {}",
                r.param,
                format_number(r.value),
                r.failure.as_deref().unwrap_or_default()
            ),
        );
    }
    let mut w = open(out.as_deref())?;
    write_sweep_csv(&mut w, &rows)?;
    finish(w, out.as_deref())?;
    if let Some(p) = &out {
        let jp = p.with_extension("json");
        let f = BufWriter::new(create_file(&jp)?);
        write_sweep_json(f, &rows)?;
    }

    let Some(window) = window else { return Ok(()) };
    let half = parse_angle("--window", window)?;
    let step = match window_step {
        Some(t) => parse_angle("--window-step", t)?,
        None => default_window_step(cfg, &system)?,
    };
    let sw_param = cfg.sweep.as_ref().map(|s| s.param);
    if sw_param == Some(SweepParam::SDtauMax) {
        let xs: Vec<f64> = rows.iter().map(|r| r.value).collect();
        let ys: Vec<f64> = rows.iter().map(|r| r.ln_error_tilde).collect();
        if let Some((x, m)) = windowed_argmin(&xs, &ys, half) {
            note(
                log,
                format_args!(
                    "windowed minimum: s_dtau_max={} ({}pi) mean_ln_error_tilde={}",
                    format_number(x),
                    format_number(x / std::f64::consts::PI),
                    format_number(m)
                ),
            );
        }
    }
    let points = sweep_points(cfg, &system)?;
    let pts: Vec<Point> = points.iter().map(|(_, p)| *p).collect();
    let stats: Vec<(f64, _)> = points
        .iter()
        .map(|(v, _)| *v)
        .zip(window_stats_many(cfg, &system, &pts, half, step)?)
        .collect();
    let wpath = out.as_ref().map(|p| sibling(p, "_window", "csv"));
    let mut w: Box<dyn Write> = match &wpath {
        Some(p) => Box::new(BufWriter::new(create_file(p)?)),
        None => Box::new(&mut *log),
    };
    let werr = |e| PiteError::io(wpath.clone().unwrap_or_else(|| "<log>".into()), e);
    let name = sw_param.map_or("", |p| p.name());
    writeln!(w, "param,value,center,window_mean,window_std,points").map_err(werr)?;
    for (v, s) in stats {
        writeln!(
            w,
            "{name},{},{},{},{},{}",
            format_number(v),
            format_number(s.center),
            format_number(s.mean),
            format_number(s.std),
            s.points
        )
        .map_err(werr)?;
    }
    w.flush().map_err(werr)
}

/// Spacing of a linear `s_dtau_max` sweep. A lattice commensurate with π
/// (such as `0.01pi`) lands integer excitations exactly on zeros of the step
/// factor, so the sweep's own grid is the safer default.
fn default_window_step(cfg: &RunConfig, system: &System) -> Result<f64> {
    let missing = || {
        PiteError::config(
            "--window-step",
            "required unless the sweep is a linear s_dtau_max sweep",
        )
    };
    let sw = cfg.sweep.as_ref().ok_or_else(missing)?;
    if sw.param != SweepParam::SDtauMax || sw.spacing != Spacing::Linear || sw.points < 2 {
        return Err(missing());
    }
    let span = Quantity {
        value: sw.to.value - sw.from.value,
        per_gap: sw.to.per_gap,
    };
    let step = span.resolve(system.gap())? / (sw.points - 1) as f64;
    if step > 0.0 {
        Ok(step)
    } else {
        Err(missing())
    }
}

fn parse_angle(flag: &str, text: &str) -> Result<f64> {
    Quantity::parse(text)
        .filter(|q| !q.per_gap)
        .map(|q| q.value)
        .ok_or_else(|| PiteError::config(flag, format!("`{text}` is not a number or `<x>pi`")))
}

fn bounds_cmd(
    g: &GlobalArgs,
    steps: usize,
    kappa_bar: f64,
    min_phase: f64,
    max_phase: &str,
    points: usize,
) -> Result<()> {
    let top = parse_angle("--max-phase", max_phase)?;
    if points == 0 || !(top > min_phase) || min_phase < 0.0 {
        return Err(PiteError::config(
            "bounds",
            "need points >= 1 and 0 <= min_phase < max_phase",
        ));
    }
    if steps < 2 || !(kappa_bar > 0.0) {
        return Err(PiteError::config("bounds", "need K >= 2 and kappa_bar > 0"));
    }
    let out = output_path(g, None);
    let mut w = csv::Writer::from_writer(open(out.as_deref())?);
    let err = crate::io::csv_write_error;
    w.write_record([
        "dlambda_s_dtau_max",
        "lower_bound",
        "upper_bound",
        "arith_mean_linear",
        "arith_mean_exp",
        "amplitude",
        "phase",
    ])
    .map_err(err)?;
    for j in 1..=points {
        let x = top * j as f64 / points as f64;
        if x < min_phase {
            continue;
        }
        // Phases are already Δλ·s·Δτ products, so Δλ = s = 1 here.
        let lp = LinearBoundParams::from_schedule(1.0, 1.0, min_phase, x, steps)?;
        let b = log_damping_bounds(&lp);
        let ep = ExpMeanParams::from_schedule(1.0, 1.0, min_phase, x, steps, kappa_bar)?;
        let e = arithmetic_mean_exponential(&ep);
        w.write_record([
            format_number(x),
            format_number(b.lower()),
            format_number(b.upper()),
            format_number(arithmetic_mean_linear(&lp)),
            format_number(e.mean),
            format_number(e.amplitude),
            format_number(e.phase),
        ])
        .map_err(err)?;
    }
    let inner = w.into_inner().map_err(|e| {
        PiteError::io(
            "<output>",
            std::io::Error::new(e.error().kind(), e.to_string()),
        )
    })?;
    finish(inner, out.as_deref())
}

fn circuit_cmd(
    cfg: &RunConfig,
    g: &GlobalArgs,
    max_steps: Option<usize>,
    log: &mut (dyn Write + Send),
) -> Result<()> {
    let system = build_system(cfg, false)?;
    let h = match &system.hamiltonian {
        Some(h) => h.clone(),
        None => HamiltonianMatrix::new(DMatrix::from_diagonal(&DVector::from_column_slice(
            system.spectrum.eigenvalues(),
        )))?,
    };
    let spec = diagonalize(&h)?;
    let gp = gamma_params(cfg)?;
    let point = Point::from_config(cfg, spec.min_gap())?;
    let full = point.schedule(gp.s())?;
    let take = max_steps.unwrap_or(full.len()).min(full.len());
    let steps: Vec<f64> = full.steps()[..take].to_vec();
    let policy = shift_policy(cfg, &system, point.alpha)?;
    let v = spec
        .eigenvectors()
        .expect("diagonalize returns eigenvectors");

    let amps = v * DVector::from_iterator(
        system.weights.len(),
        system.weights.as_slice().iter().map(|w| w.sqrt()),
    );
    let mut state = StateVector::from_register(&amps)?;
    let mut block_dev = 0.0_f64;
    let mut unitarity = 0.0_f64;
    let mut ln_p = 0.0_f64;
    for &dt in &steps {
        let e = if point.alpha == 0.0 {
            policy.lambda1()
        } else {
            energy_shift(&policy, &gp, dt)?
        };
        let u = build_approx_step_circuit(&h, dt, &gp, e)?;
        let vc = v.map(|x| num_complex::Complex64::new(x, 0.0));
        let d = vc.transpose() * u.block_00() * &vc;
        for i in 0..spec.len() {
            for j in 0..spec.len() {
                let f = if i == j {
                    step_factor(spec.eigenvalues()[i], e, dt, &gp)
                } else {
                    0.0
                };
                block_dev = block_dev.max((d[(i, j)] - f).norm());
            }
        }
        unitarity = unitarity.max(u.unitarity_defect());
        let (next, p0) = apply_postselect(&state, &u)?;
        ln_p += p0.ln();
        state = next;
    }
    let truncated = full.truncated(take.max(1))?;
    let r = run_pite(&spec, &system.weights, &truncated, &gp, &policy)?;
    let circuit_weights = state.eigen_weights(&spec)?;
    let weight_dev = circuit_weights
        .iter()
        .zip(&r.final_weights)
        .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
    let p_rel = ((ln_p - r.ln_total_success).exp() - 1.0).abs();
    let pass = block_dev <= CIRCUIT_BLOCK_TOLERANCE * (spec.len() as f64).sqrt().max(1.0)
        && weight_dev <= CIRCUIT_WEIGHT_TOLERANCE;
    let report = json!({
        "steps_checked": take,
        "max_block_deviation": block_dev,
        "max_unitarity_defect": unitarity,
        "max_weight_deviation": weight_dev,
        "total_success_relative_deviation": p_rel,
        "pass": pass,
    });
    note(
        log,
        format_args!(
            "circuit-check: steps={take} max_block_deviation={block_dev:e} max_weight_deviation={weight_dev:e} {}",
            if pass { "PASS" } else { "FAIL" }
        ),
    );
    write_json(g.output.as_deref(), &report)?;
    if pass {
        Ok(())
    } else {
        Err(PiteError::Numeric("circuit and engine disagree".into()))
    }
}

fn sample_cmd(
    cfg: &RunConfig,
    g: &GlobalArgs,
    shots: u64,
    log: &mut (dyn Write + Send),
) -> Result<()> {
    let system = build_system(cfg, false)?;
    let gp = gamma_params(cfg)?;
    let point = Point::from_config(cfg, system.gap())?;
    let sched = point.schedule(gp.s())?;
    let policy = shift_policy(cfg, &system, point.alpha)?;
    let seed = g.seed.unwrap_or(cfg.seed);
    let stats = sample_trajectories(
        &system.spectrum,
        &system.weights,
        &sched,
        &gp,
        &policy,
        shots,
        seed,
    )?;
    let out = output_path(g, Some(cfg));
    let mut w = open(out.as_deref())?;
    let werr = |e| PiteError::io(out.clone().unwrap_or_else(|| "<stdout>".into()), e);
    writeln!(w, "shot,succeeded,steps_survived").map_err(werr)?;
    for r in &stats.records {
        writeln!(
            w,
            "{},{},{}",
            r.shot,
            u8::from(r.succeeded),
            r.steps_survived
        )
        .map_err(werr)?;
    }
    finish(w, out.as_deref())?;
    let summary = json!({
        "seed": seed,
        "shots": stats.shots,
        "successes": stats.successes,
        "frequency": stats.frequency,
        "expected_total_success": stats.expected,
        "mean_attempts": format_number(stats.mean_attempts),
    });
    if let Some(p) = &out {
        write_json(Some(&sibling(p, "_summary", "json")), &summary)?;
    }
    note(log, format_args!("{summary}"));
    Ok(())
}

fn cost_cmd(g: &GlobalArgs, w1_sq: Option<f64>, eps_tilde: f64, depth: f64) -> Result<()> {
    let w1 = match w1_sq {
        Some(v) => v,
        None => {
            let cfg = need_config(g).map_err(|_| {
                PiteError::config("--w1-sq", "give --w1-sq or a config with an initial state")
            })?;
            build_system(&cfg, false)?.weights.ground()
        }
    };
    if !(w1 > 0.0 && w1 <= 1.0) {
        return Err(PiteError::config(
            "--w1-sq",
            format!("must lie in (0, 1], got {w1}"),
        ));
    }
    if !(eps_tilde > 0.0) {
        return Err(PiteError::config("--eps-tilde", "must be positive"));
    }
    let k = required_steps(w1, eps_tilde, StepEstimate::Limit)?;
    let k3 = required_steps(w1, eps_tilde, StepEstimate::Cos2Bound)?;
    let cost = cost_estimate(depth, w1, eps_tilde)?;
    let v = json!({
        "w1_sq": w1,
        "eps_tilde": eps_tilde,
        "depth": depth,
        "steps": k,
        "steps_cos2_bound": k3,
        "total_success_prob": (1.0 + eps_tilde) * w1,
        "cost": cost,
    });
    write_json(g.output.as_deref(), &v)
}
