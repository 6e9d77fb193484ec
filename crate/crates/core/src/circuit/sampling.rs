use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::engine::{run_pite, GammaParams, InitialWeights, ShiftPolicy};
use crate::error::{PiteError, Result};
use crate::hamiltonians::Spectrum;
use crate::schedules::Schedule;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ShotRecord {
    pub shot: u64,
    pub succeeded: bool,
    /// Steps whose ancilla measurement returned `|0⟩` before the first failure.
    pub steps_survived: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryStats {
    pub seed: u64,
    pub shots: u64,
    pub successes: u64,
    /// Empirical all-success frequency, an estimate of `P_K`.
    pub frequency: f64,
    /// Engine value of `P_K` for comparison.
    pub expected: f64,
    /// Runs per success under restart-on-failure, `shots / successes`.
    pub mean_attempts: f64,
    pub records: Vec<ShotRecord>,
}

/// Simulates ancilla outcomes step by step using the conditional success
/// probabilities `p_k`. Shot `j` draws from ChaCha8 seeded with `seed` on
/// stream `j`, so the output does not depend on thread scheduling.
pub fn sample_trajectories(
    spec: &Spectrum,
    w: &InitialWeights,
    sched: &Schedule,
    gp: &GammaParams,
    policy: &ShiftPolicy,
    shots: u64,
    seed: u64,
) -> Result<TrajectoryStats> {
    if shots == 0 {
        return Err(PiteError::invalid("need at least one shot"));
    }
    let run = run_pite(spec, w, sched, gp, policy)?;
    let p = &run.step_success;
    let records: Vec<ShotRecord> = (0..shots)
        .into_par_iter()
        .map(|shot| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(shot);
            let survived = p.iter().take_while(|&&pk| rng.random::<f64>() < pk).count();
            ShotRecord {
                shot,
                succeeded: survived == p.len(),
                steps_survived: survived,
            }
        })
        .collect();
    let successes = records.iter().filter(|r| r.succeeded).count() as u64;
    Ok(TrajectoryStats {
        seed,
        shots,
        successes,
        frequency: successes as f64 / shots as f64,
        expected: run.total_success,
        mean_attempts: if successes == 0 {
            f64::INFINITY
        } else {
            shots as f64 / successes as f64
        },
        records,
    })
}
