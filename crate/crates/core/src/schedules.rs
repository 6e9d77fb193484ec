//! Imaginary-time step sequences `Δτ_1..Δτ_K`.
//!
//! Steps are stored without the `s` factor of the first-order expansion; the
//! engine forms the dimensionless product `s·Δτ_k` itself.

use serde::{Deserialize, Serialize};

use crate::error::{PiteError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScheduleKind {
    Constant,
    Linear,
    Exponential,
}

impl std::fmt::Display for ScheduleKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ScheduleKind::Constant => "constant",
            ScheduleKind::Linear => "linear",
            ScheduleKind::Exponential => "exponential",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    kind: ScheduleKind,
    steps: Vec<f64>,
    dtau_min: f64,
    dtau_max: f64,
    kappa_bar: Option<f64>,
    truncated: bool,
}

fn check_range(dtau_min: f64, dtau_max: f64) -> Result<()> {
    if !(dtau_min >= 0.0 && dtau_max.is_finite() && dtau_min <= dtau_max) {
        return Err(PiteError::invalid(format!(
            "schedule needs 0 <= dtau_min <= dtau_max, got [{dtau_min}, {dtau_max}]"
        )));
    }
    Ok(())
}

/// `Δτ_k = (k-1)/(K-1)·(Δτ_max - Δτ_min) + Δτ_min`, `K >= 2`.
pub fn linear_schedule(dtau_min: f64, dtau_max: f64, steps: usize) -> Result<Schedule> {
    check_range(dtau_min, dtau_max)?;
    if steps < 2 {
        return Err(PiteError::invalid(format!(
            "linear schedule needs K >= 2, got {steps}"
        )));
    }
    let span = dtau_max - dtau_min;
    let last = (steps - 1) as f64;
    let mut dt: Vec<f64> = (0..steps)
        .map(|j| j as f64 / last * span + dtau_min)
        .collect();
    dt[steps - 1] = dtau_max;
    Ok(Schedule {
        kind: ScheduleKind::Linear,
        steps: dt,
        dtau_min,
        dtau_max,
        kappa_bar: None,
        truncated: false,
    })
}

/// `Δτ_k = (1 - e^{-(k-1)/κ})(Δτ_max - Δτ_min) + Δτ_min` with `κ = κ̄·K`.
pub fn exponential_schedule(
    dtau_min: f64,
    dtau_max: f64,
    steps: usize,
    kappa_bar: f64,
) -> Result<Schedule> {
    check_range(dtau_min, dtau_max)?;
    if steps < 1 {
        return Err(PiteError::invalid("exponential schedule needs K >= 1"));
    }
    if !(kappa_bar > 0.0 && kappa_bar.is_finite()) {
        return Err(PiteError::invalid(format!(
            "kappa_bar must be positive, got {kappa_bar}"
        )));
    }
    let kappa = kappa_bar * steps as f64;
    let span = dtau_max - dtau_min;
    let dt = (0..steps)
        .map(|j| -(-(j as f64) / kappa).exp_m1() * span + dtau_min)
        .collect();
    Ok(Schedule {
        kind: ScheduleKind::Exponential,
        steps: dt,
        dtau_min,
        dtau_max,
        kappa_bar: Some(kappa_bar),
        truncated: false,
    })
}

/// `K` copies of `dtau`.
pub fn constant_schedule(dtau: f64, steps: usize) -> Result<Schedule> {
    check_range(dtau, dtau)?;
    if steps < 1 {
        return Err(PiteError::invalid("constant schedule needs K >= 1"));
    }
    Ok(Schedule {
        kind: ScheduleKind::Constant,
        steps: vec![dtau; steps],
        dtau_min: dtau,
        dtau_max: dtau,
        kappa_bar: None,
        truncated: false,
    })
}

impl Schedule {
    pub fn kind(&self) -> ScheduleKind {
        self.kind
    }

    pub fn steps(&self) -> &[f64] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn dtau_min(&self) -> f64 {
        self.dtau_min
    }

    pub fn dtau_max(&self) -> f64 {
        self.dtau_max
    }

    pub fn kappa_bar(&self) -> Option<f64> {
        self.kappa_bar
    }

    /// `κ = κ̄·K` for exponential schedules.
    pub fn kappa(&self) -> Option<f64> {
        self.kappa_bar.map(|kb| kb * self.len() as f64)
    }

    /// Final step `Δτ_K`. For exponential schedules this differs from `Δτ_max`.
    pub fn final_step(&self) -> f64 {
        self.steps[self.len() - 1]
    }

    /// The first `k` steps, keeping the parameters of the full schedule.
    pub fn truncated(&self, k: usize) -> Result<Schedule> {
        if k == 0 || k > self.len() {
            return Err(PiteError::invalid(format!(
                "cannot keep {k} of {} steps",
                self.len()
            )));
        }
        let mut s = self.clone();
        s.truncated |= k < self.len();
        s.steps.truncate(k);
        Ok(s)
    }

    /// Closed-form total imaginary time `Σ Δτ_k` (a plain sum once truncated).
    pub fn cumulative(&self) -> f64 {
        if self.truncated {
            return self.summed();
        }
        let k = self.len() as f64;
        match self.kind {
            ScheduleKind::Constant => k * self.dtau_max,
            ScheduleKind::Linear => k * (self.dtau_max + self.dtau_min) / 2.0,
            ScheduleKind::Exponential => {
                let kb = self
                    .kappa_bar
                    .expect("exponential schedule carries kappa_bar");
                let kappa = kb * k;
                // (1 - e^{-1/κ̄}) / (1 - e^{-1/κ}) = Σ_k e^{-(k-1)/κ}
                let geometric = (-1.0 / kb).exp_m1() / (-1.0 / kappa).exp_m1();
                k * self.dtau_max - (self.dtau_max - self.dtau_min) * geometric
            }
        }
    }

    /// Direct left-to-right sum of the steps.
    pub fn summed(&self) -> f64 {
        self.steps.iter().sum()
    }
}

/// Final-step value `Δτ_K = Δτ_max - e^{(1/K-1)/κ̄}(Δτ_max - Δτ_min)` of an
/// exponential schedule.
pub fn exponential_final_step(dtau_min: f64, dtau_max: f64, steps: usize, kappa_bar: f64) -> f64 {
    let decay = ((1.0 / steps as f64 - 1.0) / kappa_bar).exp();
    dtau_max - decay * (dtau_max - dtau_min)
}
