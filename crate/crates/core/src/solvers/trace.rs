use serde::{Deserialize, Serialize};

use super::SolverConfig;

/// One logged point. `objective` is `f` at the logged iterate, which equals
/// `F` whenever the iterate is feasible (always for RBCD, BPG and ABPG).
/// Objective and stationarity are `+inf` on the record that marks a divergence.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    pub epoch: usize,
    pub iterations: u64,
    pub objective: f64,
    pub stationarity: f64,
    pub elapsed_s: f64,
    pub diverged: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverTrace {
    pub config: SolverConfig,
    pub initial_objective: f64,
    pub initial_stationarity: f64,
    /// Records for epochs `1..=epochs`, fewer if the run diverged.
    pub records: Vec<EpochRecord>,
    pub diverged: bool,
    pub divergence_reason: Option<String>,
    /// Last in-domain iterate.
    pub x: Vec<f64>,
}

impl SolverTrace {
    pub fn seed(&self) -> u64 {
        self.config.seed
    }

    /// Objective at the last finite record (the start if none).
    pub fn final_objective(&self) -> f64 {
        self.records
            .iter()
            .rev()
            .find(|r| !r.diverged)
            .map_or(self.initial_objective, |r| r.objective)
    }

    /// `(epoch, objective)` pairs including epoch 0.
    pub fn objectives(&self) -> Vec<(usize, f64)> {
        std::iter::once((0, self.initial_objective))
            .chain(self.records.iter().map(|r| (r.epoch, r.objective)))
            .collect()
    }

    pub fn stationarities(&self) -> Vec<(usize, f64)> {
        std::iter::once((0, self.initial_stationarity))
            .chain(self.records.iter().map(|r| (r.epoch, r.stationarity)))
            .collect()
    }

    pub fn without_timing(mut self) -> Self {
        for r in &mut self.records {
            r.elapsed_s = 0.0;
        }
        self
    }
}
