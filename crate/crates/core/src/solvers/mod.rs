//! RBCD, accelerated RBCD (reference and change-of-variables forms), the
//! full-gradient baselines and the T-map stationarity measure.

mod arbcd;
mod beta;
mod config;
mod driver;
mod full;
mod rbcd;
mod tmap;
mod trace;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use arbcd::{run_arbcd, run_arbcd_efficient, ArbcdEfficientState, ArbcdState};
pub use beta::{beta_closed_form, beta_equality};
pub use config::{BetaSchedule, SolverConfig, SolverKind, StepsizeRule};
pub use driver::DIVERGENCE_FACTOR;
pub use full::{run_abpg, run_bpg};
pub use rbcd::{rbcd_step, run_rbcd, RbcdState, RbcdStep};
pub use tmap::{stationarity, t_map};
pub use trace::{EpochRecord, SolverTrace};

use crate::problems::ProblemInstance;
use crate::Result;

/// Uniform block index; the only consumer of a run's PRNG stream, so
/// coordinate solvers seeded alike visit the same blocks.
pub(crate) fn draw_block(rng: &mut ChaCha8Rng, n: usize) -> usize {
    rng.random_range(0..n)
}

/// Dispatch on `config.solver`.
pub fn run(problem: &ProblemInstance, config: &SolverConfig) -> Result<SolverTrace> {
    match config.solver {
        SolverKind::Rbcd => run_rbcd(problem, config),
        SolverKind::Arbcd => run_arbcd(problem, config),
        SolverKind::ArbcdEfficient => run_arbcd_efficient(problem, config),
        SolverKind::Bpg => run_bpg(problem, config),
        SolverKind::Abpg => run_abpg(problem, config),
    }
}
