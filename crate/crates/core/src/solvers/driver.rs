use std::borrow::Cow;

use super::{stationarity, EpochRecord, SolverConfig, SolverTrace};
use crate::clock::Stopwatch;
use crate::problems::ProblemInstance;
use crate::Result;

/// Objective growth beyond this multiple of `max(|F(x0)|, 1)` counts as divergence.
pub const DIVERGENCE_FACTOR: f64 = 1e6;

/// A solver state that can be advanced one iteration at a time.
pub(crate) trait Iterate {
    fn step(&mut self, problem: &ProblemInstance) -> Result<()>;
    /// The point reported in traces.
    fn point(&self) -> Cow<'_, [f64]>;
    /// Recompute cached products from scratch.
    fn resync(&mut self, problem: &ProblemInstance) -> Result<()>;
    fn iterations(&self) -> u64;
}

fn measure(problem: &ProblemInstance, x: &[f64]) -> Result<(f64, f64)> {
    let f = problem.smooth_objective(x)?;
    // Undefined off the reference domain (accelerated iterates may sit
    // there) and ill-posed for some Burg steps; reported as infinite.
    let s = stationarity(problem, problem.reference(), x).unwrap_or(f64::INFINITY);
    Ok((f, s))
}

pub(crate) fn drive<S: Iterate>(
    problem: &ProblemInstance,
    config: &SolverConfig,
    mut state: S,
    steps_per_epoch: usize,
) -> Result<SolverTrace> {
    let clock = Stopwatch::start();
    let x0 = state.point().into_owned();
    let (f0, s0) = measure(problem, &x0)?;
    let limit = DIVERGENCE_FACTOR * f0.abs().max(1.0);
    let mut trace = SolverTrace {
        config: config.clone(),
        initial_objective: f0,
        initial_stationarity: s0,
        records: Vec::with_capacity(config.epochs),
        diverged: false,
        divergence_reason: None,
        x: x0,
    };

    for epoch in 1..=config.epochs {
        let mut failure = None;
        for _ in 0..steps_per_epoch {
            if let Err(e) = state.step(problem) {
                failure = Some(e.to_string());
                break;
            }
        }
        if failure.is_none() {
            if let Err(e) = state.resync(problem) {
                failure = Some(e.to_string());
            }
        }
        let measured = match failure {
            Some(reason) => Err(reason),
            None => {
                let x = state.point();
                match measure(problem, &x) {
                    Ok((f, _)) if !f.is_finite() || f > limit => Err(format!("objective {f:e} exceeds the divergence limit")),
                    Ok(v) => Ok((v, x.into_owned())),
                    Err(e) => Err(e.to_string()),
                }
            }
        };
        match measured {
            Ok(((f, s), x)) => {
                trace.records.push(EpochRecord {
                    epoch,
                    iterations: state.iterations(),
                    objective: f,
                    stationarity: s,
                    elapsed_s: clock.elapsed_s(),
                    diverged: false,
                });
                trace.x = x;
            }
            Err(reason) => {
                trace.records.push(EpochRecord {
                    epoch,
                    iterations: state.iterations(),
                    objective: f64::INFINITY,
                    stationarity: f64::INFINITY,
                    elapsed_s: clock.elapsed_s(),
                    diverged: true,
                });
                trace.diverged = true;
                trace.divergence_reason = Some(reason);
                break;
            }
        }
    }
    Ok(trace)
}
