use std::borrow::Cow;

use super::beta::BetaSequence;
use super::driver::{drive, Iterate};
use super::tmap::prox_step;
use super::{SolverConfig, SolverKind, SolverTrace};
use crate::problems::ProblemInstance;
use crate::Result;

/// Bregman proximal gradient: every block takes its prox step at once.
struct Bpg {
    x: Vec<f64>,
    alphas: Vec<f64>,
    iterations: u64,
}

impl Iterate for Bpg {
    fn step(&mut self, problem: &ProblemInstance) -> Result<()> {
        let g = problem.full_gradient(&self.x)?;
        self.x = prox_step(problem, &self.x, &g, &self.alphas)?;
        self.iterations += 1;
        Ok(())
    }

    fn point(&self) -> Cow<'_, [f64]> {
        Cow::Borrowed(&self.x)
    }

    fn resync(&mut self, _: &ProblemInstance) -> Result<()> {
        Ok(())
    }

    fn iterations(&self) -> u64 {
        self.iterations
    }
}

/// Accelerated Bregman proximal gradient: the accelerated scheme with a
/// single block holding every coordinate.
struct Abpg {
    x: Vec<f64>,
    z: Vec<f64>,
    beta: BetaSequence,
    gamma: f64,
    iterations: u64,
}

impl Iterate for Abpg {
    fn step(&mut self, problem: &ProblemInstance) -> Result<()> {
        let beta = self.beta.current();
        let y: Vec<f64> = self.x.iter().zip(&self.z).map(|(x, z)| (1.0 - beta) * x + beta * z).collect();
        let g = problem.full_gradient(&y)?;
        let alphas: Vec<f64> = problem
            .reference()
            .weights()
            .iter()
            .map(|l| 1.0 / (beta.powf(self.gamma - 1.0) * l))
            .collect();
        self.z = prox_step(problem, &self.z, &g, &alphas)?;
        for (x, z) in self.x.iter_mut().zip(&self.z) {
            *x = (1.0 - beta) * *x + beta * z;
        }
        self.beta.advance()?;
        self.iterations += 1;
        Ok(())
    }

    fn point(&self) -> Cow<'_, [f64]> {
        Cow::Borrowed(&self.x)
    }

    fn resync(&mut self, _: &ProblemInstance) -> Result<()> {
        Ok(())
    }

    fn iterations(&self) -> u64 {
        self.iterations
    }
}

/// One BPG iteration per epoch, stepsizes from the config's rule.
pub fn run_bpg(problem: &ProblemInstance, config: &SolverConfig) -> Result<SolverTrace> {
    let config = SolverConfig {
        solver: SolverKind::Bpg,
        ..config.clone()
    };
    let state = Bpg {
        x: config.start(problem)?,
        alphas: config.stepsize.resolve(problem)?,
        iterations: 0,
    };
    drive(problem, &config, state, 1)
}

pub fn run_abpg(problem: &ProblemInstance, config: &SolverConfig) -> Result<SolverTrace> {
    let config = SolverConfig {
        solver: SolverKind::Abpg,
        ..config.clone()
    };
    let x = config.start(problem)?;
    let state = Abpg {
        z: x.clone(),
        x,
        beta: BetaSequence::new(config.beta_schedule, config.gamma),
        gamma: config.gamma,
        iterations: 0,
    };
    drive(problem, &config, state, 1)
}
