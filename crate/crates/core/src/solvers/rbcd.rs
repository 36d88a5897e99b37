use std::borrow::Cow;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::driver::{drive, Iterate};
use super::tmap::offset_error;
use super::{draw_block, SolverConfig, SolverKind, SolverTrace};
use crate::geometry::bregman_prox_into;
use crate::problems::{ProblemInstance, ResidualCache};
use crate::{Error, Result};

/// State of randomized Bregman block coordinate descent.
#[derive(Clone, Debug)]
pub struct RbcdState {
    x: Vec<f64>,
    cache: ResidualCache,
    rng: ChaCha8Rng,
    alphas: Vec<f64>,
    iterations: u64,
    grad: Vec<f64>,
}

/// What one coordinate step changed.
#[derive(Clone, Debug, PartialEq)]
pub struct RbcdStep {
    pub block: usize,
    pub previous: Vec<f64>,
    pub updated: Vec<f64>,
}

impl RbcdState {
    pub fn new(problem: &ProblemInstance, config: &SolverConfig) -> Result<Self> {
        let x = config.start(problem)?;
        let cache = problem.residual(&x)?;
        let alphas = config.stepsize.resolve(problem)?;
        let widest = problem.partition().sizes().iter().copied().max().unwrap_or(0);
        Ok(Self {
            x,
            cache,
            rng: ChaCha8Rng::seed_from_u64(config.seed),
            alphas,
            iterations: 0,
            grad: vec![0.0; widest],
        })
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn cache(&self) -> &ResidualCache {
        &self.cache
    }

    pub fn stepsizes(&self) -> &[f64] {
        &self.alphas
    }

    pub fn iterations(&self) -> u64 {
        self.iterations
    }

    /// Next block index from the run's PRNG stream.
    pub fn draw(&mut self, problem: &ProblemInstance) -> usize {
        draw_block(&mut self.rng, problem.n_blocks())
    }

    /// Prox update of `block` at the current point, without applying it.
    pub fn propose(&mut self, problem: &ProblemInstance, block: usize) -> Result<Vec<f64>> {
        let range = problem.partition().range(block);
        let g = &mut self.grad[..range.len()];
        problem.partial_gradient(&self.cache, block, g)?;
        let mut out = vec![0.0; range.len()];
        bregman_prox_into(
            problem.reference().reference(block),
            &self.x[range.clone()],
            g,
            self.alphas[block],
            problem.regularizer().kind(block),
            &mut out,
        )
        .map_err(|e| offset_error(e, range.start))?;
        Ok(out)
    }

    /// Overwrite `block` with `updated` and refresh the residual.
    pub fn apply(&mut self, problem: &ProblemInstance, block: usize, updated: &[f64]) -> Result<RbcdStep> {
        let range = problem.partition().range(block);
        if updated.len() != range.len() {
            return Err(Error::Dimension {
                expected: range.len(),
                got: updated.len(),
            });
        }
        let previous = self.x[range.clone()].to_vec();
        let delta: Vec<f64> = updated.iter().zip(&previous).map(|(u, p)| u - p).collect();
        self.cache.apply_block_update(problem, block, &delta);
        self.x[range].copy_from_slice(updated);
        self.iterations += 1;
        Ok(RbcdStep {
            block,
            previous,
            updated: updated.to_vec(),
        })
    }
}

/// One RBCD iteration: draw a block uniformly and take its prox step.
pub fn rbcd_step(state: &mut RbcdState, problem: &ProblemInstance) -> Result<RbcdStep> {
    let block = state.draw(problem);
    let updated = state.propose(problem, block)?;
    state.apply(problem, block, &updated)
}

impl Iterate for RbcdState {
    fn step(&mut self, problem: &ProblemInstance) -> Result<()> {
        rbcd_step(self, problem).map(|_| ())
    }

    fn point(&self) -> Cow<'_, [f64]> {
        Cow::Borrowed(&self.x)
    }

    fn resync(&mut self, problem: &ProblemInstance) -> Result<()> {
        self.cache = problem.residual(&self.x)?;
        Ok(())
    }

    fn iterations(&self) -> u64 {
        self.iterations
    }
}

/// `epochs * n` RBCD steps, logged once per epoch.
pub fn run_rbcd(problem: &ProblemInstance, config: &SolverConfig) -> Result<SolverTrace> {
    let config = SolverConfig {
        solver: SolverKind::Rbcd,
        ..config.clone()
    };
    let state = RbcdState::new(problem, &config)?;
    drive(problem, &config, state, problem.n_blocks())
}
