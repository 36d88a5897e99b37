use std::borrow::Cow;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::beta::BetaSequence;
use super::driver::{drive, Iterate};
use super::tmap::offset_error;
use super::{draw_block, SolverConfig, SolverKind, SolverTrace};
use crate::geometry::bregman_prox_into;
use crate::problems::{ProblemInstance, ResidualCache};
use crate::{Error, Result};

/// Effective z-stepsize `1 / ((n beta)^(gamma - 1) L_i)`.
fn z_stepsize(n: usize, beta: f64, gamma: f64, weight: f64) -> f64 {
    1.0 / ((n as f64 * beta).powf(gamma - 1.0) * weight)
}

/// `x^{k+1}` is an affine, not convex, combination, so it may leave the
/// reference domain; it only has to stay where `f` is defined.
fn check_new_block(problem: &ProblemInstance, block: usize, values: &[f64]) -> Result<()> {
    let offset = problem.partition().range(block).start;
    match values.iter().position(|v| !v.is_finite()) {
        Some(j) => Err(Error::Domain {
            what: "accelerated iterate",
            index: offset + j,
            value: values[j],
        }),
        None => Ok(()),
    }
}

/// Accelerated RBCD in its reference form: maintains `x`, `z` and `y`
/// together with their residuals, `O(N + M N_i)` work per iteration.
#[derive(Clone, Debug)]
pub struct ArbcdState {
    x: Vec<f64>,
    y: Vec<f64>,
    z: Vec<f64>,
    ax: ResidualCache,
    ay: ResidualCache,
    az: ResidualCache,
    beta: BetaSequence,
    gamma: f64,
    rng: ChaCha8Rng,
    iterations: u64,
    last_block: Option<usize>,
}

impl ArbcdState {
    pub fn new(problem: &ProblemInstance, config: &SolverConfig) -> Result<Self> {
        let x = config.start(problem)?;
        let ax = problem.residual(&x)?;
        Ok(Self {
            y: x.clone(),
            z: x.clone(),
            ay: ax.clone(),
            az: ax.clone(),
            x,
            ax,
            beta: BetaSequence::new(config.beta_schedule, config.gamma),
            gamma: config.gamma,
            rng: ChaCha8Rng::seed_from_u64(config.seed),
            iterations: 0,
            last_block: None,
        })
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    /// The extrapolated point of the latest iteration (`x^0` before the first).
    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn z(&self) -> &[f64] {
        &self.z
    }

    /// `beta_k` for the next iteration.
    pub fn beta(&self) -> f64 {
        self.beta.current()
    }

    pub fn iterations(&self) -> u64 {
        self.iterations
    }

    pub fn last_block(&self) -> Option<usize> {
        self.last_block
    }

    pub fn step(&mut self, problem: &ProblemInstance) -> Result<()> {
        let n = problem.n_blocks();
        let beta = self.beta.current();
        for ((y, &x), &z) in self.y.iter_mut().zip(&self.x).zip(&self.z) {
            *y = (1.0 - beta) * x + beta * z;
        }
        self.ay.set_combination(1.0 - beta, &self.ax, beta, &self.az);

        let block = draw_block(&mut self.rng, n);
        let range = problem.partition().range(block);
        let mut g = vec![0.0; range.len()];
        problem.partial_gradient(&self.ay, block, &mut g)?;
        let alpha = z_stepsize(n, beta, self.gamma, problem.reference().weight(block));
        let mut z_new = vec![0.0; range.len()];
        bregman_prox_into(
            problem.reference().reference(block),
            &self.z[range.clone()],
            &g,
            alpha,
            problem.regularizer().kind(block),
            &mut z_new,
        )
        .map_err(|e| offset_error(e, range.start))?;

        let scale = n as f64 * beta;
        let dz: Vec<f64> = z_new.iter().zip(&self.z[range.clone()]).map(|(a, b)| a - b).collect();
        let x_block: Vec<f64> = self.y[range.clone()].iter().zip(&dz).map(|(y, d)| y + scale * d).collect();
        check_new_block(problem, block, &x_block)?;

        self.x.copy_from_slice(&self.y);
        self.x[range.clone()].copy_from_slice(&x_block);
        self.ax.clone_from(&self.ay);
        let scaled: Vec<f64> = dz.iter().map(|d| scale * d).collect();
        self.ax.apply_block_update(problem, block, &scaled);
        problem.check_residual(&self.ax)?;
        self.az.apply_block_update(problem, block, &dz);
        self.z[range].copy_from_slice(&z_new);

        self.beta.advance()?;
        self.iterations += 1;
        self.last_block = Some(block);
        Ok(())
    }
}

impl Iterate for ArbcdState {
    fn step(&mut self, problem: &ProblemInstance) -> Result<()> {
        ArbcdState::step(self, problem)
    }

    fn point(&self) -> Cow<'_, [f64]> {
        Cow::Borrowed(&self.x)
    }

    fn resync(&mut self, problem: &ProblemInstance) -> Result<()> {
        self.ax = problem.residual(&self.x)?;
        self.az = problem.residual(&self.z)?;
        Ok(())
    }

    fn iterations(&self) -> u64 {
        self.iterations
    }
}

/// Change-of-variables ARBCD. Keeps `u`, `v` with `z = v`,
/// `y = s u + v` and `x = s' u + v`, where `s` is the running product of
/// `1 - beta_j` (equal to `beta_k^gamma` under the equality schedule) and `s'`
/// its value one iteration earlier. Each iteration touches only block `i` of
/// `u`, `v` plus the two residuals.
#[derive(Clone, Debug)]
pub struct ArbcdEfficientState {
    u: Vec<f64>,
    v: Vec<f64>,
    au: ResidualCache,
    av: ResidualCache,
    scale: f64,
    prev_scale: f64,
    beta: BetaSequence,
    gamma: f64,
    rng: ChaCha8Rng,
    iterations: u64,
    last_block: Option<usize>,
}

impl ArbcdEfficientState {
    pub fn new(problem: &ProblemInstance, config: &SolverConfig) -> Result<Self> {
        let v = config.start(problem)?;
        let u = vec![0.0; v.len()];
        Ok(Self {
            au: problem.residual(&u)?,
            av: problem.residual(&v)?,
            u,
            v,
            scale: 1.0,
            prev_scale: 1.0,
            beta: BetaSequence::new(config.beta_schedule, config.gamma),
            gamma: config.gamma,
            rng: ChaCha8Rng::seed_from_u64(config.seed),
            iterations: 0,
            last_block: None,
        })
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    pub fn v(&self) -> &[f64] {
        &self.v
    }

    /// Coefficient of `u` in the gradient point of the next iteration.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn beta(&self) -> f64 {
        self.beta.current()
    }

    pub fn iterations(&self) -> u64 {
        self.iterations
    }

    pub fn last_block(&self) -> Option<usize> {
        self.last_block
    }

    /// Current iterate `x^k = s' u + v`.
    pub fn x(&self) -> Vec<f64> {
        combine(self.prev_scale, &self.u, &self.v)
    }

    /// Point where the next partial gradient is taken, `s u + v`.
    pub fn gradient_point(&self) -> Vec<f64> {
        combine(self.scale, &self.u, &self.v)
    }

    pub fn step(&mut self, problem: &ProblemInstance) -> Result<()> {
        let n = problem.n_blocks();
        let beta = self.beta.current();
        let s = self.scale;
        let block = draw_block(&mut self.rng, n);
        let range = problem.partition().range(block);

        let mut g = vec![0.0; range.len()];
        let (au, av) = (self.au.values(), self.av.values());
        problem.partial_gradient_with(|r| s * au[r] + av[r], block, &mut g)?;
        let alpha = z_stepsize(n, beta, self.gamma, problem.reference().weight(block));
        let mut v_new = vec![0.0; range.len()];
        bregman_prox_into(
            problem.reference().reference(block),
            &self.v[range.clone()],
            &g,
            alpha,
            problem.regularizer().kind(block),
            &mut v_new,
        )
        .map_err(|e| offset_error(e, range.start))?;

        let d: Vec<f64> = v_new.iter().zip(&self.v[range.clone()]).map(|(a, b)| a - b).collect();
        let coef = (1.0 - n as f64 * beta) / s;
        let du: Vec<f64> = d.iter().map(|d| -coef * d).collect();
        let u_block: Vec<f64> = self.u[range.clone()].iter().zip(&du).map(|(u, d)| u + d).collect();
        let x_block: Vec<f64> = u_block.iter().zip(&v_new).map(|(u, v)| s * u + v).collect();
        check_new_block(problem, block, &x_block)?;

        self.u[range.clone()].copy_from_slice(&u_block);
        self.v[range].copy_from_slice(&v_new);
        self.au.apply_block_update(problem, block, &du);
        self.av.apply_block_update(problem, block, &d);
        let (au, av) = (self.au.values(), self.av.values());
        problem.check_residual_with(|r| s * au[r] + av[r])?;

        let next = self.beta.advance()?;
        self.prev_scale = s;
        self.scale = (1.0 - next) * s;
        self.iterations += 1;
        self.last_block = Some(block);
        Ok(())
    }
}

fn combine(s: f64, u: &[f64], v: &[f64]) -> Vec<f64> {
    u.iter().zip(v).map(|(u, v)| s * u + v).collect()
}

impl Iterate for ArbcdEfficientState {
    fn step(&mut self, problem: &ProblemInstance) -> Result<()> {
        ArbcdEfficientState::step(self, problem)
    }

    fn point(&self) -> Cow<'_, [f64]> {
        Cow::Owned(self.x())
    }

    fn resync(&mut self, problem: &ProblemInstance) -> Result<()> {
        self.au = problem.residual(&self.u)?;
        self.av = problem.residual(&self.v)?;
        Ok(())
    }

    fn iterations(&self) -> u64 {
        self.iterations
    }
}

pub fn run_arbcd(problem: &ProblemInstance, config: &SolverConfig) -> Result<SolverTrace> {
    let config = SolverConfig {
        solver: SolverKind::Arbcd,
        ..config.clone()
    };
    let state = ArbcdState::new(problem, &config)?;
    drive(problem, &config, state, problem.n_blocks())
}

pub fn run_arbcd_efficient(problem: &ProblemInstance, config: &SolverConfig) -> Result<SolverTrace> {
    let config = SolverConfig {
        solver: SolverKind::ArbcdEfficient,
        ..config.clone()
    };
    let state = ArbcdEfficientState::new(problem, &config)?;
    drive(problem, &config, state, problem.n_blocks())
}
