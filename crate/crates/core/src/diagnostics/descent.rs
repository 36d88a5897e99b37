use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::sampling::log_uniform;
use super::CheckReport;
use crate::geometry::{bregman_prox, Domain};
use crate::problems::ProblemInstance;
use crate::solvers::{RbcdState, SolverConfig, SolverKind, StepsizeRule};
use crate::{Error, Result};

/// One-block descent lemma
/// `f(y) - f(x) - <grad_i f(x), y_i - x_i> <= L_i D_h(y_i, x_i)` on random
/// pairs. Entropy coordinates are log-uniform on `[1e-2, 1e2]` and perturbed
/// multiplicatively by up to `e^3`; Euclidean ones are uniform on `[-10, 10]`
/// and shifted by up to 5. Trial 0 uses `y = x`.
pub fn check_descent_lemma(problem: &ProblemInstance, trials: usize, tol: f64, seed: u64) -> CheckReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = problem.partition();
    let h = problem.reference();
    let mut worst = f64::NEG_INFINITY;
    let mut done = 0;
    let mut skipped = 0;
    let mut grad = Vec::new();
    for trial in 0..trials {
        let mut x = vec![0.0; problem.dim()];
        for block in 0..p.n_blocks() {
            let euclidean = h.reference(block).domain() == Domain::AllReals;
            for xj in &mut x[p.range(block)] {
                *xj = if euclidean {
                    rng.random_range(-10.0..10.0)
                } else {
                    log_uniform(&mut rng, 1e-2, 1e2)
                };
            }
        }
        let block = rng.random_range(0..p.n_blocks());
        let range = p.range(block);
        let kind = h.reference(block);
        let y: Vec<f64> = x[range.clone()]
            .iter()
            .map(|&xj| match (trial, kind.domain()) {
                (0, _) => xj,
                (_, Domain::AllReals) => xj + rng.random_range(-5.0..5.0),
                (_, Domain::StrictlyPositive) => xj * rng.random_range(-3.0f64..3.0).exp(),
            })
            .collect();
        let Ok(cache) = problem.residual(&x) else {
            skipped += 1;
            continue;
        };
        grad.resize(range.len(), 0.0);
        let (Ok(delta), Ok(())) = (
            problem.block_delta(&x, &cache, block, &y),
            problem.partial_gradient(&cache, block, &mut grad),
        ) else {
            skipped += 1;
            continue;
        };
        let linear: f64 = grad.iter().zip(&y).zip(&x[range]).map(|((g, a), b)| g * (a - b)).sum();
        let Ok(bound) = h.block_distance(block, &y, &x[p.range(block)]) else {
            skipped += 1;
            continue;
        };
        worst = worst.max(delta - linear - bound);
        done += 1;
    }
    CheckReport::new(
        format!("descent-lemma/{}", problem.family()),
        "direct evaluation of both sides",
        done,
        skipped,
        worst,
        tol,
    )
}

/// Along an RBCD run with `config`'s stepsizes, each step must decrease `F`
/// by at least `((1 + theta_i) / alpha_i - L_i) D_h(x+_i, x_i)`. A failed
/// prox step counts as an infinite violation.
pub fn check_sufficient_decrease(problem: &ProblemInstance, config: &SolverConfig, steps: usize, tol: f64) -> CheckReport {
    let name = format!("sufficient-decrease/{}", problem.family());
    let oracle = "instrumented RBCD run, per-row objective increments";
    let mut config = config.clone();
    config.solver = SolverKind::Rbcd;
    let mut state = match RbcdState::new(problem, &config) {
        Ok(s) => s,
        Err(_) => return CheckReport::inconclusive(name, oracle, 0),
    };
    let h = problem.reference();
    let mut worst = f64::NEG_INFINITY;
    let mut done = 0;
    for _ in 0..steps {
        let block = state.draw(problem);
        let range = problem.partition().range(block);
        let violation = state
            .propose(problem, block)
            .and_then(|next| {
                let decrease = -problem.block_delta(state.x(), state.cache(), block, &next)?;
                let kind = h.reference(block);
                let coefficient = (1.0 + kind.theta()) / state.stepsizes()[block] - h.weight(block);
                let required = coefficient * kind.distance(&next, &state.x()[range])?;
                state.apply(problem, block, &next)?;
                Ok(required - decrease)
            })
            .unwrap_or(f64::INFINITY);
        worst = worst.max(violation);
        done += 1;
        if violation == f64::INFINITY {
            break;
        }
    }
    CheckReport::new(name, oracle, done, 0, worst, tol)
}

/// The three enumerated one-step expectation checks.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpectationReports {
    /// `E[D_H(u, x+)] = ((n-1)/n) D_H(u, x) + (1/n) D_H(u, T(x))`.
    pub identity: CheckReport,
    /// `E[F(x+)] <= F(x) - (1/n) D_H(T(x), x)`.
    pub descent: CheckReport,
    /// `E[F(x+)] <= ((n-1) F(x) + F(u) + D'(u, x) - D'(u, T(x))) / n` where
    /// `D'` has weights `1 / alpha_i`.
    pub bound: CheckReport,
}

impl ExpectationReports {
    pub fn into_vec(self) -> Vec<CheckReport> {
        vec![self.identity, self.descent, self.bound]
    }
}

/// Enumerates all `n` outcomes of one RBCD step from each state `(x, u)`.
/// `T(x)` is the step RBCD actually takes, block `i` with stepsize
/// `alpha_i = (1 + theta_i) / (2 L_i)`.
pub fn check_expectation_identities(problem: &ProblemInstance, states: &[(Vec<f64>, Vec<f64>)]) -> Result<ExpectationReports> {
    expectation_reports(problem, states, 1.0)
}

/// `claim` multiplies the guaranteed decrease; values above the true
/// constant make a sensitivity control.
pub(crate) fn expectation_reports(
    problem: &ProblemInstance,
    states: &[(Vec<f64>, Vec<f64>)],
    claim: f64,
) -> Result<ExpectationReports> {
    let n = problem.n_blocks();
    if n > 64 {
        return Err(Error::invalid(format!("enumeration needs at most 64 blocks, got {n}")));
    }
    let h = problem.reference();
    let p = problem.partition();
    let alphas = StepsizeRule::Standard.resolve(problem)?;
    let prime = h.with_weights(alphas.iter().map(|a| 1.0 / a).collect())?;
    let nf = n as f64;
    let (mut identity, mut descent, mut bound) = (f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for (x, u) in states {
        h.check_domain(u)?;
        let cache = problem.residual(x)?;
        let g = problem.gradient_from_residual(&cache)?;
        let mut t = x.clone();
        let mut mean_delta = 0.0;
        let mut mean_distance = 0.0;
        for i in 0..n {
            let r = p.range(i);
            let next = bregman_prox(h.reference(i), &x[r.clone()], &g[r.clone()], alphas[i], problem.regularizer().kind(i))?;
            mean_delta += problem.block_delta(x, &cache, i, &next)? / nf;
            let mut moved = x.clone();
            moved[r.clone()].copy_from_slice(&next);
            mean_distance += h.distance(u, &moved)? / nf;
            t[r].copy_from_slice(&next);
        }
        let dux = h.distance(u, x)?;
        let dut = h.distance(u, &t)?;
        identity = identity.max((mean_distance - ((nf - 1.0) / nf * dux + dut / nf)).abs());
        descent = descent.max(mean_delta + claim * h.distance(&t, x)? / nf);
        let gap = problem.composite_objective(u)? - problem.composite_objective(x)?;
        bound = bound.max(mean_delta - (gap + prime.distance(u, x)? - prime.distance(u, &t)?) / nf);
    }
    let family = problem.family();
    let oracle = "exact enumeration of all block draws";
    Ok(ExpectationReports {
        identity: CheckReport::new(format!("expectation-identity/{family}"), oracle, states.len(), 0, identity, 1e-9),
        descent: CheckReport::new(format!("expected-descent/{family}"), oracle, states.len(), 0, descent, 1e-9),
        bound: CheckReport::new(format!("expected-bound/{family}"), oracle, states.len(), 0, bound, 1e-9),
    })
}
