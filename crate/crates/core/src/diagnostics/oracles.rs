use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::sampling::{domain_point, log_uniform};
use super::CheckReport;
use crate::geometry::{bregman_prox, bregman_prox_numeric, Domain, ReferenceFunction, RegularizerKind};
use crate::problems::ProblemInstance;
use crate::Result;

const FD_STEP: f64 = 1e-6;

/// `count` points inside the problem's domain: log-uniform on `[0.1, 10]`
/// per entropy coordinate, uniform on `[-2, 2]` per Euclidean one.
pub fn random_interior_points(problem: &ProblemInstance, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = problem.reference();
    let p = problem.partition();
    (0..count)
        .map(|_| {
            let mut x = vec![0.0; problem.dim()];
            for block in 0..p.n_blocks() {
                let kind = h.reference(block);
                for xj in &mut x[p.range(block)] {
                    *xj = match kind.domain() {
                        Domain::StrictlyPositive => log_uniform(&mut rng, 0.1, 10.0),
                        Domain::AllReals => rng.random_range(-2.0..2.0),
                    };
                }
            }
            x
        })
        .collect()
}

/// Closed-form prox against the bisection oracle on `samples` well-posed
/// random inputs; ill-posed Burg draws are resampled and counted as skipped.
pub fn check_prox_oracle(h: ReferenceFunction, reg: RegularizerKind, samples: usize, seed: u64) -> CheckReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    let mut done = 0;
    let mut skipped = 0;
    while done < samples && skipped < 10 * samples.max(1) {
        let x = [domain_point(&mut rng, h, 0.1, 10.0)];
        let g = [rng.random_range(-2.0..2.0)];
        let alpha = log_uniform(&mut rng, 0.01, 1.0);
        let (Ok(closed), Ok(numeric)) = (
            bregman_prox(h, &x, &g, alpha, reg),
            bregman_prox_numeric(h, &x, &g, alpha, reg),
        ) else {
            skipped += 1;
            continue;
        };
        let err = (closed[0] - numeric[0]).abs() / numeric[0].abs().max(1.0);
        worst = worst.max(err);
        done += 1;
    }
    CheckReport::new(
        format!("prox-oracle/{}", h.name()),
        "bisection on the stationarity condition",
        done,
        skipped,
        worst,
        1e-8,
    )
}

/// Central differences with step 1e-6 against `full_gradient`. The error is
/// `|g - fd| / max(|g|, 1)`; differences are taken through `block_delta`.
pub fn check_gradient_fd(problem: &ProblemInstance, points: &[Vec<f64>], tol: f64) -> CheckReport {
    check_gradient_fd_with(problem, points, tol, |x| problem.full_gradient(x))
}

/// As [`check_gradient_fd`], but the gradient under test comes from `gradient`.
pub fn check_gradient_fd_with(
    problem: &ProblemInstance,
    points: &[Vec<f64>],
    tol: f64,
    gradient: impl Fn(&[f64]) -> Result<Vec<f64>>,
) -> CheckReport {
    let mut worst: f64 = 0.0;
    let mut done = 0;
    let mut skipped = 0;
    'points: for x in points {
        let (Ok(g), Ok(cache)) = (gradient(x), problem.residual(x)) else {
            skipped += 1;
            continue;
        };
        let p = problem.partition();
        let mut errors = Vec::with_capacity(x.len());
        for block in 0..p.n_blocks() {
            let range = p.range(block);
            for j in range.clone() {
                let mut shifted = x[range.clone()].to_vec();
                let local = j - range.start;
                shifted[local] = x[j] + FD_STEP;
                let up = problem.block_delta(x, &cache, block, &shifted);
                shifted[local] = x[j] - FD_STEP;
                let down = problem.block_delta(x, &cache, block, &shifted);
                let (Ok(up), Ok(down)) = (up, down) else {
                    skipped += 1;
                    continue 'points;
                };
                let fd = (up - down) / (2.0 * FD_STEP);
                errors.push((g[j] - fd).abs() / g[j].abs().max(1.0));
            }
        }
        worst = errors.into_iter().fold(worst, f64::max);
        done += 1;
    }
    CheckReport::new(
        format!("gradient-fd/{}", problem.family()),
        "central differences, step 1e-6",
        done,
        skipped,
        worst,
        tol,
    )
}

/// Three-point inequality for `x+ = prox(x, g, alpha)`:
/// `phi(u) + D(u, x) >= phi(x+) + D(x+, x) + D(u, x+)` with
/// `phi = alpha (<g, .> + r)`. Trial 0 takes `u = x+`.
pub fn check_three_point(h: ReferenceFunction, reg: RegularizerKind, trials: usize, seed: u64) -> CheckReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = 3;
    let mut worst = f64::NEG_INFINITY;
    let mut done = 0;
    let mut skipped = 0;
    for trial in 0..trials {
        let x: Vec<f64> = (0..dim).map(|_| domain_point(&mut rng, h, 0.1, 10.0)).collect();
        let g: Vec<f64> = (0..dim).map(|_| rng.random_range(-2.0..2.0)).collect();
        let alpha = log_uniform(&mut rng, 0.01, 1.0);
        let Ok(next) = bregman_prox(h, &x, &g, alpha, reg) else {
            skipped += 1;
            continue;
        };
        let u: Vec<f64> = if trial == 0 {
            next.clone()
        } else {
            (0..dim)
                .map(|_| match (h.domain(), reg) {
                    (Domain::AllReals, RegularizerKind::NonnegIndicator) => rng.random_range(0.0..10.0),
                    _ => domain_point(&mut rng, h, 0.1, 10.0),
                })
                .collect()
        };
        let phi = |v: &[f64]| alpha * (g.iter().zip(v).map(|(a, b)| a * b).sum::<f64>() + reg.value(v));
        let (Ok(dux), Ok(dnx), Ok(dun)) = (h.distance(&u, &x), h.distance(&next, &x), h.distance(&u, &next)) else {
            skipped += 1;
            continue;
        };
        let violation = (phi(&next) + dnx + dun) - (phi(&u) + dux);
        worst = worst.max(violation);
        done += 1;
    }
    CheckReport::new(
        format!("three-point/{}", h.name()),
        "closed-form prox, direct evaluation",
        done,
        skipped,
        worst,
        1e-8,
    )
}
