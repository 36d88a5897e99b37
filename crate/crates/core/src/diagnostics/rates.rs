use serde::{Deserialize, Serialize};

use super::CheckReport;
use crate::geometry::ReferenceFunction;
use crate::problems::{Family, ProblemInstance};
use crate::solvers::{run, run_rbcd, SolverConfig, SolverKind, SolverTrace};
use crate::{Error, Result};

/// Fewer seeds than this make a rate check inconclusive.
pub const MIN_RATE_SEEDS: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrongConvexityInfo {
    /// Relative strong convexity of `f` with respect to `H`, in `[0, 1]`.
    pub mu: f64,
    /// Euclidean strong convexity modulus of `H`.
    pub sigma: f64,
    pub theta_min: f64,
}

/// `mu = lambda_min(D^{-1/2} Q D^{-1/2})` with `D` the per-coordinate
/// weights, clamped to `[0, 1]`; `sigma = min L_i`.
pub fn estimate_mu_sigma(problem: &ProblemInstance) -> Result<StrongConvexityInfo> {
    let h = problem.reference();
    if problem.family() != Family::Quadratic || h.refs().iter().any(|&r| r != ReferenceFunction::SquaredEuclidean) {
        return Err(Error::UnsupportedFamily {
            operation: "strong convexity estimation",
            family: problem.family().name(),
        });
    }
    let d = h.coordinate_weights();
    let q = problem.matrix();
    let scaled = nalgebra::DMatrix::from_fn(q.rows(), q.cols(), |i, j| q.get(i, j) / (d[i] * d[j]).sqrt());
    let lambda_min = nalgebra::SymmetricEigen::new(scaled).eigenvalues.min();
    Ok(StrongConvexityInfo {
        mu: lambda_min.clamp(0.0, 1.0),
        sigma: h.weights().iter().copied().fold(f64::INFINITY, f64::min),
        theta_min: h.refs().iter().map(|r| r.theta()).fold(f64::INFINITY, f64::min),
    })
}

/// High-accuracy optimum used by the rate envelopes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateReference {
    pub f_star: f64,
    pub x_star: Vec<f64>,
}

/// Quadratic instances with nonsingular `Q` are solved directly; otherwise
/// RBCD runs for `epochs` epochs and its last iterate is taken.
pub fn reference_optimum(problem: &ProblemInstance, epochs: usize, seed: u64) -> Result<RateReference> {
    if problem.family() == Family::Quadratic {
        let q = problem.matrix().to_nalgebra();
        let b = nalgebra::DVector::from_column_slice(problem.b());
        if let Some(x) = q.lu().solve(&b) {
            let x_star: Vec<f64> = x.iter().copied().collect();
            if x_star.iter().all(|v| v.is_finite()) {
                return Ok(RateReference {
                    f_star: problem.objective(&x_star)?,
                    x_star,
                });
            }
        }
    }
    let trace = run_rbcd(problem, &SolverConfig::new(SolverKind::Rbcd).with_epochs(epochs).with_seed(seed))?;
    if trace.diverged {
        return Err(Error::invalid("reference run diverged"));
    }
    Ok(RateReference {
        f_star: problem.composite_objective(&trace.x)?,
        x_star: trace.x,
    })
}

/// `config` run once per seed.
pub fn run_seeds(problem: &ProblemInstance, config: &SolverConfig, seeds: &[u64]) -> Result<Vec<SolverTrace>> {
    seeds
        .iter()
        .map(|&s| run(problem, &config.clone().with_seed(s)))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RateKind {
    /// `E[F(x^k) - F*] <= n/(n+k) (F(x0) - F* + D_H(x*, x0))`.
    Sublinear,
    /// `E[F(x^k) - F*] <= rho^k (F(x0) - F* + D_H(x*, x0))`,
    /// `rho = 1 - (1+theta) mu / (n (1 + theta mu))`.
    Linear,
    /// `min_{l<=k} E[D_H(T(x^l), x^l)] <= n/(k+1) (F(x0) - F*)`.
    Stationarity,
    /// `E[f(x^K) - f*] <= (n gamma/(K - 1 + gamma))^gamma D_H(x*, x0)`.
    Accelerated,
}

impl RateKind {
    pub fn name(self) -> &'static str {
        match self {
            RateKind::Sublinear => "sublinear",
            RateKind::Linear => "linear",
            RateKind::Stationarity => "stationarity",
            RateKind::Accelerated => "accelerated",
        }
    }
}

/// Seed-averaged quantities against the envelope of `kind`. The reported
/// violation is the largest ratio of average to envelope and the tolerance
/// is `slack`. Points whose envelope sits below `1e-9 max(1, |F*|)` are
/// under roundoff and skipped. For objective envelopes `F*` is lowered to
/// the smallest value any trace reached. A diverged trace is an infinite
/// violation.
pub fn check_rate_bounds(
    traces: &[SolverTrace],
    problem: &ProblemInstance,
    info: Option<&StrongConvexityInfo>,
    kind: RateKind,
    reference: &RateReference,
    slack: f64,
) -> CheckReport {
    let family = problem.family();
    let name = format!("rate-{}/{family}", kind.name());
    let oracle = format!("average over {} seeds, reference optimum", traces.len());
    if traces.len() < MIN_RATE_SEEDS {
        return CheckReport::inconclusive(name, format!("{oracle}; needs {MIN_RATE_SEEDS} seeds"), traces.len());
    }
    if traces.iter().any(|t| t.diverged) {
        return CheckReport::new(name, oracle, traces.len(), 0, f64::INFINITY, slack);
    }
    let points = traces[0].records.len() + 1;
    if traces.iter().any(|t| t.records.len() + 1 != points) {
        return CheckReport::inconclusive(name, format!("{oracle}; traces differ in length"), traces.len());
    }
    let n = problem.n_blocks() as f64;
    let h = problem.reference();
    let x0 = traces[0].config.x0.clone().unwrap_or_else(|| problem.default_start());
    let f0 = traces[0].initial_objective;
    let lowest = traces
        .iter()
        .flat_map(|t| t.objectives())
        .map(|(_, f)| f)
        .fold(reference.f_star, f64::min);
    let f_star = match kind {
        RateKind::Stationarity => reference.f_star,
        _ => lowest,
    };
    let distance = match h.distance(&reference.x_star, &x0) {
        Ok(d) => d,
        Err(_) => return CheckReport::inconclusive(name, format!("{oracle}; optimum outside the domain"), traces.len()),
    };
    let rho = match (kind, info) {
        (RateKind::Linear, Some(i)) => 1.0 - (1.0 + i.theta_min) * i.mu / (n * (1.0 + i.theta_min * i.mu)),
        (RateKind::Linear, None) => {
            return CheckReport::inconclusive(name, format!("{oracle}; strong convexity unknown"), traces.len())
        }
        _ => 1.0,
    };
    let gamma = traces[0].config.gamma;
    let floor = 1e-9 * f_star.abs().max(1.0);

    let seeds = traces.len() as f64;
    let mut worst = f64::NEG_INFINITY;
    let mut checked = 0;
    let mut skipped = 0;
    let mut running_min = f64::INFINITY;
    for e in 0..points {
        let k = if e == 0 { 0.0 } else { traces[0].records[e - 1].iterations as f64 };
        let mean = |value: &dyn Fn(&SolverTrace) -> f64| traces.iter().map(value).sum::<f64>() / seeds;
        let objective = |t: &SolverTrace| if e == 0 { t.initial_objective } else { t.records[e - 1].objective };
        let (observed, envelope) = match kind {
            RateKind::Sublinear => (mean(&|t| objective(t) - f_star), n / (n + k) * (f0 - f_star + distance)),
            RateKind::Linear => (mean(&|t| objective(t) - f_star), rho.powf(k) * (f0 - f_star + distance)),
            RateKind::Stationarity => {
                let s = mean(&|t| if e == 0 { t.initial_stationarity } else { t.records[e - 1].stationarity });
                running_min = running_min.min(s);
                (running_min, n / (k + 1.0) * (f0 - f_star))
            }
            RateKind::Accelerated => {
                if k < 1.0 {
                    continue;
                }
                (
                    mean(&|t| objective(t) - f_star),
                    (n * gamma / (k - 1.0 + gamma)).powf(gamma) * distance,
                )
            }
        };
        if envelope < floor {
            skipped += 1;
            continue;
        }
        worst = worst.max(observed / envelope);
        checked += 1;
    }
    CheckReport::new(name, format!("{oracle}; ratio to envelope"), checked, skipped, worst, slack)
}
