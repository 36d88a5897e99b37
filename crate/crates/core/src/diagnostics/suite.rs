use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::descent::expectation_reports;
use super::sampling::domain_point;
use super::*;
use crate::geometry::{ReferenceFunction, RegularizerKind};
use crate::problems::{synth_instance, Family, ProblemInstance};
use crate::solvers::{SolverConfig, SolverKind};
use crate::{Error, Result};

/// Names accepted by [`run_suite`].
pub const CHECK_NAMES: [&str; 10] = [
    "prox",
    "gradient",
    "descent",
    "decrease",
    "expectation",
    "gti",
    "three-point",
    "rates",
    "stationarity",
    "all",
];

/// Knobs shared by the suites. `None` selects each suite's defaults.
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Restrict GTI to one reference kind.
    pub reference: Option<ReferenceFunction>,
    pub gamma: Option<f64>,
    /// Restrict problem-based suites to one family.
    pub family: Option<Family>,
    /// Number of run seeds for rate envelopes.
    pub seeds: usize,
    pub m: Option<usize>,
    pub n: Option<usize>,
    pub epochs: Option<usize>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            reference: None,
            gamma: None,
            family: None,
            seeds: MIN_RATE_SEEDS,
            m: None,
            n: None,
            epochs: None,
        }
    }
}

impl SuiteOptions {
    fn families(&self, default: &[Family]) -> Vec<Family> {
        match self.family {
            Some(f) => vec![f],
            None => default.to_vec(),
        }
    }

    fn instance(&self, family: Family, size: usize) -> Result<ProblemInstance> {
        synth_instance(family, self.m.unwrap_or(size), self.n.unwrap_or(size), self.seed)
    }
}

const ALL_FAMILIES: [Family; 3] = [Family::PoissonInverse, Family::RelativeEntropyRegression, Family::Quadratic];

/// Runs the named suite.
pub fn run_suite(name: &str, opts: &SuiteOptions) -> Result<Vec<CheckReport>> {
    match name {
        "prox" => Ok(prox(opts)),
        "gradient" => gradient(opts),
        "descent" => descent(opts),
        "decrease" => decrease(opts),
        "expectation" => expectation(opts),
        "gti" => Ok(gti(opts)),
        "three-point" => Ok(three_point(opts)),
        "rates" => rates(opts),
        "stationarity" => stationarity(opts),
        "all" => {
            let mut out = Vec::new();
            for suite in CHECK_NAMES.iter().filter(|&&s| s != "all") {
                out.extend(run_suite(suite, opts)?);
            }
            Ok(out)
        }
        other => Err(Error::invalid(format!(
            "unknown check '{other}' (expected one of {})",
            CHECK_NAMES.join(", ")
        ))),
    }
}

fn prox(opts: &SuiteOptions) -> Vec<CheckReport> {
    ReferenceFunction::ALL
        .iter()
        .map(|&h| check_prox_oracle(h, RegularizerKind::NonnegIndicator, 1000, opts.seed))
        .chain(std::iter::once(check_prox_oracle(
            ReferenceFunction::SquaredEuclidean,
            RegularizerKind::Zero,
            1000,
            opts.seed,
        )))
        .collect()
}

fn gradient(opts: &SuiteOptions) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for family in opts.families(&ALL_FAMILIES) {
        let problem = opts.instance(family, 20)?;
        let points = random_interior_points(&problem, 50, opts.seed);
        let tol = if family == Family::Quadratic { 1e-9 } else { 1e-4 };
        out.push(check_gradient_fd(&problem, &points, tol));
        let corrupted = check_gradient_fd_with(&problem, &points, tol, |x| {
            let mut g = problem.full_gradient(x)?;
            g[0] += 1.0;
            Ok(g)
        });
        out.push(corrupted.expecting_violation());
    }
    Ok(out)
}

fn divided_weights(problem: &ProblemInstance, factor: f64) -> Result<ProblemInstance> {
    problem.with_weights(problem.smoothness_constants().iter().map(|l| l / factor).collect())
}

fn descent(opts: &SuiteOptions) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for family in opts.families(&ALL_FAMILIES) {
        let problem = opts.instance(family, 50)?;
        out.push(check_descent_lemma(&problem, 500, 1e-8, opts.seed));
        let broken = divided_weights(&problem, 10.0)?;
        out.push(check_descent_lemma(&broken, 500, 1e-8, opts.seed).expecting_violation());
    }
    Ok(out)
}

fn decrease(opts: &SuiteOptions) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    let config = SolverConfig::new(SolverKind::Rbcd).with_seed(opts.seed);
    for family in opts.families(&ALL_FAMILIES) {
        let problem = opts.instance(family, 50)?;
        out.push(check_sufficient_decrease(&problem, &config, 500, 1e-8));
        // The all-ones start sits where the constants are loose; one dominant
        // coordinate makes them nearly tight.
        let mut start = vec![1e-3; problem.dim()];
        start[0] = 1e3;
        let broken = divided_weights(&problem, 10.0)?;
        let control = config.clone().with_x0(start);
        out.push(check_sufficient_decrease(&broken, &control, 500, 1e-8).expecting_violation());
    }
    Ok(out)
}

/// `count` random states `(x, u)` in the problem's domain.
pub fn random_states(problem: &ProblemInstance, count: usize, seed: u64) -> Vec<(Vec<f64>, Vec<f64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = problem.reference();
    let p = problem.partition();
    let mut draw = || {
        let mut v = vec![0.0; problem.dim()];
        for block in 0..p.n_blocks() {
            for vj in &mut v[p.range(block)] {
                *vj = domain_point(&mut rng, h.reference(block), 0.1, 10.0);
            }
        }
        v
    };
    (0..count).map(|_| (draw(), draw())).collect()
}

fn expectation(opts: &SuiteOptions) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for family in opts.families(&ALL_FAMILIES) {
        let problem = synth_instance(family, opts.m.unwrap_or(5), opts.n.unwrap_or(5), opts.seed)?;
        let states = random_states(&problem, 20, opts.seed);
        out.extend(check_expectation_identities(&problem, &states)?.into_vec());
        let inflated = expectation_reports(&problem, &states, 10.0)?;
        out.push(inflated.descent.expecting_violation());
    }
    Ok(out)
}

fn gti(opts: &SuiteOptions) -> Vec<CheckReport> {
    const SAMPLES: usize = 10_000;
    if let Some(h) = opts.reference {
        let gamma = opts.gamma.unwrap_or(h.gamma_uniform());
        return vec![check_gti(h, gamma, SAMPLES, opts.seed)];
    }
    use ReferenceFunction::*;
    vec![
        check_gti(SquaredEuclidean, 2.0, SAMPLES, opts.seed),
        check_gti(SquaredEuclidean, 2.5, SAMPLES, opts.seed).expecting_violation(),
        check_gti(ShannonEntropy, 1.0, SAMPLES, opts.seed),
        check_gti(ShannonEntropy, 1.5, SAMPLES, opts.seed).expecting_violation(),
        check_gti(BurgEntropy, 0.6, SAMPLES, opts.seed).expecting_violation(),
    ]
}

fn three_point(opts: &SuiteOptions) -> Vec<CheckReport> {
    use ReferenceFunction::*;
    vec![
        check_three_point(SquaredEuclidean, RegularizerKind::Zero, 1000, opts.seed),
        check_three_point(SquaredEuclidean, RegularizerKind::NonnegIndicator, 1000, opts.seed),
        check_three_point(ShannonEntropy, RegularizerKind::NonnegIndicator, 1000, opts.seed),
        check_three_point(BurgEntropy, RegularizerKind::NonnegIndicator, 1000, opts.seed),
    ]
}

fn rates(opts: &SuiteOptions) -> Result<Vec<CheckReport>> {
    let epochs = opts.epochs.unwrap_or(50);
    let seeds: Vec<u64> = (0..opts.seeds as u64).map(|s| opts.seed + s).collect();
    let mut out = Vec::new();
    for family in opts.families(&ALL_FAMILIES) {
        let problem = opts.instance(family, 100)?;
        let reference = reference_optimum(&problem, 10 * epochs, opts.seed)?;
        let rbcd = SolverConfig::new(SolverKind::Rbcd).with_epochs(epochs);
        match family {
            Family::PoissonInverse => {
                let traces = run_seeds(&problem, &rbcd, &seeds)?;
                let lower = RateReference {
                    f_star: 0.0,
                    ..reference
                };
                out.push(check_rate_bounds(&traces, &problem, None, RateKind::Stationarity, &lower, 1.5));
            }
            Family::RelativeEntropyRegression => {
                let traces = run_seeds(&problem, &rbcd, &seeds)?;
                out.push(check_rate_bounds(&traces, &problem, None, RateKind::Sublinear, &reference, 1.5));
            }
            Family::Quadratic => {
                let info = estimate_mu_sigma(&problem)?;
                let traces = run_seeds(&problem, &rbcd, &seeds)?;
                out.push(check_rate_bounds(&traces, &problem, Some(&info), RateKind::Linear, &reference, 1.5));
                let arbcd = SolverConfig::new(SolverKind::ArbcdEfficient)
                    .with_epochs(epochs)
                    .with_gamma(opts.gamma.unwrap_or(2.0));
                let traces = run_seeds(&problem, &arbcd, &seeds)?;
                out.push(check_rate_bounds(&traces, &problem, None, RateKind::Accelerated, &reference, 1.5));
            }
        }
    }
    Ok(out)
}

fn stationarity(opts: &SuiteOptions) -> Result<Vec<CheckReport>> {
    let problem = opts.instance(Family::Quadratic, 20)?;
    let config = SolverConfig::new(SolverKind::Rbcd)
        .with_epochs(opts.epochs.unwrap_or(300))
        .with_seed(opts.seed);
    check_stationarity_certificate(&problem, &config)
}
