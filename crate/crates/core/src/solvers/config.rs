use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::problems::ProblemInstance;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverKind {
    Rbcd,
    Arbcd,
    /// Change-of-variables form of ARBCD with `O(N_i)` block work.
    ArbcdEfficient,
    Bpg,
    Abpg,
}

impl SolverKind {
    pub const ALL: [SolverKind; 5] = [
        SolverKind::Rbcd,
        SolverKind::Arbcd,
        SolverKind::ArbcdEfficient,
        SolverKind::Bpg,
        SolverKind::Abpg,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SolverKind::Rbcd => "rbcd",
            SolverKind::Arbcd => "arbcd",
            SolverKind::ArbcdEfficient => "arbcd-efficient",
            SolverKind::Bpg => "bpg",
            SolverKind::Abpg => "abpg",
        }
    }

    pub fn is_accelerated(self) -> bool {
        matches!(self, SolverKind::Arbcd | SolverKind::ArbcdEfficient | SolverKind::Abpg)
    }

    /// Coordinate methods draw one block per iteration.
    pub fn is_coordinate(self) -> bool {
        matches!(self, SolverKind::Rbcd | SolverKind::Arbcd | SolverKind::ArbcdEfficient)
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "rbcd" => Ok(SolverKind::Rbcd),
            "arbcd" => Ok(SolverKind::Arbcd),
            "arbcd-efficient" | "arbcd-eff" => Ok(SolverKind::ArbcdEfficient),
            "bpg" => Ok(SolverKind::Bpg),
            "abpg" => Ok(SolverKind::Abpg),
            other => Err(Error::invalid(format!("unknown solver '{other}'"))),
        }
    }
}

/// How the momentum weight `beta_k` evolves.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BetaSchedule {
    /// `beta_k = gamma / (k + gamma)`.
    #[default]
    ClosedForm,
    /// `(1 - beta_{k+1}) / beta_{k+1}^gamma = 1 / beta_k^gamma`, solved numerically.
    EqualityRecurrence,
}

impl fmt::Display for BetaSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BetaSchedule::ClosedForm => "closed-form",
            BetaSchedule::EqualityRecurrence => "equality",
        })
    }
}

impl FromStr for BetaSchedule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed-form" | "closed" => Ok(BetaSchedule::ClosedForm),
            "equality" | "equality-recurrence" => Ok(BetaSchedule::EqualityRecurrence),
            other => Err(Error::invalid(format!("unknown beta schedule '{other}'"))),
        }
    }
}

/// Per-block stepsizes for RBCD and BPG.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepsizeRule {
    /// `alpha_i = (1 + theta_i) / (2 L_i)`.
    #[default]
    Standard,
    Custom(Vec<f64>),
}

impl StepsizeRule {
    pub fn resolve(&self, problem: &ProblemInstance) -> Result<Vec<f64>> {
        let h = problem.reference();
        match self {
            StepsizeRule::Standard => Ok((0..problem.n_blocks())
                .map(|i| (1.0 + h.reference(i).theta()) / (2.0 * h.weight(i)))
                .collect()),
            StepsizeRule::Custom(alphas) => {
                if alphas.len() != problem.n_blocks() {
                    return Err(Error::Dimension {
                        expected: problem.n_blocks(),
                        got: alphas.len(),
                    });
                }
                if let Some(a) = alphas.iter().find(|a| !(**a > 0.0 && a.is_finite())) {
                    return Err(Error::invalid(format!("stepsizes must be positive, got {a}")));
                }
                Ok(alphas.clone())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub solver: SolverKind,
    /// GTI exponent used by the accelerated solvers.
    pub gamma: f64,
    pub beta_schedule: BetaSchedule,
    pub epochs: usize,
    pub seed: u64,
    pub stepsize: StepsizeRule,
    /// Starting point; the all-ones vector when absent.
    pub x0: Option<Vec<f64>>,
}

impl SolverConfig {
    pub fn new(solver: SolverKind) -> Self {
        Self {
            solver,
            gamma: 2.0,
            beta_schedule: BetaSchedule::ClosedForm,
            epochs: 100,
            seed: 0,
            stepsize: StepsizeRule::Standard,
            x0: None,
        }
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn with_beta_schedule(mut self, schedule: BetaSchedule) -> Self {
        self.beta_schedule = schedule;
        self
    }

    pub fn with_epochs(mut self, epochs: usize) -> Self {
        self.epochs = epochs;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_stepsize(mut self, stepsize: StepsizeRule) -> Self {
        self.stepsize = stepsize;
        self
    }

    pub fn with_x0(mut self, x0: Vec<f64>) -> Self {
        self.x0 = Some(x0);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.epochs == 0 {
            return Err(Error::invalid("epochs must be at least 1"));
        }
        if self.solver.is_accelerated() && !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(Error::invalid(format!("gamma must be positive, got {}", self.gamma)));
        }
        Ok(())
    }

    /// Validated starting point for `problem`.
    pub fn start(&self, problem: &ProblemInstance) -> Result<Vec<f64>> {
        self.validate()?;
        let x0 = self.x0.clone().unwrap_or_else(|| problem.default_start());
        problem.reference().check_domain(&x0)?;
        let f0 = problem.composite_objective(&x0)?;
        if !f0.is_finite() {
            return Err(Error::invalid("starting point is infeasible"));
        }
        Ok(x0)
    }
}
