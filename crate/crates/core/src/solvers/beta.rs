use crate::{Error, Result};

use super::BetaSchedule;

/// `beta_k = gamma / (k + gamma)`.
pub fn beta_closed_form(k: u64, gamma: f64) -> f64 {
    gamma / (k as f64 + gamma)
}

/// Root in `(0, 1)` of `(1 - b) / b^gamma = 1 / beta_k^gamma`.
///
/// Solved as `b^gamma = (1 - b) beta_k^gamma`, whose left side increases and
/// right side decreases in `b`, by bisection down to adjacent floats.
pub fn beta_equality(beta_k: f64, gamma: f64) -> Result<f64> {
    if !(beta_k > 0.0 && beta_k <= 1.0) {
        return Err(Error::invalid(format!("beta must lie in (0, 1], got {beta_k}")));
    }
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::invalid(format!("gamma must be positive, got {gamma}")));
    }
    let target = beta_k.powf(gamma);
    let psi = |b: f64| b.powf(gamma) - (1.0 - b) * target;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if psi(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Successive `beta_k` values starting from `beta_0 = 1`.
#[derive(Clone, Debug)]
pub(crate) struct BetaSequence {
    schedule: BetaSchedule,
    gamma: f64,
    k: u64,
    beta: f64,
}

impl BetaSequence {
    pub(crate) fn new(schedule: BetaSchedule, gamma: f64) -> Self {
        Self {
            schedule,
            gamma,
            k: 0,
            beta: 1.0,
        }
    }

    pub(crate) fn current(&self) -> f64 {
        self.beta
    }

    pub(crate) fn advance(&mut self) -> Result<f64> {
        self.k += 1;
        self.beta = match self.schedule {
            BetaSchedule::ClosedForm => beta_closed_form(self.k, self.gamma),
            BetaSchedule::EqualityRecurrence => beta_equality(self.beta, self.gamma)?,
        };
        Ok(self.beta)
    }
}
