use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    AllReals,
    StrictlyPositive,
}

/// Separable Legendre reference function `h(x) = sum_j phi(x_j)`.
///
/// | kind             | `phi(t)`       | domain   | theta | gamma |
/// |------------------|----------------|----------|-------|-------|
/// | SquaredEuclidean | `t^2 / 2`      | reals    | 1     | 2     |
/// | ShannonEntropy   | `t log t`      | `t > 0`  | 0     | 1     |
/// | BurgEntropy      | `-log t`       | `t > 0`  | 0     | 0     |
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReferenceFunction {
    SquaredEuclidean,
    ShannonEntropy,
    BurgEntropy,
}

impl ReferenceFunction {
    pub const ALL: [ReferenceFunction; 3] = [
        ReferenceFunction::SquaredEuclidean,
        ReferenceFunction::ShannonEntropy,
        ReferenceFunction::BurgEntropy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ReferenceFunction::SquaredEuclidean => "euclidean",
            ReferenceFunction::ShannonEntropy => "shannon",
            ReferenceFunction::BurgEntropy => "burg",
        }
    }

    pub fn domain(self) -> Domain {
        match self {
            ReferenceFunction::SquaredEuclidean => Domain::AllReals,
            _ => Domain::StrictlyPositive,
        }
    }

    /// Symmetric coefficient: a lower bound on `D(x,y) / D(y,x)`.
    ///
    /// Shannon's true infimum is 0 (the ratio is unbounded below as one
    /// argument approaches the boundary), so 0 is the safe catalog value.
    pub fn theta(self) -> f64 {
        match self {
            ReferenceFunction::SquaredEuclidean => 1.0,
            ReferenceFunction::ShannonEntropy | ReferenceFunction::BurgEntropy => 0.0,
        }
    }

    /// Uniform generalized-translation-invariance exponent.
    pub fn gamma_uniform(self) -> f64 {
        match self {
            ReferenceFunction::SquaredEuclidean => 2.0,
            ReferenceFunction::ShannonEntropy => 1.0,
            ReferenceFunction::BurgEntropy => 0.0,
        }
    }

    pub fn in_domain(self, t: f64) -> bool {
        match self.domain() {
            Domain::AllReals => t.is_finite(),
            Domain::StrictlyPositive => t > 0.0 && t.is_finite(),
        }
    }

    pub fn check_domain(self, x: &[f64]) -> Result<()> {
        match x.iter().position(|&t| !self.in_domain(t)) {
            None => Ok(()),
            Some(index) => Err(Error::Domain {
                what: self.name(),
                index,
                value: x[index],
            }),
        }
    }

    pub fn value_scalar(self, t: f64) -> f64 {
        match self {
            ReferenceFunction::SquaredEuclidean => 0.5 * t * t,
            ReferenceFunction::ShannonEntropy => t * t.ln(),
            ReferenceFunction::BurgEntropy => -t.ln(),
        }
    }

    pub fn grad_scalar(self, t: f64) -> f64 {
        match self {
            ReferenceFunction::SquaredEuclidean => t,
            ReferenceFunction::ShannonEntropy => t.ln() + 1.0,
            ReferenceFunction::BurgEntropy => -1.0 / t,
        }
    }

    pub fn hess_scalar(self, t: f64) -> f64 {
        match self {
            ReferenceFunction::SquaredEuclidean => 1.0,
            ReferenceFunction::ShannonEntropy => 1.0 / t,
            ReferenceFunction::BurgEntropy => 1.0 / (t * t),
        }
    }

    /// `D(u, x)` for scalars, written in ratio form so that `D(x, x)` is exactly 0.
    /// Arguments are assumed to be in the domain.
    pub fn distance_scalar(self, u: f64, x: f64) -> f64 {
        match self {
            ReferenceFunction::SquaredEuclidean => {
                let d = u - x;
                0.5 * d * d
            }
            ReferenceFunction::ShannonEntropy => {
                // x * ((1 + t) log(1 + t) - t), t = u/x - 1
                let t = (u - x) / x;
                let d = x * ((1.0 + t) * t.ln_1p() - t);
                d.max(0.0)
            }
            ReferenceFunction::BurgEntropy => {
                // t - log(1 + t), t = u/x - 1
                let t = (u - x) / x;
                (t - t.ln_1p()).max(0.0)
            }
        }
    }

    pub fn value(self, x: &[f64]) -> Result<f64> {
        self.check_domain(x)?;
        Ok(x.iter().map(|&t| self.value_scalar(t)).sum())
    }

    /// Bregman distance `D_h(u, x) = h(u) - h(x) - <grad h(x), u - x>`.
    pub fn distance(self, u: &[f64], x: &[f64]) -> Result<f64> {
        if u.len() != x.len() {
            return Err(Error::Dimension {
                expected: x.len(),
                got: u.len(),
            });
        }
        self.check_domain(u)?;
        self.check_domain(x)?;
        Ok(self.distance_unchecked(u, x))
    }

    pub(crate) fn distance_unchecked(self, u: &[f64], x: &[f64]) -> f64 {
        u.iter()
            .zip(x)
            .map(|(&a, &b)| self.distance_scalar(a, b))
            .sum()
    }
}

impl fmt::Display for ReferenceFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ReferenceFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "euclidean" | "squared-euclidean" => Ok(ReferenceFunction::SquaredEuclidean),
            "shannon" | "kl" | "entropy" => Ok(ReferenceFunction::ShannonEntropy),
            "burg" | "is" => Ok(ReferenceFunction::BurgEntropy),
            other => Err(Error::invalid(format!("unknown reference function '{other}'"))),
        }
    }
}
