use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::ReferenceFunction;
use crate::{Error, Result};

/// Per-block regularizer `r_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegularizerKind {
    Zero,
    /// Indicator of the nonnegative orthant.
    NonnegIndicator,
}

impl RegularizerKind {
    pub fn value(self, u: &[f64]) -> f64 {
        match self {
            RegularizerKind::Zero => 0.0,
            RegularizerKind::NonnegIndicator => {
                if u.iter().all(|&t| t >= 0.0) {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
        }
    }
}

impl fmt::Display for RegularizerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RegularizerKind::Zero => "zero",
            RegularizerKind::NonnegIndicator => "nonneg",
        })
    }
}

impl FromStr for RegularizerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zero" | "none" => Ok(RegularizerKind::Zero),
            "nonneg" | "nonnegative" => Ok(RegularizerKind::NonnegIndicator),
            other => Err(Error::invalid(format!("unknown regularizer '{other}'"))),
        }
    }
}

/// Block-separable regularizer `r(x) = sum_i r_i(x_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Regularizer {
    kinds: Vec<RegularizerKind>,
}

impl Regularizer {
    pub fn new(kinds: Vec<RegularizerKind>) -> Self {
        Self { kinds }
    }

    pub fn uniform(kind: RegularizerKind, n_blocks: usize) -> Self {
        Self {
            kinds: vec![kind; n_blocks],
        }
    }

    pub fn kind(&self, block: usize) -> RegularizerKind {
        self.kinds[block]
    }

    pub fn kinds(&self) -> &[RegularizerKind] {
        &self.kinds
    }

    pub fn n_blocks(&self) -> usize {
        self.kinds.len()
    }
}

fn check_prox_args(h: ReferenceFunction, x: &[f64], g: &[f64], alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::invalid(format!("stepsize must be positive, got {alpha}")));
    }
    if g.len() != x.len() {
        return Err(Error::Dimension {
            expected: x.len(),
            got: g.len(),
        });
    }
    if let Some(i) = g.iter().position(|v| !v.is_finite()) {
        return Err(Error::Domain {
            what: "gradient",
            index: i,
            value: g[i],
        });
    }
    h.check_domain(x)
}

/// Closed-form Bregman proximal map
/// `argmin_u <g, u - x> + D_h(u, x) / alpha + r(u)`, written into `out`.
pub fn bregman_prox_into(
    h: ReferenceFunction,
    x: &[f64],
    g: &[f64],
    alpha: f64,
    reg: RegularizerKind,
    out: &mut [f64],
) -> Result<()> {
    check_prox_args(h, x, g, alpha)?;
    if out.len() != x.len() {
        return Err(Error::Dimension {
            expected: x.len(),
            got: out.len(),
        });
    }
    for (j, ((o, &xj), &gj)) in out.iter_mut().zip(x).zip(g).enumerate() {
        *o = match h {
            ReferenceFunction::SquaredEuclidean => {
                let step = xj - alpha * gj;
                match reg {
                    RegularizerKind::Zero => step,
                    RegularizerKind::NonnegIndicator => step.max(0.0),
                }
            }
            // The positive orthant constraint is inactive on entropy domains.
            ReferenceFunction::ShannonEntropy => xj * (-alpha * gj).exp(),
            ReferenceFunction::BurgEntropy => {
                let denominator = 1.0 / xj + alpha * gj;
                if denominator <= 0.0 {
                    return Err(Error::UnboundedSubproblem { index: j, denominator });
                }
                1.0 / denominator
            }
        };
        if !h.in_domain(*o) {
            return Err(Error::Domain {
                what: "prox output",
                index: j,
                value: *o,
            });
        }
    }
    Ok(())
}

pub fn bregman_prox(
    h: ReferenceFunction,
    x: &[f64],
    g: &[f64],
    alpha: f64,
    reg: RegularizerKind,
) -> Result<Vec<f64>> {
    let mut out = vec![0.0; x.len()];
    bregman_prox_into(h, x, g, alpha, reg, &mut out)?;
    Ok(out)
}

/// Bisection oracle for the same subproblem; each separable 1-D problem is
/// solved on its stationarity condition `g + (h'(u) - h'(x)) / alpha = 0`
/// until the bracket cannot shrink further. Only meant for validation.
pub fn bregman_prox_numeric(
    h: ReferenceFunction,
    x: &[f64],
    g: &[f64],
    alpha: f64,
    reg: RegularizerKind,
) -> Result<Vec<f64>> {
    check_prox_args(h, x, g, alpha)?;
    x.iter()
        .zip(g)
        .enumerate()
        .map(|(j, (&xj, &gj))| prox_scalar_bisect(h, xj, gj, alpha, reg).ok_or(Error::UnboundedSubproblem {
            index: j,
            denominator: 1.0 / xj + alpha * gj,
        }))
        .collect()
}

fn prox_scalar_bisect(h: ReferenceFunction, x: f64, g: f64, alpha: f64, reg: RegularizerKind) -> Option<f64> {
    let hx = h.grad_scalar(x);
    let slope = |u: f64| g + (h.grad_scalar(u) - hx) / alpha;
    const MAX_EXPANSIONS: usize = 2200;

    let (mut lo, mut hi) = match h {
        ReferenceFunction::SquaredEuclidean => {
            let nonneg = reg == RegularizerKind::NonnegIndicator;
            if nonneg && slope(0.0) >= 0.0 {
                return Some(0.0);
            }
            let mut width = 1.0;
            let mut lo = if nonneg { 0.0 } else { x - width };
            let mut hi = if nonneg { x.max(0.0) + width } else { x + width };
            let mut n = 0;
            while slope(lo) > 0.0 || slope(hi) < 0.0 {
                n += 1;
                if n > MAX_EXPANSIONS || !width.is_finite() {
                    return None;
                }
                width *= 2.0;
                if !nonneg && slope(lo) > 0.0 {
                    lo = x - width;
                }
                if slope(hi) < 0.0 {
                    hi = x.max(0.0) + width;
                }
            }
            (lo, hi)
        }
        ReferenceFunction::ShannonEntropy | ReferenceFunction::BurgEntropy => {
            let mut lo = x;
            let mut n = 0;
            while slope(lo) > 0.0 {
                n += 1;
                lo *= 0.5;
                if n > MAX_EXPANSIONS || lo == 0.0 {
                    return None;
                }
            }
            let mut hi = x;
            n = 0;
            while slope(hi) < 0.0 {
                n += 1;
                hi *= 2.0;
                if n > MAX_EXPANSIONS || !hi.is_finite() {
                    return None;
                }
            }
            (lo, hi)
        }
    };

    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let s = slope(mid);
        if s == 0.0 {
            return Some(mid);
        }
        if s < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}
