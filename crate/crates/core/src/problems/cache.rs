use super::ProblemInstance;
use crate::{Error, Result};

/// `A x` (or `Q x` for the quadratic family) for the current iterate, kept in
/// sync by rank-one column updates so that a coordinate step costs O(M).
#[derive(Clone, Debug, PartialEq)]
pub struct ResidualCache {
    ax: Vec<f64>,
}

impl ResidualCache {
    pub(crate) fn from_values(ax: Vec<f64>) -> Self {
        Self { ax }
    }

    pub fn values(&self) -> &[f64] {
        &self.ax
    }

    /// `ax += A[:, block] * delta`.
    pub fn apply_block_update(&mut self, problem: &ProblemInstance, block: usize, delta: &[f64]) {
        let range = problem.partition().range(block);
        for (j, &d) in range.zip(delta) {
            if d != 0.0 {
                for (v, &a) in self.ax.iter_mut().zip(problem.matrix().col(j)) {
                    *v += a * d;
                }
            }
        }
    }

    /// `self = s * u + v`, elementwise.
    pub fn set_combination(&mut self, s: f64, u: &ResidualCache, t: f64, v: &ResidualCache) {
        for ((o, &a), &b) in self.ax.iter_mut().zip(&u.ax).zip(&v.ax) {
            *o = s * a + t * b;
        }
    }

    /// Relative deviation from a fresh product; `StaleCache` above `tol`.
    pub fn verify(&self, problem: &ProblemInstance, x: &[f64], tol: f64) -> Result<f64> {
        let fresh = problem.matrix().mul_vec(x);
        let norm = fresh.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
        let deviation = fresh
            .iter()
            .zip(&self.ax)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
            / norm;
        if deviation > tol {
            return Err(Error::StaleCache { deviation });
        }
        Ok(deviation)
    }
}
