//! Composite objectives `F(x) = f(x) + r(x)` used by the solvers.
//!
//! * Poisson inverse problem: `f(x) = KL(b, Ax)` with Burg's entropy as reference.
//! * Relative-entropy regression: `f(x) = KL(Ax, b)` with Shannon's entropy.
//! * Quadratic: `f(x) = x'Qx/2 - b'x` with the Euclidean reference. This family
//!   is not one of the two applications; it exists because its relative
//!   strong-convexity constant can be computed exactly.
//!
//! The KL families are constrained to the nonnegative orthant.

mod cache;
mod io;
mod matrix;
mod synth;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use cache::ResidualCache;
pub use io::{read_instance, write_instance};
pub use matrix::Matrix;
pub use synth::synth_instance;

use crate::geometry::{BlockPartition, ReferenceFunction, Regularizer, RegularizerKind, WeightedReference};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    PoissonInverse,
    RelativeEntropyRegression,
    Quadratic,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::PoissonInverse => "poisson",
            Family::RelativeEntropyRegression => "relent",
            Family::Quadratic => "quadratic",
        }
    }

    pub fn default_reference(self) -> ReferenceFunction {
        match self {
            Family::PoissonInverse => ReferenceFunction::BurgEntropy,
            Family::RelativeEntropyRegression => ReferenceFunction::ShannonEntropy,
            Family::Quadratic => ReferenceFunction::SquaredEuclidean,
        }
    }

    pub fn default_regularizer(self) -> RegularizerKind {
        match self {
            Family::Quadratic => RegularizerKind::Zero,
            _ => RegularizerKind::NonnegIndicator,
        }
    }

    pub fn is_kl(self) -> bool {
        self != Family::Quadratic
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "poisson" | "poisson-inverse" => Ok(Family::PoissonInverse),
            "relent" | "relative-entropy" | "relative-entropy-regression" => {
                Ok(Family::RelativeEntropyRegression)
            }
            "quadratic" => Ok(Family::Quadratic),
            other => Err(Error::invalid(format!("unknown problem family '{other}'"))),
        }
    }
}

/// Data, block structure, regularizer and weighted reference of one problem.
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemInstance {
    family: Family,
    a: Matrix,
    b: Vec<f64>,
    regularizer: Regularizer,
    reference: WeightedReference,
}

impl ProblemInstance {
    /// Validates the data and attaches the family's reference functions,
    /// regularizer and smoothness constants.
    pub fn new(family: Family, a: Matrix, b: Vec<f64>, partition: BlockPartition) -> Result<Self> {
        validate(family, &a, &b)?;
        partition.check_len(a.cols())?;
        let weights = smoothness_for(family, &a, &b, &partition);
        Self::assemble(family, a, b, partition, weights)
    }

    /// Like [`ProblemInstance::new`] but with caller-supplied block weights.
    pub fn with_explicit_weights(
        family: Family,
        a: Matrix,
        b: Vec<f64>,
        partition: BlockPartition,
        weights: Vec<f64>,
    ) -> Result<Self> {
        validate(family, &a, &b)?;
        partition.check_len(a.cols())?;
        Self::assemble(family, a, b, partition, weights)
    }

    fn assemble(family: Family, a: Matrix, b: Vec<f64>, partition: BlockPartition, weights: Vec<f64>) -> Result<Self> {
        let n = partition.n_blocks();
        let reference = WeightedReference::uniform(partition, family.default_reference(), weights)?;
        Ok(Self {
            family,
            a,
            b,
            regularizer: Regularizer::uniform(family.default_regularizer(), n),
            reference,
        })
    }

    /// Scalar blocks.
    pub fn with_scalar_blocks(family: Family, a: Matrix, b: Vec<f64>) -> Result<Self> {
        let partition = BlockPartition::scalar(a.cols())?;
        Self::new(family, a, b, partition)
    }

    /// Same data with different block weights (e.g. deliberately wrong constants).
    pub fn with_weights(&self, weights: Vec<f64>) -> Result<Self> {
        Ok(Self {
            reference: self.reference.with_weights(weights)?,
            ..self.clone()
        })
    }

    pub fn with_regularizer(&self, regularizer: Regularizer) -> Result<Self> {
        if regularizer.n_blocks() != self.n_blocks() {
            return Err(Error::Dimension {
                expected: self.n_blocks(),
                got: regularizer.n_blocks(),
            });
        }
        Ok(Self {
            regularizer,
            ..self.clone()
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn matrix(&self) -> &Matrix {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn partition(&self) -> &BlockPartition {
        self.reference.partition()
    }

    pub fn regularizer(&self) -> &Regularizer {
        &self.regularizer
    }

    pub fn reference(&self) -> &WeightedReference {
        &self.reference
    }

    pub fn n_blocks(&self) -> usize {
        self.partition().n_blocks()
    }

    pub fn dim(&self) -> usize {
        self.a.cols()
    }

    /// The all-ones starting point, interior to every domain.
    pub fn default_start(&self) -> Vec<f64> {
        vec![1.0; self.dim()]
    }

    /// Block weights `L_i` recomputed from the data.
    pub fn smoothness_constants(&self) -> Vec<f64> {
        smoothness_for(self.family, &self.a, &self.b, self.partition())
    }

    pub fn residual(&self, x: &[f64]) -> Result<ResidualCache> {
        self.partition().check_len(x.len())?;
        Ok(ResidualCache::from_values(self.a.mul_vec(x)))
    }

    pub fn objective(&self, x: &[f64]) -> Result<f64> {
        self.reference.check_domain(x)?;
        let cache = self.residual(x)?;
        self.objective_from_residual(x, &cache)
    }

    /// `f(x)` from a residual consistent with `x`.
    pub fn objective_from_residual(&self, x: &[f64], cache: &ResidualCache) -> Result<f64> {
        let ax = cache.values();
        match self.family {
            Family::Quadratic => {
                let quad: f64 = x.iter().zip(ax).map(|(a, b)| a * b).sum();
                let lin: f64 = x.iter().zip(&self.b).map(|(a, b)| a * b).sum();
                Ok(0.5 * quad - lin)
            }
            Family::PoissonInverse => {
                let mut total = 0.0;
                for (i, (&v, &bi)) in ax.iter().zip(&self.b).enumerate() {
                    check_row(i, v)?;
                    total += if bi == 0.0 {
                        v
                    } else {
                        ReferenceFunction::ShannonEntropy.distance_scalar(bi, v)
                    };
                }
                Ok(total)
            }
            Family::RelativeEntropyRegression => {
                let mut total = 0.0;
                for (i, (&v, &bi)) in ax.iter().zip(&self.b).enumerate() {
                    check_row(i, v)?;
                    if bi == 0.0 {
                        return Err(Error::Domain {
                            what: "observation (KL(Ax, b) undefined for b_i = 0)",
                            index: i,
                            value: bi,
                        });
                    }
                    total += ReferenceFunction::ShannonEntropy.distance_scalar(v, bi);
                }
                Ok(total)
            }
        }
    }

    /// `f(x)` requiring only that `f` be defined at `x` (every `<a_i, x>`
    /// positive for the KL families), not that `x` lie in the reference domain.
    pub fn smooth_objective(&self, x: &[f64]) -> Result<f64> {
        if let Some(j) = x.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain {
                what: "iterate",
                index: j,
                value: x[j],
            });
        }
        let cache = self.residual(x)?;
        self.objective_from_residual(x, &cache)
    }

    /// Checks that `f` is defined where the residual is `ax(r)`.
    pub fn check_residual_with(&self, ax: impl Fn(usize) -> f64) -> Result<()> {
        let rows = self.a.rows();
        match self.family {
            Family::Quadratic => match (0..rows).find(|&r| !ax(r).is_finite()) {
                Some(r) => Err(Error::Domain {
                    what: "Qx",
                    index: r,
                    value: ax(r),
                }),
                None => Ok(()),
            },
            _ => (0..rows).try_for_each(|r| check_row(r, ax(r))),
        }
    }

    pub fn check_residual(&self, cache: &ResidualCache) -> Result<()> {
        let ax = cache.values();
        self.check_residual_with(|r| ax[r])
    }

    /// `F(x) = f(x) + r(x)`; infinite when a constraint is violated.
    pub fn composite_objective(&self, x: &[f64]) -> Result<f64> {
        let f = self.objective(x)?;
        let p = self.partition();
        let r: f64 = (0..self.n_blocks())
            .map(|i| self.regularizer.kind(i).value(&x[p.range(i)]))
            .sum();
        Ok(f + r)
    }

    /// Block gradient `grad_i f` evaluated where the residual is `ax(r)`.
    ///
    /// The closure form lets accelerated solvers supply `A y` implicitly
    /// (e.g. as `s * Au + Av`) without materializing `y`.
    pub fn partial_gradient_with(
        &self,
        ax: impl Fn(usize) -> f64,
        block: usize,
        out: &mut [f64],
    ) -> Result<()> {
        let range = self.partition().range(block);
        if out.len() != range.len() {
            return Err(Error::Dimension {
                expected: range.len(),
                got: out.len(),
            });
        }
        for (o, j) in out.iter_mut().zip(range) {
            let col = self.a.col(j);
            *o = match self.family {
                Family::Quadratic => ax(j) - self.b[j],
                Family::PoissonInverse => {
                    let mut s = 0.0;
                    for (r, (&a, &bi)) in col.iter().zip(&self.b).enumerate() {
                        if a != 0.0 {
                            let v = ax(r);
                            check_row(r, v)?;
                            s += a * (1.0 - bi / v);
                        }
                    }
                    s
                }
                Family::RelativeEntropyRegression => {
                    let mut s = 0.0;
                    for (r, (&a, &bi)) in col.iter().zip(&self.b).enumerate() {
                        if a != 0.0 {
                            let v = ax(r);
                            check_row(r, v)?;
                            s += a * (v / bi).ln();
                        }
                    }
                    s
                }
            };
        }
        Ok(())
    }

    pub fn partial_gradient(&self, cache: &ResidualCache, block: usize, out: &mut [f64]) -> Result<()> {
        let ax = cache.values();
        self.partial_gradient_with(|r| ax[r], block, out)
    }

    pub fn gradient_from_residual(&self, cache: &ResidualCache) -> Result<Vec<f64>> {
        let mut g = vec![0.0; self.dim()];
        for block in 0..self.n_blocks() {
            let range = self.partition().range(block);
            self.partial_gradient(cache, block, &mut g[range])?;
        }
        Ok(g)
    }

    pub fn full_gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.reference.check_domain(x)?;
        let cache = self.residual(x)?;
        self.gradient_from_residual(&cache)
    }

    /// `f(x') - f(x)` where `x'` equals `x` except on `block`, which becomes
    /// `new_block`. Computed from per-row increments without forming `f(x')`,
    /// so the difference does not suffer cancellation against `f(x)`.
    pub fn block_delta(&self, x: &[f64], cache: &ResidualCache, block: usize, new_block: &[f64]) -> Result<f64> {
        let range = self.partition().range(block);
        if new_block.len() != range.len() {
            return Err(Error::Dimension {
                expected: range.len(),
                got: new_block.len(),
            });
        }
        self.reference.reference(block).check_domain(new_block)?;
        let delta: Vec<f64> = new_block.iter().zip(&x[range.clone()]).map(|(n, o)| n - o).collect();
        let ax = cache.values();
        let row_step = |r: usize| -> f64 {
            range
                .clone()
                .zip(&delta)
                .map(|(j, &d)| self.a.get(r, j) * d)
                .sum()
        };
        match self.family {
            Family::Quadratic => {
                let mut total = 0.0;
                for (j, &dj) in range.clone().zip(&delta) {
                    total += dj * (ax[j] - self.b[j]);
                    for (k, &dk) in range.clone().zip(&delta) {
                        total += 0.5 * dj * self.a.get(j, k) * dk;
                    }
                }
                Ok(total)
            }
            Family::PoissonInverse => {
                let mut total = 0.0;
                for (r, (&v, &bi)) in ax.iter().zip(&self.b).enumerate() {
                    let d = row_step(r);
                    check_row(r, v + d)?;
                    total += d - if bi == 0.0 { 0.0 } else { bi * (d / v).ln_1p() };
                }
                Ok(total)
            }
            Family::RelativeEntropyRegression => {
                let mut total = 0.0;
                for (r, (&v, &bi)) in ax.iter().zip(&self.b).enumerate() {
                    let d = row_step(r);
                    check_row(r, v + d)?;
                    total += (v + d) * (d / v).ln_1p() + d * ((v / bi).ln() - 1.0);
                }
                Ok(total)
            }
        }
    }

    /// Max over samples and coordinates of `f''_j(x) - L_j h''_j(x_j)`, with
    /// `f''_j` from central second differences. Nonpositive (up to
    /// finite-difference noise) when the weights are valid smoothness constants.
    pub fn relative_smoothness_residual(&self, samples: &[Vec<f64>]) -> Result<f64> {
        let p = self.partition();
        let mut worst = f64::NEG_INFINITY;
        for x in samples {
            self.reference.check_domain(x)?;
            let cache = self.residual(x)?;
            for block in 0..self.n_blocks() {
                let range = p.range(block);
                let h = self.reference.reference(block);
                let weight = self.reference.weight(block);
                for j in range.clone() {
                    let step = 1e-4 * x[j].abs().max(if h == ReferenceFunction::SquaredEuclidean { 1.0 } else { 0.0 });
                    let mut shifted = x[range.clone()].to_vec();
                    let local = j - range.start;
                    shifted[local] = x[j] + step;
                    let up = self.block_delta(x, &cache, block, &shifted)?;
                    shifted[local] = x[j] - step;
                    let down = self.block_delta(x, &cache, block, &shifted)?;
                    let curvature = (up + down) / (step * step);
                    worst = worst.max(curvature - weight * h.hess_scalar(x[j]));
                }
            }
        }
        Ok(worst)
    }
}

fn check_row(index: usize, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "<a_i, x>",
            index,
            value,
        })
    }
}

fn validate(family: Family, a: &Matrix, b: &[f64]) -> Result<()> {
    if a.rows() == 0 || a.cols() == 0 {
        return Err(Error::invalid("data matrix must be nonempty"));
    }
    if b.len() != a.rows() {
        return Err(Error::Dimension {
            expected: a.rows(),
            got: b.len(),
        });
    }
    if a.iter().chain(b.iter().copied()).any(|v| !v.is_finite()) {
        return Err(Error::invalid("data must be finite"));
    }
    match family {
        Family::Quadratic => {
            let n = a.cols();
            if a.rows() != n {
                return Err(Error::invalid("quadratic family needs a square matrix"));
            }
            let scale = a.iter().fold(1.0f64, |m, v| m.max(v.abs()));
            for i in 0..n {
                for j in 0..i {
                    if (a.get(i, j) - a.get(j, i)).abs() > 1e-12 * scale {
                        return Err(Error::invalid(format!("Q is not symmetric at ({i}, {j})")));
                    }
                }
            }
            let eig = nalgebra::SymmetricEigen::new(a.to_nalgebra());
            let min = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
            if min < -1e-10 * scale {
                return Err(Error::invalid(format!("Q is not positive semidefinite (eigenvalue {min:e})")));
            }
        }
        Family::PoissonInverse | Family::RelativeEntropyRegression => {
            if a.iter().any(|v| v < 0.0) || b.iter().any(|&v| v < 0.0) {
                return Err(Error::invalid("A and b must be nonnegative"));
            }
            if let Some(i) = (0..a.rows()).find(|&i| (0..a.cols()).all(|j| a.get(i, j) == 0.0)) {
                return Err(Error::invalid(format!("row {i} of A has no positive entry")));
            }
            if let Some(j) = (0..a.cols()).find(|&j| a.col(j).iter().all(|&v| v == 0.0)) {
                return Err(Error::invalid(format!("column {j} of A has no positive entry")));
            }
            if family == Family::PoissonInverse && b.iter().all(|&v| v == 0.0) {
                return Err(Error::invalid("b must have a positive entry"));
            }
        }
    }
    Ok(())
}

fn smoothness_for(family: Family, a: &Matrix, b: &[f64], partition: &BlockPartition) -> Vec<f64> {
    (0..partition.n_blocks())
        .map(|block| {
            let range = partition.range(block);
            match family {
                Family::PoissonInverse => b.iter().sum(),
                Family::RelativeEntropyRegression => range
                    .map(|j| a.col(j).iter().sum::<f64>())
                    .fold(0.0, f64::max),
                Family::Quadratic => {
                    if range.len() == 1 {
                        a.get(range.start, range.start)
                    } else {
                        let sub = nalgebra::DMatrix::from_fn(range.len(), range.len(), |i, j| {
                            a.get(range.start + i, range.start + j)
                        });
                        nalgebra::SymmetricEigen::new(sub)
                            .eigenvalues
                            .iter()
                            .copied()
                            .fold(0.0, f64::max)
                    }
                }
            }
        })
        .collect()
}

#[cfg(test)]
mod tests;
