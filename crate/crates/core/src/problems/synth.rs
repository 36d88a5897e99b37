use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Family, Matrix, ProblemInstance};
use crate::geometry::BlockPartition;
use crate::{Error, Result};

/// Seeded synthetic instance with scalar blocks.
///
/// KL families: `A` (M x N) and `b` (M) i.i.d. uniform on `[0, 1)`, drawn
/// row by row. Quadratic: an N x N strictly diagonally dominant `Q` with
/// off-diagonal entries uniform on `[-1, 1)` and `b` uniform on `[0, 1)`;
/// `m` is ignored. Diagonal dominance makes `2 diag(Q) - Q` positive
/// definite, so the full-gradient step `1/Q_jj` is a descent step too.
pub fn synth_instance(family: Family, m: usize, n: usize, seed: u64) -> Result<ProblemInstance> {
    if m == 0 || n == 0 {
        return Err(Error::invalid("M and N must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match family {
        Family::PoissonInverse | Family::RelativeEntropyRegression => {
            let mut a = Matrix::zeros(m, n);
            for i in 0..m {
                for j in 0..n {
                    a.set(i, j, rng.random::<f64>());
                }
            }
            let b: Vec<f64> = (0..m).map(|_| rng.random::<f64>()).collect();
            ProblemInstance::new(family, a, b, BlockPartition::scalar(n)?)
        }
        Family::Quadratic => {
            let mut q = Matrix::zeros(n, n);
            for i in 0..n {
                for j in 0..i {
                    let v = rng.random_range(-1.0..1.0);
                    q.set(i, j, v);
                    q.set(j, i, v);
                }
            }
            for i in 0..n {
                let off: f64 = (0..n).filter(|&j| j != i).map(|j| q.get(i, j).abs()).sum();
                q.set(i, i, off + 0.5 + rng.random::<f64>());
            }
            let b: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
            ProblemInstance::new(family, q, b, BlockPartition::scalar(n)?)
        }
    }
}
