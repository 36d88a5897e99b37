use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::geometry::{Domain, ReferenceFunction};

/// `10^U[log10 lo, log10 hi)`.
pub(crate) fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    10f64.powf(rng.random_range(lo.log10()..hi.log10()))
}

/// A point in `h`'s domain: log-uniform on `[lo, hi]` for entropies,
/// uniform on `[-hi, hi]` for the Euclidean kind.
pub(crate) fn domain_point(rng: &mut ChaCha8Rng, h: ReferenceFunction, lo: f64, hi: f64) -> f64 {
    match h.domain() {
        Domain::StrictlyPositive => log_uniform(rng, lo, hi),
        Domain::AllReals => rng.random_range(-hi..hi),
    }
}
