use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::sampling::log_uniform;
use super::CheckReport;
use crate::geometry::{gti_ratio_sample, Domain, ReferenceFunction};

const DIM: usize = 2;
const THETAS: [f64; 10] = [1e-3, 1e-2, 0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9, 1.0];

/// One sampled ratio `D_h(u + theta (v - w), u) / D_h(v, w)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GtiSample {
    pub theta: f64,
    pub ratio: f64,
}

fn coordinate(rng: &mut ChaCha8Rng, h: ReferenceFunction) -> f64 {
    match h.domain() {
        Domain::StrictlyPositive => log_uniform(rng, 1e-3, 1e3),
        Domain::AllReals => rng.random_range(-10.0..10.0),
    }
}

fn vector(rng: &mut ChaCha8Rng, h: ReferenceFunction) -> Vec<f64> {
    (0..DIM).map(|_| coordinate(rng, h)).collect()
}

/// Triples in triangle-scaling form: `u = (1 - theta) x + theta w` with
/// `theta` in `(0, 1]`, so the translated point is `(1 - theta) x + theta v`.
/// With `invariance` set (Euclidean only) `u` is free and `theta` may be
/// negative.
pub fn sample_gti(h: ReferenceFunction, samples: usize, seed: u64, invariance: bool) -> Vec<GtiSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let invariance = invariance && h.domain() == Domain::AllReals;
    let mut out = Vec::with_capacity(samples);
    let mut attempts = 0;
    while out.len() < samples && attempts < 100 * samples.max(1) {
        attempts += 1;
        let mut theta = THETAS[rng.random_range(0..THETAS.len())];
        let (x, v, w) = (vector(&mut rng, h), vector(&mut rng, h), vector(&mut rng, h));
        let u: Vec<f64> = if invariance {
            if rng.random_bool(0.5) {
                theta = -theta;
            }
            x
        } else {
            x.iter().zip(&w).map(|(a, b)| (1.0 - theta) * a + theta * b).collect()
        };
        // Out-of-domain translations are resampled.
        if let Ok(ratio) = gti_ratio_sample(h, &u, &v, &w, theta) {
            out.push(GtiSample { theta, ratio });
        }
    }
    out
}

/// Asserts `ratio <= |theta|^gamma` on `samples` triples.
pub fn check_gti(h: ReferenceFunction, gamma: f64, samples: usize, seed: u64) -> CheckReport {
    let drawn = sample_gti(h, samples, seed, true);
    let worst = drawn
        .iter()
        .map(|s| s.ratio - s.theta.abs().powf(gamma))
        .fold(f64::NEG_INFINITY, f64::max);
    let form = if h.domain() == Domain::AllReals {
        "translation invariance, theta in [-1,1]"
    } else {
        "triangle scaling, theta in (0,1]"
    };
    CheckReport::new(
        format!("gti/{}/gamma={gamma}", h.name()),
        format!("sampled distances, {form}"),
        drawn.len(),
        0,
        worst,
        1e-9,
    )
}

/// Empirical infimum of `log(ratio) / log(theta)` over `theta` in `(0, 1)`.
pub fn estimate_gti_exponent(h: ReferenceFunction, samples: usize, seed: u64) -> f64 {
    sample_gti(h, samples, seed, false)
        .iter()
        .filter(|s| s.theta > 0.0 && s.theta < 1.0 && s.ratio > 0.0)
        .map(|s| s.ratio.ln() / s.theta.ln())
        .fold(f64::INFINITY, f64::min)
}
