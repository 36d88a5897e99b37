//! JSON-in, JSON-out bindings for the static page in `www/`.
//!
//! The `*_json` functions hold the logic and run natively; the exported
//! wrappers only convert errors for JavaScript.

use rbcd_core::diagnostics::{estimate_gti_exponent, sample_gti};
use rbcd_core::geometry::{bregman_prox, ReferenceFunction, RegularizerKind};
use rbcd_core::problems::{synth_instance, Family};
use rbcd_core::solvers::{run, SolverConfig, SolverKind};
use serde::Serialize;
use wasm_bindgen::prelude::*;

#[derive(Serialize)]
struct Curve {
    solver: String,
    objective: Vec<f64>,
    stationarity: Vec<f64>,
    diverged: bool,
}

#[derive(Serialize)]
struct ProxPoint {
    g: f64,
    /// `None` where the Burg subproblem is unbounded.
    prox: Option<f64>,
}

#[derive(Serialize)]
struct GtiScatter {
    samples: Vec<(f64, f64)>,
    exponent: f64,
}

fn reference(name: &str) -> Result<ReferenceFunction, String> {
    ReferenceFunction::ALL
        .into_iter()
        .find(|r| r.name() == name)
        .ok_or_else(|| format!("unknown reference '{name}'"))
}

fn to_json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

/// Objective and stationarity per epoch for RBCD, ARBCD, BPG and ABPG on
/// one synthetic instance. Infinite values (divergence) become `null`.
pub fn solver_curves_json(problem: &str, m: usize, n: usize, epochs: usize, gamma: f64, seed: u64) -> Result<String, String> {
    if m * n > 250_000 || epochs > 2_000 {
        return Err("instance too large for the demo".into());
    }
    let family: Family = problem.parse().map_err(|e: rbcd_core::Error| e.to_string())?;
    let instance = synth_instance(family, m, n, seed).map_err(|e| e.to_string())?;
    let mut curves = Vec::new();
    for kind in [SolverKind::Rbcd, SolverKind::ArbcdEfficient, SolverKind::Bpg, SolverKind::Abpg] {
        let config = SolverConfig::new(kind).with_epochs(epochs).with_seed(seed).with_gamma(gamma);
        let trace = run(&instance, &config).map_err(|e| e.to_string())?;
        curves.push(Curve {
            solver: kind.name().to_string(),
            objective: trace.objectives().into_iter().map(|(_, f)| f).collect(),
            stationarity: trace.stationarities().into_iter().map(|(_, s)| s).collect(),
            diverged: trace.diverged,
        });
    }
    to_json(&curves)
}

/// `prox(x, g)` with stepsize `alpha` for `points` gradients spread over `[g_min, g_max]`.
pub fn prox_curve_json(reference_name: &str, x: f64, alpha: f64, g_min: f64, g_max: f64, points: usize) -> Result<String, String> {
    let h = reference(reference_name)?;
    if !h.in_domain(x) {
        return Err(format!("x = {x} is outside the {} domain", h.name()));
    }
    if points < 2 || points > 10_000 || !(g_max > g_min) {
        return Err("need 2..=10000 points over a nonempty range".into());
    }
    let curve: Vec<ProxPoint> = (0..points)
        .map(|i| {
            let g = g_min + (g_max - g_min) * i as f64 / (points - 1) as f64;
            let prox = bregman_prox(h, &[x], &[g], alpha, RegularizerKind::NonnegIndicator)
                .ok()
                .map(|v| v[0]);
            ProxPoint { g, prox }
        })
        .collect();
    to_json(&curve)
}

/// Sampled `(theta, ratio)` pairs and the empirical exponent.
pub fn gti_samples_json(reference_name: &str, samples: usize, seed: u64) -> Result<String, String> {
    let h = reference(reference_name)?;
    let samples = samples.min(20_000);
    to_json(&GtiScatter {
        samples: sample_gti(h, samples, seed, false)
            .into_iter()
            .map(|s| (s.theta, s.ratio))
            .collect(),
        exponent: estimate_gti_exponent(h, samples, seed),
    })
}

fn js(r: Result<String, String>) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn solver_curves(problem: &str, m: usize, n: usize, epochs: usize, gamma: f64, seed: u32) -> Result<String, JsError> {
    js(solver_curves_json(problem, m, n, epochs, gamma, seed.into()))
}

#[wasm_bindgen]
pub fn prox_curve(reference: &str, x: f64, alpha: f64, g_min: f64, g_max: f64, points: usize) -> Result<String, JsError> {
    js(prox_curve_json(reference, x, alpha, g_min, g_max, points))
}

#[wasm_bindgen]
pub fn gti_samples(reference: &str, samples: usize, seed: u32) -> Result<String, JsError> {
    js(gti_samples_json(reference, samples, seed.into()))
}
