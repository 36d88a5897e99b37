//! Acceptance criteria, one line each. Run with
//! `cargo test -p rbcd-cli --test acceptance`.

use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rbcd_cli::{parse_config, run_experiment, RunArgs};
use rbcd_core::diagnostics::*;
use rbcd_core::geometry::{ReferenceFunction, RegularizerKind};
use rbcd_core::problems::{synth_instance, Family, ProblemInstance};
use rbcd_core::solvers::{ArbcdEfficientState, ArbcdState, SolverConfig, SolverKind};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn reports(rs: &[CheckReport]) -> Outcome {
    let failing: Vec<String> = rs.iter().filter(|r| !r.passed()).map(|r| r.text_line()).collect();
    let worst = rs
        .iter()
        .map(|r| format!("{}={:.2e}", r.name, r.max_violation))
        .collect::<Vec<_>>()
        .join(" ");
    if failing.is_empty() {
        outcome(true, worst)
    } else {
        outcome(false, failing.join(" | "))
    }
}

fn divided(problem: &ProblemInstance, factor: f64) -> ProblemInstance {
    problem
        .with_weights(problem.smoothness_constants().iter().map(|l| l / factor).collect())
        .unwrap()
}

fn prox_equivalence() -> Outcome {
    let mut rs: Vec<CheckReport> = ReferenceFunction::ALL
        .iter()
        .map(|&h| check_prox_oracle(h, RegularizerKind::NonnegIndicator, 1000, 1))
        .collect();
    rs.push(check_prox_oracle(ReferenceFunction::SquaredEuclidean, RegularizerKind::Zero, 1000, 1));
    let counted = rs.iter().all(|r| r.samples == 1000 && r.tolerance == 1e-8);
    let o = reports(&rs);
    outcome(o.pass && counted, o.detail)
}

fn gradients() -> Outcome {
    let mut rs = Vec::new();
    for (family, tol) in [
        (Family::PoissonInverse, 1e-4),
        (Family::RelativeEntropyRegression, 1e-4),
        (Family::Quadratic, 1e-9),
    ] {
        let p = synth_instance(family, 30, 30, 2).unwrap();
        let r = check_gradient_fd(&p, &random_interior_points(&p, 50, 2), tol);
        rs.push(CheckReport { samples: r.samples, ..r });
    }
    let o = reports(&rs);
    outcome(o.pass && rs.iter().all(|r| r.samples == 50), o.detail)
}

fn descent_and_decrease() -> Outcome {
    let p = synth_instance(Family::PoissonInverse, 50, 50, 3).unwrap();
    let broken = divided(&p, 10.0);
    let config = SolverConfig::new(SolverKind::Rbcd).with_seed(3);
    let decrease = check_sufficient_decrease(&p, &config, 500, 1e-8);
    let rs = vec![
        check_descent_lemma(&p, 500, 1e-8, 3),
        decrease.clone(),
        check_descent_lemma(&broken, 500, 1e-8, 3).expecting_violation(),
    ];
    let o = reports(&rs);
    outcome(o.pass && decrease.samples == 500, o.detail)
}

fn expectations() -> Outcome {
    let mut rs = Vec::new();
    for family in [Family::RelativeEntropyRegression, Family::PoissonInverse, Family::Quadratic] {
        let p = synth_instance(family, 5, 5, 4).unwrap();
        let states = random_states(&p, 20, 4);
        rs.extend(check_expectation_identities(&p, &states).unwrap().into_vec());
    }
    reports(&rs)
}

fn lockstep() -> Outcome {
    let p = synth_instance(Family::PoissonInverse, 100, 100, 5).unwrap();
    let config = SolverConfig::new(SolverKind::Arbcd).with_gamma(2.0).with_seed(5);
    let mut reference = ArbcdState::new(&p, &config).unwrap();
    let mut efficient = ArbcdEfficientState::new(&p, &config).unwrap();
    let sup = |a: &[f64], b: &[f64]| a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
    let mut worst = 0.0f64;
    for k in 0..200 {
        let y = efficient.gradient_point();
        if let Err(e) = reference.step(&p).and_then(|_| efficient.step(&p)) {
            return outcome(false, format!("step {k} failed: {e}"));
        }
        worst = worst.max(sup(&y, reference.y())).max(sup(&efficient.x(), reference.x()));
    }
    outcome(worst <= 1e-8, format!("sup-norm gap {worst:.2e} over 200 iterations (tol 1e-8)"))
}

fn rate(family: Family, kind: RateKind, solver: SolverConfig, epochs: usize) -> CheckReport {
    let p = synth_instance(family, 100, 100, 6).unwrap();
    let mut reference = reference_optimum(&p, 10 * epochs, 6).unwrap();
    if kind == RateKind::Stationarity {
        reference.f_star = 0.0;
    }
    let info = estimate_mu_sigma(&p).ok();
    let seeds: Vec<u64> = (0..20).collect();
    let traces = run_seeds(&p, &solver.with_epochs(epochs), &seeds).unwrap();
    check_rate_bounds(&traces, &p, info.as_ref(), kind, &reference, 1.5)
}

fn stationarity_envelope() -> Outcome {
    reports(&[rate(
        Family::PoissonInverse,
        RateKind::Stationarity,
        SolverConfig::new(SolverKind::Rbcd),
        50,
    )])
}

fn objective_envelopes() -> Outcome {
    reports(&[
        rate(
            Family::RelativeEntropyRegression,
            RateKind::Sublinear,
            SolverConfig::new(SolverKind::Rbcd),
            50,
        ),
        rate(Family::Quadratic, RateKind::Linear, SolverConfig::new(SolverKind::Rbcd), 50),
    ])
}

fn accelerated_envelope() -> Outcome {
    reports(&[rate(
        Family::Quadratic,
        RateKind::Accelerated,
        SolverConfig::new(SolverKind::ArbcdEfficient).with_gamma(2.0),
        50,
    )])
}

fn gti_suite() -> Outcome {
    let shannon = check_gti(ReferenceFunction::ShannonEntropy, 1.0, 10_000, 9);
    let euclidean = check_gti(ReferenceFunction::SquaredEuclidean, 2.0, 10_000, 9);
    let burg = check_gti(ReferenceFunction::BurgEntropy, 0.6, 10_000, 9);
    let pass = euclidean.passed()
        && euclidean.max_violation <= 1e-14
        && shannon.passed()
        && shannon.samples == 10_000
        && burg.status == CheckStatus::Fail;
    outcome(
        pass,
        format!(
            "euclidean gamma=2 max {:.2e}; shannon gamma=1 max {:.2e}; burg gamma=0.6 {} (max {:.2e})",
            euclidean.max_violation, shannon.max_violation, burg.status, burg.max_violation
        ),
    )
}

fn sweep(dir: &Path, problem: &str, solvers: &str, gamma: &str) -> rbcd_cli::ExperimentResult {
    let args = RunArgs {
        problem: Some(problem.into()),
        solver: Some(solvers.into()),
        m: Some(200),
        n: Some(200),
        epochs: Some(100),
        gamma: Some(gamma.into()),
        seed: Some("1..10".into()),
        out: Some(dir.to_path_buf()),
        no_timing: true,
        ..Default::default()
    };
    run_experiment(&parse_config(&args).unwrap()).unwrap()
}

fn solver_ordering() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let result = sweep(dir.path(), "poisson", "rbcd,arbcd-efficient,bpg,abpg", "2");
    let median = |kind: SolverKind| {
        result
            .summary
            .iter()
            .find(|r| r.solver == kind)
            .map(|r| r.median_final_objective)
            .unwrap()
    };
    let (arbcd, rbcd, bpg, abpg) = (
        median(SolverKind::ArbcdEfficient),
        median(SolverKind::Rbcd),
        median(SolverKind::Bpg),
        median(SolverKind::Abpg),
    );
    let relent = tempfile::tempdir().unwrap();
    let low_gamma = sweep(relent.path(), "relent", "arbcd-efficient", "0.1");
    let diverged = low_gamma.summary[0].diverged;
    let pass = arbcd <= rbcd && rbcd <= bpg * (1.0 + 1e-2) && abpg <= bpg;
    outcome(
        pass,
        format!(
            "medians arbcd={arbcd:.6} rbcd={rbcd:.6} bpg={bpg:.6} abpg={abpg:.6} rbcd/bpg={:.4}; \
             relent arbcd gamma=0.1 diverged {diverged}/10 (reported only)",
            rbcd / bpg
        ),
    )
}

fn determinism() -> Outcome {
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for dir in &dirs {
        let status = Command::new(env!("CARGO_BIN_EXE_rbcd"))
            .args([
                "run", "--problem", "poisson", "--solver", "rbcd,arbcd,bpg,abpg", "--m", "40", "--n", "40",
                "--epochs", "20", "--gamma", "0.1,2", "--seed", "1..3", "--no-timing", "--out",
            ])
            .arg(dir.path())
            .output()
            .unwrap();
        if !status.status.success() {
            return outcome(false, String::from_utf8_lossy(&status.stderr).into_owned());
        }
    }
    let mut names: Vec<_> = std::fs::read_dir(dirs[0].path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .filter(|n| n.to_string_lossy().ends_with(".csv"))
        .collect();
    names.sort();
    let identical = names
        .iter()
        .all(|n| std::fs::read(dirs[0].path().join(n)).unwrap() == std::fs::read(dirs[1].path().join(n)).unwrap());
    outcome(identical && names.len() == 19, format!("{} CSV files compared byte for byte", names.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, Duration); 11] = [
        ("prox-oracle equivalence", prox_equivalence, Duration::from_secs(5)),
        ("gradient finite differences", gradients, Duration::from_secs(5)),
        ("descent lemma and sufficient decrease", descent_and_decrease, Duration::from_secs(10)),
        ("expectation identities", expectations, Duration::MAX),
        ("reference and efficient accelerated forms in lockstep", lockstep, Duration::from_secs(10)),
        ("stationarity envelope", stationarity_envelope, Duration::from_secs(60)),
        ("sublinear and linear envelopes", objective_envelopes, Duration::from_secs(120)),
        ("accelerated envelope", accelerated_envelope, Duration::from_secs(60)),
        ("gti suite", gti_suite, Duration::from_secs(10)),
        ("solver ordering at desk scale", solver_ordering, Duration::from_secs(300)),
        ("byte-identical sweeps", determinism, Duration::MAX),
    ];
    let mut failures = 0;
    for (i, (name, check, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = check();
        let elapsed = start.elapsed();
        let pass = o.pass && elapsed < *budget;
        failures += usize::from(!pass);
        let limit = if *budget == Duration::MAX {
            String::new()
        } else {
            format!(" < {}s", budget.as_secs())
        };
        println!(
            "{} {:>2} {name} [{:.2}s{limit}] {}",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            elapsed.as_secs_f64(),
            o.detail
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
