use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use rbcd_core::problems::{read_instance, synth_instance, ProblemInstance};
use rbcd_core::solvers::{run, SolverConfig, SolverKind, SolverTrace};

use crate::trace_csv::format_float;
use crate::{write_trace_csv, CliError, ExperimentConfig};

/// One (solver, gamma, seed) run. `gamma` is `None` for solvers without momentum.
#[derive(Clone, Debug, PartialEq)]
pub struct RunSpec {
    pub solver: SolverKind,
    pub gamma: Option<f64>,
    pub seed: u64,
}

impl RunSpec {
    pub fn file_name(&self) -> String {
        match self.gamma {
            Some(g) => format!("{}_gamma{g}_seed{}.csv", self.solver.name(), self.seed),
            None => format!("{}_seed{}.csv", self.solver.name(), self.seed),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SummaryRow {
    pub solver: SolverKind,
    pub gamma: Option<f64>,
    pub runs: usize,
    pub diverged: usize,
    pub median_final_objective: f64,
}

#[derive(Clone, Debug)]
pub struct ExperimentResult {
    pub runs: Vec<(RunSpec, SolverTrace, PathBuf)>,
    pub summary: Vec<SummaryRow>,
}

/// Every (solver, gamma, seed) combination; gamma varies only for accelerated solvers.
pub fn plan(config: &ExperimentConfig) -> Vec<RunSpec> {
    let mut out = Vec::new();
    for &solver in &config.solvers {
        let gammas: Vec<Option<f64>> = if solver.is_accelerated() {
            config.gammas.iter().copied().map(Some).collect()
        } else {
            vec![None]
        };
        for gamma in gammas {
            for &seed in &config.seeds {
                out.push(RunSpec { solver, gamma, seed });
            }
        }
    }
    out
}

fn median(mut v: Vec<f64>) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Runs the sweep in parallel, writing one CSV per run, `config.toml` and
/// `summary.csv` into `config.out`. A diverged run is flagged in its trace
/// and the summary; it never stops the sweep.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult, CliError> {
    std::fs::create_dir_all(&config.out).map_err(|e| CliError::io(&config.out, e))?;
    write(&config.out.join("config.toml"), &config.to_toml())?;

    let instances: BTreeMap<u64, ProblemInstance> = match &config.instance {
        Some(path) => {
            let shared = read_instance(path, config.problem)?;
            config.seeds.iter().map(|&s| (s, shared.clone())).collect()
        }
        None => config
            .seeds
            .iter()
            .map(|&s| Ok((s, synth_instance(config.problem, config.m, config.n, s)?)))
            .collect::<Result<_, rbcd_core::Error>>()?,
    };

    let runs = plan(config)
        .into_par_iter()
        .map(|spec| {
            let mut solver = SolverConfig::new(spec.solver)
                .with_epochs(config.epochs)
                .with_seed(spec.seed)
                .with_beta_schedule(config.beta);
            if let Some(g) = spec.gamma {
                solver = solver.with_gamma(g);
            }
            let mut trace = run(&instances[&spec.seed], &solver)?;
            if config.no_timing {
                trace = trace.without_timing();
            }
            let path = config.out.join(spec.file_name());
            write_trace_csv(&trace, &path)?;
            Ok((spec, trace, path))
        })
        .collect::<Result<Vec<_>, CliError>>()?;

    let mut summary: Vec<SummaryRow> = Vec::new();
    for (spec, trace, _) in &runs {
        let row = match summary.iter_mut().find(|r| r.solver == spec.solver && r.gamma == spec.gamma) {
            Some(row) => row,
            None => {
                summary.push(SummaryRow {
                    solver: spec.solver,
                    gamma: spec.gamma,
                    runs: 0,
                    diverged: 0,
                    median_final_objective: f64::NAN,
                });
                summary.last_mut().unwrap()
            }
        };
        row.runs += 1;
        row.diverged += usize::from(trace.diverged);
    }
    for row in &mut summary {
        row.median_final_objective = median(
            runs.iter()
                .filter(|(s, _, _)| s.solver == row.solver && s.gamma == row.gamma)
                .map(|(_, t, _)| t.final_objective())
                .collect(),
        );
    }
    let mut text = String::from("solver,gamma,runs,diverged,median_final_objective\n");
    for r in &summary {
        text.push_str(&format!(
            "{},{},{},{},{}\n",
            r.solver.name(),
            r.gamma.map(|g| g.to_string()).unwrap_or_default(),
            r.runs,
            r.diverged,
            format_float(r.median_final_objective)
        ));
    }
    write(&config.out.join("summary.csv"), &text)?;
    Ok(ExperimentResult { runs, summary })
}
