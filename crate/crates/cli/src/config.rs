use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Args;
use rbcd_core::problems::Family;
use rbcd_core::solvers::{BetaSchedule, SolverKind};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Default output directory when neither `--out` nor the file sets one.
pub const OUT_DIR_ENV: &str = "RBCD_OUT_DIR";

/// Flags of `rbcd run`. Every flag overrides the same key from `--config`.
#[derive(Args, Clone, Debug, Default)]
pub struct RunArgs {
    /// poisson, relent or quadratic.
    #[arg(long)]
    pub problem: Option<String>,
    /// Comma-separated: rbcd, arbcd, arbcd-efficient, bpg, abpg.
    #[arg(long)]
    pub solver: Option<String>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub epochs: Option<usize>,
    /// Comma-separated momentum exponents for the accelerated solvers.
    #[arg(long)]
    pub gamma: Option<String>,
    /// `7`, `1,2,5` or the inclusive range `1..10`.
    #[arg(long)]
    pub seed: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Instance file shared by all seeds instead of synthetic data.
    #[arg(long)]
    pub instance: Option<PathBuf>,
    /// TOML file with the same keys.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Write 0 in the elapsed_s column.
    #[arg(long)]
    pub no_timing: bool,
    /// closed-form or equality.
    #[arg(long)]
    pub beta: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub problem: Family,
    pub m: usize,
    pub n: usize,
    pub seeds: Vec<u64>,
    pub solvers: Vec<SolverKind>,
    pub gammas: Vec<f64>,
    pub epochs: usize,
    pub out: PathBuf,
    pub instance: Option<PathBuf>,
    pub beta: BetaSchedule,
    pub no_timing: bool,
}

#[derive(Deserialize, Serialize)]
#[serde(untagged)]
enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

#[derive(Deserialize, Serialize)]
#[serde(untagged)]
enum SeedSpec {
    List(Vec<u64>),
    Single(u64),
    Text(String),
}

/// Keys accepted in the TOML file; also the shape of the echoed config.
#[derive(Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    problem: Option<String>,
    solvers: Option<OneOrMany<String>>,
    m: Option<usize>,
    n: Option<usize>,
    epochs: Option<usize>,
    gamma: Option<OneOrMany<f64>>,
    seeds: Option<SeedSpec>,
    out: Option<PathBuf>,
    instance: Option<PathBuf>,
    beta: Option<String>,
    no_timing: Option<bool>,
}

fn parse<T: FromStr>(key: &str, text: &str) -> Result<T, CliError>
where
    T::Err: std::fmt::Display,
{
    text.trim().parse().map_err(|e| CliError::usage(key, e))
}

/// Expands `7`, `1,2,5`, `1..10` and `1..=10`; ranges are inclusive.
pub fn parse_seeds(text: &str) -> Result<Vec<u64>, CliError> {
    let mut seeds = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((lo, hi)) = part.split_once("..") {
            let lo: u64 = parse("seed", lo)?;
            let hi: u64 = parse("seed", hi.trim_start_matches('='))?;
            if hi < lo {
                return Err(CliError::usage("seed", format!("empty range {part}")));
            }
            seeds.extend(lo..=hi);
        } else {
            seeds.push(parse("seed", part)?);
        }
    }
    if seeds.is_empty() {
        return Err(CliError::usage("seed", "no seeds given"));
    }
    Ok(seeds)
}

fn split_list(text: &str) -> Vec<String> {
    text.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect()
}

fn parse_solvers(names: &[String]) -> Result<Vec<SolverKind>, CliError> {
    if names.is_empty() {
        return Err(CliError::usage("solver", "list is empty"));
    }
    names.iter().map(|s| parse("solver", s)).collect()
}

fn check_gammas(gammas: Vec<f64>) -> Result<Vec<f64>, CliError> {
    if gammas.is_empty() {
        return Err(CliError::usage("gamma", "list is empty"));
    }
    if let Some(g) = gammas.iter().find(|g| !(g.is_finite() && **g > 0.0)) {
        return Err(CliError::usage("gamma", format!("{g} is not positive")));
    }
    Ok(gammas)
}

fn positive(key: &str, v: usize) -> Result<usize, CliError> {
    if v == 0 {
        return Err(CliError::usage(key, "must be at least 1"));
    }
    Ok(v)
}

fn read_file(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {}", path.display(), e.message())))
}

/// Resolves flags over the optional file over defaults.
pub fn parse_config(args: &RunArgs) -> Result<ExperimentConfig, CliError> {
    let file = match &args.config {
        Some(path) => read_file(path)?,
        None => FileConfig::default(),
    };

    let problem = match (&args.problem, &file.problem) {
        (Some(p), _) | (None, Some(p)) => parse("problem", p)?,
        (None, None) => Family::PoissonInverse,
    };
    let solvers = match (&args.solver, file.solvers) {
        (Some(s), _) => parse_solvers(&split_list(s))?,
        (None, Some(OneOrMany::One(s))) => parse_solvers(&split_list(&s))?,
        (None, Some(OneOrMany::Many(list))) => parse_solvers(&list)?,
        (None, None) => vec![SolverKind::Rbcd],
    };
    let gammas = match (&args.gamma, file.gamma) {
        (Some(g), _) => split_list(g).iter().map(|v| parse("gamma", v)).collect::<Result<_, _>>()?,
        (None, Some(OneOrMany::One(g))) => vec![g],
        (None, Some(OneOrMany::Many(g))) => g,
        (None, None) => vec![2.0],
    };
    let seeds = match (&args.seed, file.seeds) {
        (Some(s), _) => parse_seeds(s)?,
        (None, Some(SeedSpec::Text(s))) => parse_seeds(&s)?,
        (None, Some(SeedSpec::Single(s))) => vec![s],
        (None, Some(SeedSpec::List(list))) if !list.is_empty() => list,
        (None, Some(SeedSpec::List(_))) => return Err(CliError::usage("seed", "no seeds given")),
        (None, None) => (1..=10).collect(),
    };
    let beta = match (&args.beta, &file.beta) {
        (Some(b), _) | (None, Some(b)) => parse("beta", b)?,
        (None, None) => BetaSchedule::ClosedForm,
    };
    let out = args
        .out
        .clone()
        .or(file.out)
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("rbcd-out"));

    Ok(ExperimentConfig {
        problem,
        m: positive("m", args.m.or(file.m).unwrap_or(100))?,
        n: positive("n", args.n.or(file.n).unwrap_or(100))?,
        seeds,
        solvers,
        gammas: check_gammas(gammas)?,
        epochs: positive("epochs", args.epochs.or(file.epochs).unwrap_or(100))?,
        out,
        instance: args.instance.clone().or(file.instance),
        beta,
        no_timing: args.no_timing || file.no_timing.unwrap_or(false),
    })
}

impl ExperimentConfig {
    /// The resolved configuration as TOML; loadable again with `--config`.
    pub fn to_toml(&self) -> String {
        let echo = FileConfig {
            problem: Some(self.problem.name().to_string()),
            solvers: Some(OneOrMany::Many(self.solvers.iter().map(|s| s.name().to_string()).collect())),
            m: Some(self.m),
            n: Some(self.n),
            epochs: Some(self.epochs),
            gamma: Some(OneOrMany::Many(self.gammas.clone())),
            seeds: Some(SeedSpec::List(self.seeds.clone())),
            out: Some(self.out.clone()),
            instance: self.instance.clone(),
            beta: Some(self.beta.to_string()),
            no_timing: Some(self.no_timing),
        };
        toml::to_string(&echo).expect("plain keys serialize")
    }
}
