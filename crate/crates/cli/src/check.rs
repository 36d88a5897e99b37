use std::io::Write;
use std::path::PathBuf;

use clap::Args;
use rbcd_core::diagnostics::{run_suite, CheckReport, SuiteOptions, CHECK_NAMES, MIN_RATE_SEEDS};
use rbcd_core::geometry::ReferenceFunction;

use crate::{CliError, OUT_DIR_ENV};

/// Flags of `rbcd check`.
#[derive(Args, Clone, Debug)]
pub struct CheckArgs {
    /// Suite to run.
    #[arg(value_parser = clap::builder::PossibleValuesParser::new(CHECK_NAMES))]
    pub name: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Reference function for the GTI suite: euclidean, shannon or burg.
    #[arg(long = "ref")]
    pub reference: Option<String>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub problem: Option<String>,
    /// Run seeds for the rate envelopes.
    #[arg(long, default_value_t = MIN_RATE_SEEDS)]
    pub seeds: usize,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub epochs: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_reference(s: &str) -> Result<ReferenceFunction, CliError> {
    ReferenceFunction::ALL
        .into_iter()
        .find(|r| r.name() == s)
        .ok_or_else(|| CliError::usage("ref", format!("unknown reference '{s}'")))
}

/// Runs the suite, prints one line per report and writes `report.txt` and
/// `report.jsonl` into the output directory. Returns whether every report passed.
pub fn run_check(args: &CheckArgs) -> Result<(Vec<CheckReport>, bool), CliError> {
    let opts = SuiteOptions {
        seed: args.seed,
        reference: args.reference.as_deref().map(parse_reference).transpose()?,
        gamma: args.gamma,
        family: args
            .problem
            .as_deref()
            .map(|p| p.parse().map_err(|e| CliError::usage("problem", e)))
            .transpose()?,
        seeds: args.seeds,
        m: args.m,
        n: args.n,
        epochs: args.epochs,
    };
    let reports = run_suite(&args.name, &opts)?;
    let out = args
        .out
        .clone()
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("rbcd-out"));
    std::fs::create_dir_all(&out).map_err(|e| CliError::io(&out, e))?;

    let mut text = String::new();
    let mut json = String::new();
    for r in &reports {
        text.push_str(&r.text_line());
        text.push('\n');
        json.push_str(&serde_json::to_string(r).expect("reports serialize"));
        json.push('\n');
    }
    let all_pass = reports.iter().all(CheckReport::passed);
    text.push_str(if all_pass { "ALL PASS\n" } else { "SOME CHECKS DID NOT PASS\n" });
    for (name, body) in [("report.txt", &text), ("report.jsonl", &json)] {
        let path = out.join(name);
        std::fs::write(&path, body).map_err(|e| CliError::io(&path, e))?;
    }
    std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::io(&out, e))?;
    Ok((reports, all_pass))
}
