use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rbcd_cli::{parse_config, run_check, run_experiment, CheckArgs, CliError, RunArgs};
use rbcd_core::problems::{synth_instance, write_instance};

/// Randomized Bregman coordinate descent experiments.
#[derive(Parser)]
#[command(name = "rbcd", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep solvers, gammas and seeds; write CSV traces and a summary.
    Run(RunArgs),
    /// Run a diagnostics suite.
    Check(CheckArgs),
    /// Write a synthetic instance file.
    Synth {
        #[arg(long, default_value = "poisson")]
        problem: String,
        #[arg(long, default_value_t = 100)]
        m: usize,
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn execute(command: Command) -> Result<ExitCode, CliError> {
    match command {
        Command::Run(args) => {
            let config = parse_config(&args)?;
            print!("{}", config.to_toml());
            let result = run_experiment(&config)?;
            println!("\nsolver           gamma  runs  diverged  median_final_objective");
            for r in &result.summary {
                println!(
                    "{:<16} {:>5}  {:>4}  {:>8}  {:.10e}",
                    r.solver.name(),
                    r.gamma.map(|g| g.to_string()).unwrap_or_else(|| "-".into()),
                    r.runs,
                    r.diverged,
                    r.median_final_objective
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Check(args) => {
            let (_, all_pass) = run_check(&args)?;
            Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::from(2) })
        }
        Command::Synth { problem, m, n, seed, out } => {
            let family = problem.parse().map_err(|e| CliError::usage("problem", e))?;
            write_instance(&synth_instance(family, m, n, seed)?, &out)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
