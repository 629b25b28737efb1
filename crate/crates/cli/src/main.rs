use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use slab_core::cli::{fit_csv, list_scenarios, parse_config, refit, run, selftest};
use slab_core::par::limit_threads_from_env;

/// Spectral laboratory for Strichartz estimates.
///
/// Exit codes: 0 success, 1 a judged criterion failed, 2 invalid input or
/// I/O error.
#[derive(Parser)]
#[command(name = "slab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the scenario described by a JSON config file.
    Run {
        config: PathBuf,
        /// Output directory; overrides `out` in the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the scenarios and their predicted laws.
    ListScenarios,
    /// Refit the exploratory series of an existing results.csv.
    Fit { results: PathBuf },
    /// Run the fast invariant checks.
    Selftest,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = limit_threads_from_env() {
        eprintln!("slab: {e}");
        return ExitCode::from(2);
    }
    match cli.command {
        Command::Run { config, out } => {
            let cfg = match parse_config(&config) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("slab: {}: {e}", config.display());
                    return ExitCode::from(2);
                }
            };
            let Some(dir) = out.or_else(|| cfg.out.clone()) else {
                eprintln!("slab: no output directory; pass --out or set 'out' in the config");
                return ExitCode::from(2);
            };
            match run(&cfg, &dir) {
                Ok(code) => {
                    if let Ok(text) = std::fs::read_to_string(dir.join("report.txt")) {
                        print!("{text}");
                    }
                    ExitCode::from(code as u8)
                }
                Err(e) => {
                    eprintln!("slab: {e}");
                    ExitCode::from(2)
                }
            }
        }
        Command::ListScenarios => {
            println!("{}", list_scenarios());
            ExitCode::SUCCESS
        }
        Command::Fit { results } => {
            let text = match std::fs::read_to_string(&results) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("slab: {}: {e}", results.display());
                    return ExitCode::from(2);
                }
            };
            match refit(&text) {
                Ok(fits) => {
                    print!("{}", fit_csv(&fits));
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("slab: {e}");
                    ExitCode::from(2)
                }
            }
        }
        Command::Selftest => {
            let (lines, ok) = selftest();
            for l in lines {
                println!("{l}");
            }
            println!("selftest: {}", if ok { "pass" } else { "fail" });
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
