use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use slipfilm::interface::{
    apply_env_overrides, cmd_limits, cmd_run, cmd_verify, exit_code, format_battery, load_config, resume_config, Laws,
    EXIT_CHECK_FAILED,
};
use slipfilm::Error;

#[derive(Parser)]
#[command(
    name = "slipfilm",
    version,
    about = "1D strong-slip thin-film solvers and diagnostics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Advance a configuration to its final time.
    Run { config: PathBuf },
    /// Run the parameter-limit study named in the config's [study] block.
    Limits { config: PathBuf },
    /// Run the built-in property battery.
    Verify,
    /// Continue a snapshot to a later time.
    Resume {
        snapshot: PathBuf,
        #[arg(long = "t-end")]
        t_end: f64,
    },
}

fn fail(code: &str, detail: &str) {
    eprintln!("SLIPFILM_ERROR={code}");
    eprintln!("{detail}");
}

fn report_error(e: &Error) -> ExitCode {
    fail(e.code(), &e.to_string());
    ExitCode::from(exit_code(e) as u8)
}

fn run_config(mut config: slipfilm::interface::Config) -> ExitCode {
    apply_env_overrides(&mut config);
    match cmd_run(&config) {
        Ok(summary) => {
            println!("{summary}");
            if summary.passed() {
                ExitCode::SUCCESS
            } else {
                let failed: Vec<_> = summary
                    .verdicts
                    .iter()
                    .filter(|v| !v.passed())
                    .map(|v| v.name)
                    .collect();
                fail("INEQUALITY_VIOLATION", &format!("failed checks: {}", failed.join(", ")));
                ExitCode::from(EXIT_CHECK_FAILED as u8)
            }
        }
        Err(e) => report_error(&e),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            // --help / --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            fail("USAGE", e.to_string().trim_end());
            return ExitCode::from(2);
        }
    };
    match cli.command {
        Command::Run { config } => match load_config(&config) {
            Ok(c) => run_config(c),
            Err(e) => report_error(&e),
        },
        Command::Resume { snapshot, t_end } => match resume_config(&snapshot, t_end) {
            Ok(c) => run_config(c),
            Err(e) => report_error(&e),
        },
        Command::Limits { config } => {
            let mut config = match load_config(&config) {
                Ok(c) => c,
                Err(e) => return report_error(&e),
            };
            apply_env_overrides(&mut config);
            match cmd_limits(&config) {
                Ok(outcome) => {
                    print!("{}", outcome.table.report());
                    for w in &outcome.warnings {
                        eprintln!("warning: {w}");
                    }
                    println!("table  {}", outcome.csv.display());
                    if outcome.passed() {
                        ExitCode::SUCCESS
                    } else {
                        fail("NOT_MONOTONE", "errors do not decrease down the ladder");
                        ExitCode::from(EXIT_CHECK_FAILED as u8)
                    }
                }
                Err(e) => report_error(&e),
            }
        }
        Command::Verify => {
            let outcomes = cmd_verify(&Laws::standard());
            print!("{}", format_battery(&outcomes));
            let failed = outcomes.iter().filter(|c| !c.passed).count();
            if failed == 0 {
                ExitCode::SUCCESS
            } else {
                fail(
                    "VERIFY_FAILED",
                    &format!("{failed} of {} checks failed", outcomes.len()),
                );
                ExitCode::from(EXIT_CHECK_FAILED as u8)
            }
        }
    }
}
