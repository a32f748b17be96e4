use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dbo_core::labcli::{preset_summary, run_config_file, verify_report, RunStatus, PRESETS};

/// Numerical laboratory for the dissipative Benjamin-Ono equation.
#[derive(Parser)]
#[command(name = "dbolab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the scenario described by a JSON config.
    Run { config: PathBuf },
    /// Preset catalogue.
    Presets {
        #[command(subcommand)]
        action: PresetAction,
    },
    /// Re-check pass/fail from a stored manifest.
    Verify { report: PathBuf },
}

#[derive(Subcommand)]
enum PresetAction {
    List,
}

fn exit(status: RunStatus) -> ExitCode {
    ExitCode::from(status.exit_code() as u8)
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run { config } => {
            let outcome = run_config_file(&config);
            for c in &outcome.manifest.checks {
                println!("{} {}", if c.passed { "PASS" } else { "FAIL" }, c.name);
            }
            if let Some(e) = &outcome.manifest.error {
                eprintln!("error: {e}");
            }
            match &outcome.output_dir {
                Some(dir) => println!("status {:?}, outputs in {}", outcome.status, dir.display()),
                None => eprintln!("could not write the manifest"),
            }
            exit(outcome.status)
        }
        Command::Presets { action: PresetAction::List } => {
            for p in PRESETS {
                println!("{p:<20} {}", preset_summary(p));
            }
            ExitCode::SUCCESS
        }
        Command::Verify { report } => match verify_report(&report) {
            Ok(v) => {
                for name in &v.failed {
                    println!("FAIL {name}");
                }
                for name in &v.inconsistent {
                    println!("INCONSISTENT {name}");
                }
                println!("status {:?}", v.status);
                exit(v.status)
            }
            Err(e) => {
                eprintln!("{e}");
                exit(RunStatus::Schema)
            }
        },
    }
}
