use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};

use qss_cli::commands::{self, Outcome};
use qss_cli::{CliError, EXIT_FAILED, EXIT_OK};

#[derive(Parser)]
#[command(name = "qss", version, about = "Quantum threshold secret sharing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a ((k,n)) threshold scheme.
    New {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
        secret_dim: u64,
        /// Output file (standard output when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Split a secret under a scheme.
    Split {
        #[arg(long)]
        scheme: PathBuf,
        /// Amplitudes as comma separated `re:im` pairs, e.g. `1:0,0:0`.
        #[arg(long, allow_hyphen_values = true)]
        secret: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reconstruct the secret from a set of shares.
    Reconstruct {
        #[arg(long)]
        state: PathBuf,
        /// Comma separated share labels, e.g. `A,C`.
        #[arg(long)]
        shares: String,
        /// The original secret; the fidelity is then checked.
        #[arg(long, allow_hyphen_values = true)]
        expect: Option<String>,
    },
    /// Verify a scheme or run a demo.
    #[command(group(ArgGroup::new("target").required(true).args(["scheme", "demo"])))]
    Verify {
        #[arg(long)]
        scheme: Option<PathBuf>,
        #[arg(long, value_parser = commands::DEMOS)]
        demo: Option<String>,
        /// Also write the plain-text report to this file.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn finish(o: Outcome) -> u8 {
    print!("{}", o.stdout);
    if o.passed {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::New { k, n, secret_dim, out } => {
            let text = commands::new_scheme(k as usize, n as usize, secret_dim as usize)?;
            emit(&text, out.as_ref())?;
            Ok(EXIT_OK)
        }
        Command::Split { scheme, secret, out } => {
            let text = commands::split_secret(&read(&scheme)?, &secret)?;
            emit(&text, out.as_ref())?;
            Ok(EXIT_OK)
        }
        Command::Reconstruct { state, shares, expect } => Ok(finish(commands::reconstruct_shares(
            &read(&state)?,
            &shares,
            expect.as_deref(),
        )?)),
        Command::Verify { scheme, demo, report } => {
            let (outcome, text) = match (scheme, demo) {
                (Some(path), _) => commands::verify_scheme(&read(&path)?)?,
                (None, Some(name)) => {
                    let o = commands::run_demo(&name)?;
                    let text = o.stdout.clone();
                    (o, text)
                }
                (None, None) => unreachable!("clap requires a target"),
            };
            if let Some(path) = report {
                fs::write(&path, text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            }
            Ok(finish(outcome))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
