use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use equivar_cli::{run_laws, run_lift_demo, run_uat, ExperimentConfig, RunError};

/// Law checks, approximation experiments, and lifting demos for finite-group
/// equivariance.
#[derive(Parser)]
#[command(name = "equivar", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the comonad/comodule/left-inverse and set-level law suites
    Laws(CommonArgs),
    /// Fit nets of increasing width and report equivariant approximation
    /// errors as CSV
    Uat {
        #[command(flatten)]
        common: CommonArgs,
        /// Write the CSV here instead of standard output
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lift a finite group action to the free vector space and verify the
    /// embedding squares
    LiftDemo(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Path to the JSON experiment config
    #[arg(long)]
    config: PathBuf,
    /// Override the configured group with `table:<path>`
    #[arg(long)]
    group: Option<String>,
    /// Override the configured seed
    #[arg(long)]
    seed: Option<u64>,
}

fn load(common: &CommonArgs) -> Result<ExperimentConfig, RunError> {
    let mut config = ExperimentConfig::load(&common.config)?;
    config.apply_overrides(common.group.as_deref(), common.seed)?;
    Ok(config)
}

fn dispatch(cli: Cli) -> Result<(), RunError> {
    let stdout = std::io::stdout();
    match cli.command {
        Command::Laws(common) => {
            let config = load(&common)?;
            run_laws(&config, &mut stdout.lock())
        }
        Command::Uat { common, out } => {
            let config = load(&common)?;
            match out {
                Some(path) => {
                    let file = std::fs::File::create(&path).map_err(|e| {
                        RunError::Usage(format!("cannot create {}: {e}", path.display()))
                    })?;
                    let mut writer = std::io::BufWriter::new(file);
                    run_uat(&config, &mut writer)?;
                    writer.flush().map_err(|e| {
                        RunError::Usage(format!("cannot write {}: {e}", path.display()))
                    })
                }
                None => run_uat(&config, &mut stdout.lock()),
            }
        }
        Command::LiftDemo(common) => {
            let config = load(&common)?;
            run_lift_demo(&config, &mut stdout.lock())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
