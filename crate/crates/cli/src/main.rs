use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use phdg::config::RunConfig;
use phdg::CliError;
use phdg_core::spectrum::OperatorKind;

/// Structure-preserving DG discretization of 1D port-Hamiltonian systems.
#[derive(Parser)]
#[command(name = "phdg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the implicit midpoint simulation and write CSV traces.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; defaults to `output_dir` from the config.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write M, J, R, G, Q as `row col value` triplet files.
        #[arg(long)]
        dump_matrices: bool,
    },
    /// Compute the spectrum of the semi-discrete operator.
    Spectrum {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// `full` for M⁻¹(J-R)Q, `structure-only` for M⁻¹J.
        #[arg(long, default_value = "full")]
        operator: OperatorKind,
    },
    /// Check the structural properties of the assembled model.
    Check {
        #[arg(long)]
        config: PathBuf,
    },
}

fn out_dir(cli: Option<PathBuf>, cfg: &RunConfig) -> Result<PathBuf, CliError> {
    cli.or_else(|| cfg.output_dir.clone())
        .ok_or_else(|| CliError::Config("no output directory: pass --out or set output_dir".into()))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate { config, out, dump_matrices } => {
            let cfg = RunConfig::load(&config)?;
            let dir = out_dir(out, &cfg)?;
            let files = phdg::cmd_simulate(&cfg, &dir, dump_matrices)?;
            println!("wrote {} files to {}: {}", files.len(), dir.display(), files.join(", "));
        }
        Command::Spectrum { config, out, operator } => {
            let cfg = RunConfig::load(&config)?;
            let dir = out_dir(out, &cfg)?;
            let files = phdg::cmd_spectrum(&cfg, &dir, operator)?;
            println!("wrote {} files to {}: {}", files.len(), dir.display(), files.join(", "));
        }
        Command::Check { config } => {
            let cfg = RunConfig::load(&config)?;
            print!("{}", phdg::cmd_check(&cfg)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::CheckFailed(report)) => {
            print!("{report}");
            eprintln!("phdg: structural check failed");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("phdg: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
