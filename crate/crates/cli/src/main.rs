use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use detarr_core::factor::DEFAULT_RESIDUAL_TOL;
use detarr_core::matcore::Kind;

mod commands;
mod error;
mod io;
mod report;
mod reproduce;

use commands::Globals;
use error::{code, CliError};

#[derive(Parser)]
#[command(
    name = "detarr",
    version,
    about = "Cholesky-type factorizations and their determinantal arrangements"
)]
struct Cli {
    /// Seed for every randomized check.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Relative residual bound for factorizations.
    #[arg(long, global = true, default_value_t = DEFAULT_RESIDUAL_TOL)]
    tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Factor a matrix as B·K·C.
    Factor {
        #[arg(long, value_parser = parse_kind)]
        kind: Kind,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Coefficient determinant, its factors and the block structure.
    Analyze {
        #[arg(long, value_parser = parse_kind)]
        rep: Kind,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        filtration: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Relative invariants, Λ matrix, torus loop integrals and the fiber relation.
    Cohomology {
        #[arg(long, value_parser = parse_kind)]
        rep: Kind,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Winding obstruction and continuous factorization along a closed loop.
    Lift {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Regenerate the reference tables with PASS/FAIL per line.
    Reproduce {
        #[arg(long, value_enum)]
        table: reproduce::Target,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_kind(s: &str) -> Result<Kind, String> {
    s.parse::<Kind>().map_err(|e| e.to_string())
}

fn run(cli: Cli) -> Result<(), CliError> {
    if !(cli.tol > 0.0 && cli.tol.is_finite()) {
        return Err(CliError::Usage(format!(
            "--tol must be positive, got {}",
            cli.tol
        )));
    }
    let g = Globals {
        seed: cli.seed,
        tol: cli.tol,
    };
    match cli.command {
        Command::Factor { kind, input, out } => commands::factor(&g, kind, &input, out.as_deref()),
        Command::Analyze {
            rep,
            m,
            filtration,
            out,
        } => commands::analyze(&g, rep, m, filtration.as_deref(), out.as_deref()),
        Command::Cohomology { rep, m, out } => commands::cohomology(&g, rep, m, out.as_deref()),
        Command::Lift { input, out } => commands::lift(&g, &input, out.as_deref()),
        Command::Reproduce { table, out } => reproduce::reproduce(&g, table, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::from(code::OK),
                _ => ExitCode::from(code::USAGE),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::from(code::OK),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
