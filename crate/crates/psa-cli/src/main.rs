//! `psa`: prime-sum asymptotics from the command line.
//!
//! Exit codes: 0 success (and no failing checks), 1 failing checks or
//! runtime error, 2 usage/config error, 3 model-hypothesis violation,
//! 4 resource limit.

mod commands;
mod opts;
mod output;

use clap::Parser;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(psa_core::Error),
    Io(std::io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<psa_core::Error> for CliError {
    fn from(e: psa_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        use psa_core::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 1,
            CliError::Core(e) => match e {
                E::HypothesisViolation { .. } | E::MissingLogEval { .. } => 3,
                E::RangeTooLarge { .. }
                | E::LimitTooLarge { .. }
                | E::MaxSubdivisions { .. }
                | E::Overflow { .. }
                | E::NonFiniteIntegrand { .. } => 4,
                E::InvalidRange { .. }
                | E::UnknownFunction(_)
                | E::InvalidParams { .. }
                | E::InvalidTolerance(_)
                | E::InvalidBounds { .. }
                | E::InvalidModel(_)
                | E::InvalidGrid(_) => 2,
                E::CacheFormat { .. } | E::CacheIo { .. } => 1,
            },
        }
    }
}

fn run() -> Result<i32, CliError> {
    let cli = opts::Cli::parse();
    match &cli.command {
        opts::Command::Table(args) => commands::cmd_table(args),
        opts::Command::Conditions(args) => commands::cmd_conditions(args),
        opts::Command::ProductBound(args) => commands::cmd_product_bound(args),
        opts::Command::Verify(args) => commands::cmd_verify(args),
    }
}

fn main() {
    match run() {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
