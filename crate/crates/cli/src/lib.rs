//! Command-line front end: escape-depth renders of `M`/`M0`, attractor plots
//! with instar and chain overlays, certificates and the landmark suite.

pub mod args;
pub mod commands;
pub mod ppm;
pub mod report;

use std::fmt;

pub use args::{Cli, Command};

pub const EXIT_OK: i32 = 0;
pub const EXIT_EXPECTATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numeric(ifs_lab::Error),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => EXIT_USAGE,
            CliError::Numeric(_) => EXIT_NUMERIC,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Numeric(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ifs_lab::Error> for CliError {
    fn from(e: ifs_lab::Error) -> Self {
        use ifs_lab::Error as E;
        match e {
            E::Parse(_) | E::BadIndices(_) | E::UnknownLandmark(_) | E::InconsistentWord(_) => CliError::Usage(e.to_string()),
            other => CliError::Numeric(other),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: Cli, argv: Vec<String>) -> Result<i32, CliError> {
    match cli.command {
        Command::Render(a) => commands::render(&a, argv),
        Command::Attractor(a) => commands::attractor(&a, argv),
        Command::Certify(a) => commands::certify(&a, argv),
        Command::Landmarks(a) => commands::landmarks(&a, argv),
    }
}
