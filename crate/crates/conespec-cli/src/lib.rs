//! Support library for the `conespec` command-line tool: instance-file
//! parsing and serialization, canonical report construction, and the
//! mapping from library errors onto process exit codes.
//!
//! The binary in `main.rs` is a thin argument-parsing layer over these
//! modules, so integration tests can rebuild expected outputs through the
//! same code paths the tool uses.

pub mod instance;
pub mod report;

use std::fmt;

/// A failure with the exit code it maps to.
///
/// `Input` covers everything wrong with what the user handed us — malformed
/// JSON, invalid matrices or cone descriptions, incompatible dimensions,
/// out-of-range flags — and exits with code 2. `Numerical` covers failures
/// of the analysis itself on well-formed input and exits with code 3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Input(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Numerical(m) => m,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.message())
    }
}

impl std::error::Error for CliError {}

/// Sorts library errors into the two exit-code buckets. Errors that reject
/// the problem statement (bad specifications, shapes, values, or missing
/// representations) are input errors; errors arising while solving a
/// well-posed problem are numerical.
pub fn classify(e: conespec::Error) -> CliError {
    use conespec::Error::*;
    match e {
        InvalidSpec(_)
        | DimensionMismatch(_)
        | NonFinite(_)
        | UnknownFamily(_)
        | NotPointed(_)
        | NotSolid(_)
        | IllConditioned { .. }
        | NotInCone { .. }
        | RepresentationMissing(_)
        | InsufficientData(_) => CliError::Input(e.to_string()),
        other => CliError::Numerical(other.to_string()),
    }
}
