//! Error type shared by all modules.

use thiserror::Error;

/// Crate-wide error type. Variants map onto the CLI exit codes: config and
/// I/O problems exit with 2, physics/regime problems with 3.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular rate: {0}")]
    Singularity(String),

    #[error("degenerate time split: both rates must be positive")]
    DegenerateSplit,

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("no unique limit cycle: {0}")]
    NoUniqueCycle(String),

    #[error("integration failure: {0}")]
    Integration(String),

    #[error("outside fast-driving regime: {0}")]
    Regime(String),

    #[error("undefined efficiency: hot gap is zero")]
    UndefinedEfficiency,

    #[error("undefined COP: gaps are degenerate")]
    UndefinedCop,

    #[error("root not found: {0}")]
    RootNotFound(String),

    #[error("expansion window invalid: {0}")]
    ExpansionInvalid(String),

    #[error("sub-cycle split undefined: {0}")]
    SplitUndefined(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// CLI exit code for this error: 2 for config/I-O, 3 for physics.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Io(_) => 2,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
