//! CLI error wrapper with stable exit codes: 2 for input problems, 3 for
//! configuration problems, 4 for numerical/domain failures.

use std::fmt;

use tailci::Error as LibError;

#[derive(Debug)]
pub enum CliError {
    Input { context: String },
    Usage { context: String },
    Lib(LibError),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input { context } => write!(f, "{context}"),
            CliError::Usage { context } => write!(f, "{context}"),
            CliError::Lib(e) => write!(f, "{e}"),
        }
    }
}

impl From<LibError> for CliError {
    fn from(e: LibError) -> Self {
        CliError::Lib(e)
    }
}

pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CONFIG: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input { .. } => EXIT_INPUT,
            CliError::Usage { .. } => EXIT_CONFIG,
            CliError::Lib(e) => match e {
                LibError::Io(_)
                | LibError::NonFinite { .. }
                | LibError::TooFewObservations { .. } => EXIT_INPUT,
                LibError::Config(_)
                | LibError::MissingEntry { .. }
                | LibError::TableFormat(_)
                | LibError::OutOfRange { .. }
                | LibError::InvalidInterval { .. } => EXIT_CONFIG,
                LibError::NonPositiveOrderStatistic { .. }
                | LibError::DegenerateEstimate { .. }
                | LibError::ExtrapolationDirection { .. }
                | LibError::Resolution { .. }
                | LibError::Domain(_) => EXIT_NUMERIC,
            },
        }
    }
}
