use std::path::Path;

use rtbp::periodarea::{ClassifyError, VerifyError};
use rtbp::periodicity::PeriodicityError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("not periodic: {0}")]
    NotPeriodic(PeriodicityError),
    #[error("unclassifiable: {0}")]
    Unclassifiable(ClassifyError),
    #[error("enclosed region leaves the Hill region: {0}")]
    OutsideHillRegion(VerifyError),
    #[error("area quadrature failed: {0}")]
    Quadrature(String),
    #[error(transparent)]
    Other(#[from] anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema(_) | CliError::Other(_) => 1,
            CliError::NotPeriodic(_) => 2,
            CliError::Unclassifiable(_) => 3,
            CliError::OutsideHillRegion(_) => 4,
            CliError::Quadrature(_) => 5,
        }
    }

    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Other(anyhow::anyhow!("{}: {e}", path.display()))
    }
}

impl From<PeriodicityError> for CliError {
    fn from(e: PeriodicityError) -> Self {
        match e {
            PeriodicityError::Integrate(inner) => CliError::Other(inner.into()),
            PeriodicityError::PoorGuess { .. } => CliError::Other(e.into()),
            e => CliError::NotPeriodic(e),
        }
    }
}

impl From<ClassifyError> for CliError {
    fn from(e: ClassifyError) -> Self {
        CliError::Unclassifiable(e)
    }
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Classify(c) => CliError::Unclassifiable(c),
            e @ VerifyError::OutsideHillRegion { .. } => CliError::OutsideHillRegion(e),
            VerifyError::Theta(t) => CliError::Other(t.into()),
        }
    }
}
