use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {}: {source}", path.display())]
    Read { path: PathBuf, source: io::Error },

    #[error("cannot write {}: {source}", path.display())]
    Write { path: PathBuf, source: io::Error },

    #[error(transparent)]
    Model(#[from] bgkmix::Error),

    #[error("{0} property check(s) failed")]
    Violations(usize),
}

impl CliError {
    /// 2 for configuration problems, 3 for numerical failures, 4 for
    /// property violations and 1 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Read { .. } | CliError::Model(bgkmix::Error::Config { .. }) => 2,
            CliError::Model(bgkmix::Error::InvalidParams(_) | bgkmix::Error::UnknownPreset(_)) => 2,
            CliError::Model(bgkmix::Error::Io(_)) | CliError::Write { .. } => 1,
            CliError::Model(_) => 3,
            CliError::Violations(_) => 4,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
