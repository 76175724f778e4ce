use std::path::PathBuf;

use thiserror::Error;

use crate::external::ExternalError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{}: {message}", path.display())]
    Parse { path: PathBuf, message: String },

    #[error("cannot access {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Child(ExternalError),

    #[error(transparent)]
    Core(commenhance::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Parse { .. } => 3,
            CliError::Child(_) => 4,
            CliError::Io { .. } => 5,
            CliError::Core(e) => core_exit_code(e),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn parse(path: impl Into<PathBuf>, message: impl ToString) -> Self {
        CliError::Parse {
            path: path.into(),
            message: message.to_string(),
        }
    }

    /// Attaches `path` to a core error raised while reading that file.
    pub fn reading(path: impl Into<PathBuf>, err: commenhance::Error) -> Self {
        use commenhance::Error as E;
        match err {
            E::Io { path, source } => CliError::Io { path, source },
            E::Parse { .. } | E::UnknownNode { .. } | E::DuplicateAssignment { .. } | E::MissingNodes(_) => {
                CliError::parse(path, err)
            }
            other => CliError::from(other),
        }
    }
}

fn core_exit_code(err: &commenhance::Error) -> i32 {
    use commenhance::Error as E;
    match err {
        E::Io { .. } => 5,
        E::Parse { .. } | E::UnknownNode { .. } | E::DuplicateAssignment { .. } | E::MissingNodes(_) => 3,
        E::SizeMismatch { .. } => 3,
        E::Detector(_) => 4,
        E::EmptyGraph | E::NoEdges | E::MissingGroundTruth | E::InvalidConfig(_) => 2,
    }
}

impl From<commenhance::Error> for CliError {
    fn from(err: commenhance::Error) -> Self {
        match err {
            commenhance::Error::Detector(inner) => match inner.downcast::<ExternalError>() {
                Ok(external) => CliError::Child(*external),
                Err(other) => CliError::Core(commenhance::Error::Detector(other)),
            },
            other => CliError::Core(other),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
