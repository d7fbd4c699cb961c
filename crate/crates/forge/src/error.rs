use std::path::PathBuf;

pub type Result<T, E = CliError> = std::result::Result<T, E>;

/// Failure of a subcommand, carrying the process exit code it maps to.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{0}")]
    Data(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub const USAGE: i32 = 2;
    pub const DATA: i32 = 3;
    pub const IO: i32 = 4;

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => Self::USAGE,
            CliError::Data(_) => Self::DATA,
            CliError::Io { .. } => Self::IO,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

impl From<autochrome_core::Error> for CliError {
    fn from(e: autochrome_core::Error) -> Self {
        use autochrome_core::Error as E;
        match e {
            E::Io { path, source } => CliError::Io { path, source },
            E::Config(_) => CliError::Usage(e.to_string()),
            E::Format { .. } | E::Domain(_) => CliError::Data(e.to_string()),
        }
    }
}
