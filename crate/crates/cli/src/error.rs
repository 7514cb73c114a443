use std::path::PathBuf;

use fzspec_core::Error as CoreError;

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: line {line}: {message}", path.display())]
    Csv { path: PathBuf, line: u64, message: String },

    #[error("writing output: {0}")]
    Output(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    /// 2 usage, 3 numeric failure, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) => match e {
                CoreError::InvalidArgument(_)
                | CoreError::Parse { .. }
                | CoreError::UnsupportedLength(_)
                | CoreError::SizeCap { .. }
                | CoreError::SingularGauge { .. } => 2,
                CoreError::RootConvergence { .. }
                | CoreError::QrConvergence { .. }
                | CoreError::DegenerateMap { .. }
                | CoreError::InsufficientMaxLength(_) => 3,
            },
            CliError::Io { .. } | CliError::Csv { .. } | CliError::Output(_) => 4,
        }
    }
}
