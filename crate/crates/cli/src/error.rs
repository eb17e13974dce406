use ctxevo_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Missing or malformed input: exit code 2.
    #[error("{0}")]
    Input(String),
    /// Incompatible shapes between artifacts: exit code 3.
    #[error("{0}")]
    Shape(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Shape(_) => 3,
            CliError::Internal(_) => 1,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let msg = e.to_string();
        match e {
            CoreError::Shape(_) => CliError::Shape(msg),
            CoreError::AucUndefined => CliError::Internal(msg),
            CoreError::Io { .. }
            | CoreError::Parse(_)
            | CoreError::Dataset(_)
            | CoreError::TooSmall(_)
            | CoreError::Invalid(_)
            | CoreError::Config(_) => CliError::Input(msg),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub(crate) fn write_err(path: &std::path::Path, e: std::io::Error) -> CliError {
    CliError::Input(format!("cannot write {}: {e}", path.display()))
}
