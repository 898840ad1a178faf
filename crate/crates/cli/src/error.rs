use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error(transparent)]
    Lib(#[from] qudit_magic::Error),
}

impl CliError {
    /// 0 success, 1 i/o, 2 domain, 3 parse.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Lib(qudit_magic::Error::Parse { .. }) => 3,
            CliError::Io(_) => 1,
            CliError::Domain(_) | CliError::Lib(_) => 2,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
