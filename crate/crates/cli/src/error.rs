use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const OK: u8 = 0;
    pub const VERIFICATION_FAILED: u8 = 1;
    pub const DOMAIN: u8 = 2;
    pub const CONFIG: u8 = 3;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("{0}")]
    Library(#[from] loggp::Error),

    #[error("verification failed: {}", .0.join(", "))]
    Verification(Vec<String>),

    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Self::Io { path: path.as_ref().display().to_string(), source }
    }

    pub fn exit_code(&self) -> u8 {
        use loggp::Error as E;
        match self {
            Self::Config(_) | Self::Io { .. } => exit::CONFIG,
            Self::Verification(_) => exit::VERIFICATION_FAILED,
            Self::Library(e) => match e {
                E::Parse { .. } | E::NoSamples | E::Io(_) => exit::CONFIG,
                E::NonFinite { .. } => exit::VERIFICATION_FAILED,
                _ => exit::DOMAIN,
            },
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
