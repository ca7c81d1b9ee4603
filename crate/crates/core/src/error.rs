use thiserror::Error;

/// Problems found while parsing or validating a constants file.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConstantsError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing header line `hcam-constants <version>`")]
    MissingHeader,
    #[error("unsupported constants format version {0}")]
    Version(u32),
    #[error("missing section [{0}]")]
    MissingSection(&'static str),
    #[error("section [{name}] has {got} bytes, expected {expected}")]
    Length {
        name: String,
        got: usize,
        expected: usize,
    },
    #[error("missing checksum line")]
    MissingChecksum,
    #[error("checksum mismatch: file says {stated}, payload hashes to {computed}")]
    Checksum { stated: String, computed: String },
    #[error("invalid table [{name}]: {reason}")]
    Invalid { name: &'static str, reason: String },
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Constants(#[from] ConstantsError),
    #[error("usage: {0}")]
    Usage(String),
    #[error("configuration: {0}")]
    Config(String),
    #[error("simulation: {0}")]
    Simulation(String),
    #[error("internal: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
