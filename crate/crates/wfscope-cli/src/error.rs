//! Command-line error type. Everything that should terminate the process
//! with the usage/configuration exit code funnels through `CliError`; the
//! binary prints the message and maps the variant to an exit status.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed binary signal file; `offset` is the byte at which parsing
    /// stopped making sense.
    #[error("{path}: byte {offset}: {detail}")]
    MalformedBinary { path: String, offset: usize, detail: String },

    /// Malformed CSV signal file; `line` is 1-based (line 1 is the header).
    #[error("{path}: line {line}: {detail}")]
    MalformedCsv { path: String, line: u64, detail: String },

    /// Flag/config validation failure (bad combination, unparsable value).
    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Wf(#[from] wfscope::WfError),
}

impl CliError {
    pub fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.display().to_string(), source }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
