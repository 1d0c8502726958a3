use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}, line {line}: {msg}")]
    Config {
        path: String,
        line: usize,
        msg: String,
    },

    #[error(transparent)]
    Model(#[from] twoway_fso::Error),

    #[error("{context}: {source}")]
    Row {
        context: String,
        #[source]
        source: twoway_fso::Error,
    },

    #[error("{0} of {1} rows fall outside the analytic bounds")]
    Unbracketed(usize, usize),
}
