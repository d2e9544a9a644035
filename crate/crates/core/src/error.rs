use std::fmt;

/// Errors raised anywhere in the inference pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    #[error("overflow in {func}: {detail}")]
    Overflow { func: &'static str, detail: String },

    #[error("quadrature failed on box {region}: {detail}")]
    Quadrature { region: String, detail: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("line {line}: cannot parse {content:?} as a real number")]
    Parse { line: usize, content: String },

    #[error("line {line}: lifetime must be positive, got {value}")]
    NonPositive { line: usize, value: f64 },

    #[error("dataset is empty")]
    Empty,

    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn domain(func: &'static str, detail: impl fmt::Display) -> Self {
        Error::Domain {
            func,
            detail: detail.to_string(),
        }
    }

    pub(crate) fn overflow(func: &'static str, detail: impl fmt::Display) -> Self {
        Error::Overflow {
            func,
            detail: detail.to_string(),
        }
    }
}
