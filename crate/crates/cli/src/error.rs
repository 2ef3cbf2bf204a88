use kloosterlab::Error as CoreError;
use serde_json::json;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, config keys or parameter values.
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    /// Some sweep entries failed; the aggregate report was still written.
    #[error("{failed} of {total} experiments failed")]
    Partial { failed: usize, total: usize, code: i32 },
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn io(path: impl std::fmt::Display, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_string(),
            source,
        }
    }

    /// 2 for invalid input, 3 for cost-guard refusals, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) => match e {
                CoreError::CostGuard(_) => 3,
                CoreError::Io(_) | CoreError::Cache(_) => 1,
                _ => 2,
            },
            CliError::Io { .. } => 1,
            CliError::Partial { code, .. } => *code,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Core(e) => match e {
                CoreError::CostGuard(_) => "refused",
                CoreError::Io(_) => "io",
                CoreError::Cache(_) => "cache",
                CoreError::DegeneratePolynomial(_) => "degenerate_polynomial",
                CoreError::NotPrime(_) => "not_prime",
                CoreError::Unsupported(_) => "unsupported",
                _ => "domain",
            },
            CliError::Io { .. } => "io",
            CliError::Partial { .. } => "partial_failure",
        }
    }

    /// One-line JSON error record for stderr.
    pub fn record(&self) -> String {
        json!({
            "error": self.kind(),
            "exit_code": self.exit_code(),
            "message": self.to_string(),
        })
        .to_string()
    }
}
