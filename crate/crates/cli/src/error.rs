use smoothspec::Error as CoreError;

pub type Result<T, E = CliError> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("bad state spec `{spec}`: {reason}")]
    BadSpec { spec: String, reason: String },
    #[error("{0}")]
    BadArgument(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Core(#[from] CoreError),
}

impl CliError {
    pub fn bad_spec(spec: &str, reason: impl Into<String>) -> Self {
        Self::BadSpec { spec: spec.to_string(), reason: reason.into() }
    }

    /// 2 for bad input, 3 for numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(
                CoreError::DecompositionFailure { .. }
                | CoreError::NonConvergence { .. }
                | CoreError::NoFeasibleGamma
                | CoreError::ConstructionFailure(_),
            ) => 3,
            _ => 2,
        }
    }
}
