use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("eigensolver did not converge on a {dim}x{dim} operator")]
    DecompositionFailure { dim: usize },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operator is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("operator is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("state is not normalized (trace {trace})")]
    NotNormalized { trace: f64 },

    #[error("trace {trace} exceeds 1")]
    TraceTooLarge { trace: f64 },

    #[error("measurement operator has eigenvalue {eigenvalue} outside [0, 1]")]
    LambdaOutOfRange { eigenvalue: f64 },

    #[error("operator P has eigenvalue {eigenvalue} outside [0, 1]")]
    POutOfRange { eigenvalue: f64 },

    #[error("epsilon {epsilon} is not below the total mass {mass}")]
    EpsilonTooLarge { epsilon: f64, mass: f64 },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("construction failed: {0}")]
    ConstructionFailure(String),

    #[error("dimension {dim} exceeds the limit {limit}")]
    DimensionTooLarge { dim: usize, limit: usize },

    #[error("no convergence after {iterations} iterations: {context}")]
    NonConvergence { iterations: usize, context: String },

    #[error("no feasible gamma found on the sweep")]
    NoFeasibleGamma,

    #[error("{classes:e} type classes exceed the limit {limit:e}")]
    TooManyClasses { classes: f64, limit: f64 },

    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),

    #[error("gamma {gamma} must not exceed alpha {alpha}")]
    ParameterOrder { gamma: f64, alpha: f64 },

    #[error("rank budget {budget} outside [1, {dim}]")]
    RankOutOfRange { budget: usize, dim: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
