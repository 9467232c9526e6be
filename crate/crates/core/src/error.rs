use thiserror::Error;

/// Error type shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A graph that is supposed to be a metric tree is not one.
    #[error("invalid tree: {0}")]
    InvalidTree(String),

    /// A point does not belong to the space it was used with.
    #[error("invalid point: {0}")]
    InvalidPoint(String),

    /// A measure failed validation (weights, atoms, or support).
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An exact enumeration was requested on an instance above its size cap.
    #[error("instance too large: {size} points exceeds the cap of {max} for exact enumeration")]
    TooLarge { size: usize, max: usize },

    /// The iterative barycenter solver did not reach its tolerance.
    ///
    /// The best iterate is available from the space's own solver entry point,
    /// which reports the outcome without converting it into an error.
    #[error("barycenter iteration did not converge after {iterations} iterations (gradient norm {grad_norm:.3e})")]
    BarycenterConvergence { iterations: usize, grad_norm: f64 },

    /// A measure or space file failed semantic validation.
    #[error("invalid file: {0}")]
    Format(String),

    /// A measure or report file is not well-formed JSON.
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
