use thiserror::Error;

/// Errors produced by the geometry and spectral pipelines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("multiplication operator not positive definite: {0}")]
    Definiteness(String),

    #[error("quadrature resolution insufficient: {0}")]
    Resolution(String),

    #[error(
        "eigenvalue not converged: lambda1 = {last} (previous truncation gave {previous}, \
         relative change {rel_change:.3e})"
    )]
    Convergence {
        last: f64,
        previous: f64,
        rel_change: f64,
    },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("point outside chart domain: {0}")]
    Domain(String),

    #[error("radius too large: {0}")]
    RadiusTooLarge(String),

    #[error("flow failure: {0}")]
    FlowFailure(String),

    #[error("flow consistency failure: {0}")]
    Consistency(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
