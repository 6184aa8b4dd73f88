use thiserror::Error;

/// Errors raised by the planning library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("coordinate {index} is not finite")]
    NonFinite { index: usize },

    #[error("polyline must have at least one vertex")]
    EmptyPolyline,

    #[error("concatenated paths must end at the same vertex")]
    EndpointMismatch,

    #[error("point lies outside the world bounds")]
    OutOfBounds,

    #[error("{0} is not in free space")]
    BlockedEndpoint(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("node {0} is not on the wavefront")]
    NotInWavefront(usize),

    #[error("free space appears empty: {0} consecutive rejected samples")]
    SamplingExhausted(u64),

    #[error("obstacle coverage {target} unreachable (reached {reached} after {rejections} rejections)")]
    CoverageUnreachable {
        target: f64,
        reached: f64,
        rejections: u64,
    },

    #[error("invalid scenario: {0}")]
    Scenario(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
