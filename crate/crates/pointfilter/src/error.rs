use thiserror::Error;

/// Errors produced by pattern construction, region algebra, estimation,
/// filtering and simulation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid window: {0}")]
    InvalidWindow(String),

    #[error("invalid region: {0}")]
    InvalidRegion(String),

    #[error("unsupported region operation: {0}")]
    UnsupportedRegion(String),

    #[error("unsupported Bessel order {0} (only 1/2, 1 and 3/2 are implemented)")]
    UnsupportedOrder(f64),

    #[error("empty point pattern")]
    EmptyPattern,

    #[error("grid error: {0}")]
    Grid(String),

    #[error("bin error: {0}")]
    Bin(String),

    #[error("no band: spectral estimate does not deviate from the Poisson baseline")]
    NoBand,

    #[error("simulation size cap exceeded: expected ~{expected:.0} points, cap {cap:.0}")]
    SizeCap { expected: f64, cap: f64 },

    #[error("point patterns live on different windows")]
    WindowMismatch,

    #[error("covariance is not positive semi-definite on the embedding torus (min eigenvalue {min_eig:.3e})")]
    Covariance { min_eig: f64 },

    #[error("region grammar: {0}")]
    Grammar(String),

    #[error("quadrature bounding box does not cover the region")]
    Coverage,

    #[error("argument out of range: {0}")]
    Range(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
