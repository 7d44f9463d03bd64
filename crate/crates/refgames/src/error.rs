use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    /// Zero-sum segments have a degenerate Pareto frontier; the 1D engine
    /// handles them instead of the boundary-chain machinery.
    #[error("segment domain has a degenerate frontier; use the 1D engine")]
    SegmentDomain,

    #[error("scale components must be positive, got ({0}, {1})")]
    NonPositiveScale(f64, f64),

    #[error("length mismatch: {0}")]
    LengthMismatch(String),

    #[error("empty sample set")]
    EmptySampleSet,

    #[error("{name} = {value} outside {range}")]
    DomainError {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("quantile level {0} outside the valid range")]
    QuantileOutOfRange(f64),

    #[error("input measure has total mass {0}, expected 1")]
    UnnormalizedInput(f64),

    #[error("did not converge within {steps} steps (sup CDF distance {sup_dist:.3e})")]
    NotConverged { steps: u32, sup_dist: f64 },

    #[error("eps schedule needs at least two strictly decreasing entries in (0, 1/2]")]
    ScheduleTooShort,

    #[error("invalid game spec: {0}")]
    InvalidSpec(String),

    #[error("sample {0:?} lies outside the domain")]
    SampleOutsideDomain([f64; 2]),

    #[error("config error: {0}")]
    Config(String),

    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
