use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("alpha out of range: {0} (expected strictly inside (0,1))")]
    AlphaOutOfRange(f64),
    #[error("invalid step size dt = {0} (must be positive and finite)")]
    InvalidStep(f64),
    #[error("sampled path is empty")]
    EmptyPath,
    #[error("sampled path contains a non-finite value at node {0}")]
    NonFiniteSample(usize),
    #[error("need at least {need} samples, got {got}")]
    TooFewSamples { need: usize, got: usize },
    #[error("quadrature did not converge: last estimate {estimate}, last delta {delta}, tol {tol}")]
    QuadratureNonConvergence {
        estimate: f64,
        delta: f64,
        tol: f64,
    },
    #[error("bump knots must be strictly increasing: ({0}, {1}, {2}, {3})")]
    InvalidKnots(f64, f64, f64, f64),
    #[error("schedule needs at least 4 points, got {0}")]
    ScheduleTooShort(usize),
    #[error("no positive derivative found on the rising edge of bump {0}")]
    NoRisingSlope(usize),
    #[error("index {index} out of range 1..={dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("norm flavor mismatch")]
    FlavorMismatch,
    #[error("time {t} outside the representable range [0, {horizon}]")]
    TimeOutOfRange { t: f64, horizon: f64 },
    #[error("operation requires the Euclidean flavor")]
    EuclideanRequired,
    #[error("fixed-point iteration did not converge within {0} iterations")]
    IterationLimit(usize),
    #[error("Mittag-Leffler series exceeded the {0}-term cap")]
    SeriesCapExceeded(usize),
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error("witness count {count} too large for a family of {family} bumps")]
    WitnessCountTooLarge { count: usize, family: usize },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid experiment config: {0}")]
    InvalidExperiment(String),
}

pub type Result<T> = std::result::Result<T, Error>;
