use alloc::string::String;

/// Errors raised by the numerical pipelines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(&'static str),
    #[error("requested degree {requested} exceeds grid bandwidth {bandwidth}")]
    BandwidthExceeded { requested: usize, bandwidth: usize },
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),
    #[error("parameter out of range: {0}")]
    OutOfRange(&'static str),
    #[error("function is not strictly positive (minimum {min})")]
    NotPositive { min: f64 },
    #[error("odd-degree content {max_odd:e} in an input required to be even")]
    ParityViolation { max_odd: f64 },
    #[error("Radon domination fails: margin {margin:e}")]
    DominationFails { margin: f64 },
    #[error("not applicable: {0}")]
    NotApplicable(&'static str),
    #[error("construction failed: {0}")]
    ConstructionFailed(String),
    #[error("grid too coarse: tail {tail:e} against maximum {max:e}")]
    GridTooCoarse { tail: f64, max: f64 },
    #[error("profile decays too slowly for hyperplane integrals")]
    DecayTooSlow,
    #[error("tail contribution {tail:e} too heavy against total {total:e}")]
    TailTooHeavy { tail: f64, total: f64 },
    #[error("sinogram grids do not match")]
    GridMismatch,
    #[error("an intersection-function certificate with a positive verdict is required")]
    CertificateRequired,
    #[error("invalid input: {0}")]
    InputInvalid(String),
    #[error("function cannot be evaluated: {0}")]
    NotEvaluable(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
