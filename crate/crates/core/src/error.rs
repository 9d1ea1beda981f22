use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure a library operation can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("input must be positive, got {0}")]
    NonPositiveInput(f64),

    #[error("{0}")]
    DomainError(String),

    #[error("could not bracket h(y) = {target} (tried y in [{lo:e}, {hi:e}])")]
    BracketFailure { target: f64, lo: f64, hi: f64 },

    #[error("quadrature did not converge (estimate {estimate}, error {error:e})")]
    QuadratureNonConvergence { estimate: f64, error: f64 },

    #[error("summand increases at j = {0}")]
    NotDecreasing(u64),

    #[error("work budget exceeded: {0}")]
    Budget(String),

    #[error("zeta has a pole at d = 1 (got d = {0})")]
    PoleAtOne(f64),

    #[error("exact counting needs an exact tail law")]
    InexactTail,

    #[error("count overflows a 64-bit integer")]
    Overflow,

    #[error("could not locate the hyperbola split point: {0}")]
    InverseFailure(String),

    #[error("{0}")]
    RegimeError(String),

    #[error("string has infinite measure")]
    InfiniteMeasure,

    #[error("no divergent/vanishing crossover on the probe grid")]
    NoCrossover,
}

impl Error {
    /// Variant name, used by the command line front end.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonPositiveInput(_) => "NonPositiveInput",
            Error::DomainError(_) => "DomainError",
            Error::BracketFailure { .. } => "BracketFailure",
            Error::QuadratureNonConvergence { .. } => "QuadratureNonConvergence",
            Error::NotDecreasing(_) => "NotDecreasing",
            Error::Budget(_) => "Budget",
            Error::PoleAtOne(_) => "PoleAtOne",
            Error::InexactTail => "InexactTail",
            Error::Overflow => "Overflow",
            Error::InverseFailure(_) => "InverseFailure",
            Error::RegimeError(_) => "RegimeError",
            Error::InfiniteMeasure => "InfiniteMeasure",
            Error::NoCrossover => "NoCrossover",
        }
    }
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::DomainError(msg.into()))
}
